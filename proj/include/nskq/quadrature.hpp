#pragma once

#include <utility>
#include <vector>

namespace nskq {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [-1, 1].
Rule gauss_legendre(int n);

/// n-point rule for integrals  int_0^1 sigma^b g(sigma) dsigma  (b > -1):
/// sum_i w_i g(x_i) with the weight sigma^b absorbed into w.
Rule gauss_jacobi01(int n, double b);

/// Gauss-Legendre rule mapped to [a, b].
Rule gauss_legendre_on(int n, double a, double b);

/// Composite rule over geometric panels accumulating toward `toward`
/// (one of the endpoints): depth panels with the given ratio, `order`
/// Gauss-Legendre points each. The innermost sliver [toward, toward +/- eps]
/// is covered by its own panel, not dropped.
Rule graded_panels(double a, double b, double toward, int depth, double ratio, int order);

} // namespace nskq
