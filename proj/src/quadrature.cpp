#include "nskq/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace nskq {

namespace {

// Golub-Welsch from three-term recurrence coefficients: nodes are the
// eigenvalues of the Jacobi matrix, weights mu0 * (first eigenvector entry)^2.
Rule golub_welsch(const std::vector<double>& alpha, const std::vector<double>& beta, double mu0) {
    const int n = static_cast<int>(alpha.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < n) {
            const double off = std::sqrt(beta[static_cast<std::size_t>(i + 1)]);
            J(i, i + 1) = off;
            J(i + 1, i) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    r.x.resize(static_cast<std::size_t>(n));
    r.w.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        r.x[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        r.w[static_cast<std::size_t>(i)] = mu0 * v * v;
    }
    return r;
}

} // namespace

Rule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
    std::vector<double> alpha(static_cast<std::size_t>(n), 0.0);
    std::vector<double> beta(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k < n; ++k) {
        const double kk = k;
        beta[static_cast<std::size_t>(k)] = kk * kk / (4.0 * kk * kk - 1.0);
    }
    return golub_welsch(alpha, beta, 2.0);
}

Rule gauss_jacobi01(int n, double b) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi01: n >= 1");
    if (!(b > -1.0)) throw std::invalid_argument("gauss_jacobi01: need b > -1");
    // Recurrence for Jacobi weight (1-x)^0 (1+x)^b on [-1, 1].
    std::vector<double> alpha(static_cast<std::size_t>(n));
    std::vector<double> beta(static_cast<std::size_t>(n), 0.0);
    alpha[0] = b / (b + 2.0);
    for (int k = 1; k < n; ++k) {
        const double kk = k;
        const double den = 2.0 * kk + b;
        alpha[static_cast<std::size_t>(k)] = b * b / (den * (den + 2.0));
        beta[static_cast<std::size_t>(k)] =
            4.0 * kk * kk * (kk + b) * (kk + b) / (den * den * (den + 1.0) * (den - 1.0));
    }
    const double mu0 = std::pow(2.0, b + 1.0) / (b + 1.0);
    Rule r = golub_welsch(alpha, beta, mu0);
    // Map x in [-1,1] -> sigma = (1+x)/2, absorbing sigma^b into the weight:
    // int_0^1 sigma^b g dsigma = 2^{-(b+1)} sum w_i g((1+x_i)/2).
    const double scale = std::pow(2.0, -(b + 1.0));
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        r.x[i] = 0.5 * (1.0 + r.x[i]);
        r.w[i] *= scale;
    }
    return r;
}

Rule gauss_legendre_on(int n, double a, double b) {
    Rule base = gauss_legendre(n);
    Rule r;
    r.x.reserve(base.x.size());
    r.w.reserve(base.x.size());
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < base.x.size(); ++i) {
        r.x.push_back(mid + half * base.x[i]);
        r.w.push_back(half * base.w[i]);
    }
    return r;
}

Rule graded_panels(double a, double b, double toward, int depth, double ratio, int order) {
    if (!(b > a)) throw std::invalid_argument("graded_panels: need b > a");
    if (!(ratio > 0 && ratio < 1)) throw std::invalid_argument("graded_panels: ratio in (0,1)");
    const bool at_left = toward <= a;
    const double len = b - a;
    Rule out;
    double outer = 1.0; // relative offset of the current panel's outer edge
    for (int panel = 0; panel < depth; ++panel) {
        const bool last = panel == depth - 1;
        const double inner = last ? 0.0 : outer * ratio;
        double lo, hi;
        if (at_left) {
            lo = a + inner * len;
            hi = a + outer * len;
        } else {
            lo = b - outer * len;
            hi = b - inner * len;
        }
        Rule p = gauss_legendre_on(order, lo, hi);
        out.x.insert(out.x.end(), p.x.begin(), p.x.end());
        out.w.insert(out.w.end(), p.w.begin(), p.w.end());
        outer = inner;
    }
    return out;
}

} // namespace nskq
