#include "nskq/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nskq/quadrature.hpp"

namespace nskq {

namespace {

constexpr double kPi = std::numbers::pi;

struct Frame {
    int d;
    double R;                 // |xi|
    std::array<double, 3> n;  // xi / |xi|
    double psi;               // d=2: angle of xi
};

Frame make_frame(const QuadratureSpec& s) {
    Frame f;
    f.d = s.d;
    f.R = s.xi_norm();
    for (int a = 0; a < 3; ++a) f.n[static_cast<std::size_t>(a)] = s.xi[static_cast<std::size_t>(a)] / f.R;
    f.psi = std::atan2(s.xi[1], s.xi[0]);
    return f;
}

// Angular mean of (A - 2Bc + B^2/A^0... ) -- concretely of
// (r2 + rho^2 + 2 sgn rho r cos(theta - psi))^{-e/2}:
//   d=2: (1/(2pi)) trapezoid over absolute angles (psi-sensitive sampling),
//   d=3: (1/2) Gauss-Legendre in u = cos(gamma) (axisymmetric).
// Returns the mean; caller multiplies by 2pi (d=2) or 4pi... we instead
// return the full angular integral (measure included, without rho^{d-1}).
double angular_full(const Frame& f, double rho, double sgn, double e, int n_ang) {
    const double R = f.R;
    if (f.d == 2) {
        double s = 0.0;
        for (int j = 0; j < n_ang; ++j) {
            const double th = 2.0 * kPi * j / n_ang;
            const double c = std::cos(th - f.psi);
            const double q = R * R + rho * rho + 2.0 * sgn * R * rho * c;
            s += std::pow(q, -0.5 * e);
        }
        return s * 2.0 * kPi / n_ang;
    }
    const Rule gl = gauss_legendre_on(n_ang, -1.0, 1.0);
    double s = 0.0;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
        const double q = R * R + rho * rho + 2.0 * sgn * R * rho * gl.x[j];
        s += gl.w[j] * std::pow(q, -0.5 * e);
    }
    return 2.0 * kPi * s;
}

// Angular integral with the cap |xi - eta| < R/2 removed (polar around 0,
// rho in (R/2, 3R/2)); u-range excludes cos(theta-psi) > c_cap.
double angular_capped(const Frame& f, double rho, double e, int n_ang) {
    const double R = f.R;
    const double c_cap = std::min(1.0, (rho * rho + 0.75 * R * R) / (2.0 * rho * R));
    if (f.d == 2) {
        const double phi = std::acos(std::clamp(c_cap, -1.0, 1.0));
        // 2 * int_phi^pi (...) du, symmetric in u -> integrate on [phi, pi].
        if (phi >= kPi) return 0.0;
        const Rule gl = gauss_legendre_on(n_ang, phi, kPi);
        double s = 0.0;
        for (std::size_t j = 0; j < gl.x.size(); ++j) {
            const double q = R * R + rho * rho - 2.0 * R * rho * std::cos(gl.x[j]);
            s += gl.w[j] * std::pow(q, -0.5 * e);
        }
        return 2.0 * s;
    }
    const Rule gl = gauss_legendre_on(n_ang, -1.0, c_cap);
    double s = 0.0;
    for (std::size_t j = 0; j < gl.x.size(); ++j) {
        const double q = R * R + rho * rho - 2.0 * R * rho * gl.x[j];
        s += gl.w[j] * std::pow(q, -0.5 * e);
    }
    return 2.0 * kPi * s;
}

struct Resolution {
    int n_rad;    // Gauss-Jacobi radial nodes in the singular balls
    int n_ang;    // angular nodes
    int n_panels; // radial panels in the annulus / far field
    int order;    // Gauss-Legendre order per panel
};

// I1: ball around xi (radius R/2), polar around xi; radial weight rho^{d-1-alpha}.
double ball_around_xi(const QuadratureSpec& s, const Frame& f, const Resolution& res) {
    const double S = 0.5 * f.R;
    const Rule gj = gauss_jacobi01(res.n_rad, f.d - 1.0 - s.alpha);
    double total = 0.0;
    for (std::size_t i = 0; i < gj.x.size(); ++i) {
        const double rho = S * gj.x[i];
        total += gj.w[i] * angular_full(f, rho, +1.0, s.beta, res.n_ang);
    }
    return std::pow(S, f.d - s.alpha) * total;
}

// I2: ball around 0, polar around 0; radial weight rho^{d-1-beta}.
double ball_around_zero(const QuadratureSpec& s, const Frame& f, const Resolution& res) {
    const double S = 0.5 * f.R;
    const Rule gj = gauss_jacobi01(res.n_rad, f.d - 1.0 - s.beta);
    double total = 0.0;
    for (std::size_t i = 0; i < gj.x.size(); ++i) {
        const double rho = S * gj.x[i];
        total += gj.w[i] * angular_full(f, rho, -1.0, s.alpha, res.n_ang);
    }
    return std::pow(S, f.d - s.beta) * total;
}

// Exterior: annulus [R/2, 3R/2] minus the cap, then [3R/2, R_out], then the
// analytic two-term tail (first angular moment vanishes over full spheres).
double exterior(const QuadratureSpec& s, const Frame& f, const Resolution& res) {
    const double R = f.R;
    double total = 0.0;

    auto radial_capped = [&](const Rule& rule) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            const double rho = rule.x[i];
            acc += rule.w[i] * std::pow(rho, f.d - 1.0 - s.beta) *
                   angular_capped(f, rho, s.alpha, res.n_ang);
        }
        return acc;
    };
    // sqrt-type kinks where the cap opens/closes at the annulus edges.
    total += radial_capped(graded_panels(0.5 * R, R, 0.5 * R, res.n_panels, 0.5, res.order));
    total += radial_capped(graded_panels(R, 1.5 * R, 1.5 * R, res.n_panels, 0.5, res.order));

    const double R_out = s.tail_factor * R;
    int far_panels = std::max(4, static_cast<int>(std::ceil(std::log2(R_out / (1.5 * R)))));
    double lo = 1.5 * R;
    for (int pnl = 0; pnl < far_panels; ++pnl) {
        const double hi = pnl == far_panels - 1 ? R_out : lo * 2.0;
        const Rule gl = gauss_legendre_on(res.order + 4, lo, hi);
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            const double rho = gl.x[i];
            total += gl.w[i] * std::pow(rho, f.d - 1.0 - s.beta) *
                     angular_full(f, rho, -1.0, s.alpha, res.n_ang);
        }
        lo = hi;
    }

    // Tail: Omega_{d-1} R_out^{d-a-b}/(a+b-d) with the second-order angular
    // moment correction (the first moment integrates to zero).
    const double ab = s.alpha + s.beta;
    const double omega = f.d == 2 ? 2.0 * kPi : 4.0 * kPi;
    const double t0 = omega * std::pow(R_out, f.d - ab) / (ab - f.d);
    const double q2 = f.d == 2 ? 0.25 * s.alpha * s.alpha : s.alpha * (s.alpha - 1.0) / 6.0;
    const double corr = q2 * (R / R_out) * (R / R_out) * (ab - f.d) / (ab + 2.0 - f.d);
    total += t0 * (1.0 + corr);
    return total;
}

RieszRegions regions_at(const QuadratureSpec& s, const Resolution& res) {
    const Frame f = make_frame(s);
    RieszRegions r;
    r.I1 = ball_around_xi(s, f, res);
    r.I2 = ball_around_zero(s, f, res);
    r.I3 = exterior(s, f, res);
    return r;
}

} // namespace

void QuadratureSpec::validate() const {
    if (d != 2 && d != 3) throw QuadratureError("riesz: d must be 2 or 3");
    if (!(alpha < d) || !(beta < d) || !(alpha + beta > d))
        throw QuadratureError("divergent integral: need alpha < d, beta < d, alpha + beta > d");
    if (!(xi_norm() > 0)) throw QuadratureError("divergent integral: xi = 0");
    if (!(rel_tol > 0)) throw QuadratureError("riesz: tolerance must be positive");
}

double QuadratureSpec::xi_norm() const {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += xi[static_cast<std::size_t>(a)] * xi[static_cast<std::size_t>(a)];
    return std::sqrt(s);
}

RieszRegions riesz_convolution_regions(const QuadratureSpec& spec) {
    spec.validate();
    RieszRegions prev{};
    for (int scale = 1; scale <= 8; scale *= 2) {
        Resolution res{spec.base_nodes * scale, 32 * scale, 10 + 4 * scale, 6};
        const RieszRegions cur = regions_at(spec, res);
        if (scale > 1) {
            const double diff = std::abs(cur.total() - prev.total());
            if (diff <= spec.rel_tol * cur.total()) return cur;
        }
        prev = cur;
    }
    throw QuadratureError("riesz_convolution: quadrature did not reach tolerance");
}

double riesz_convolution(const QuadratureSpec& spec) {
    return riesz_convolution_regions(spec).total();
}

namespace {

// One half-plane of the bisector split: polar around the singularity the
// half-plane owns. sgn = -1 integrates around 0 (kernel centered at xi),
// sgn = +1 around xi (kernel centered at 0).
double bisector_half(const QuadratureSpec& s, const Frame& f, double sing_exp, double ker_exp,
                     double sgn, int n_ang, int n_rad) {
    const double R = f.R;
    const double P = s.tail_factor * R;
    const Rule gj = gauss_jacobi01(n_rad, f.d - 1.0 - sing_exp);

    auto ray_integral = [&](double c, double angular_weight) {
        // rays leave the half-plane at rho = R/(2|c|) on the far side
        const double rho_hi = (sgn < 0 ? c > 0 : c < 0) ? std::min(P, R / (2.0 * std::abs(c))) : P;
        double acc = 0.0;
        for (std::size_t i = 0; i < gj.x.size(); ++i) {
            const double rho = rho_hi * gj.x[i];
            const double q = R * R + rho * rho + 2.0 * sgn * R * rho * c;
            acc += gj.w[i] * std::pow(q, -0.5 * ker_exp);
        }
        return angular_weight * std::pow(rho_hi, f.d - sing_exp) * acc;
    };

    double total = 0.0;
    if (f.d == 2) {
        for (int j = 0; j < n_ang; ++j) {
            const double th = 2.0 * kPi * (j + 0.5) / n_ang;
            total += ray_integral(std::cos(th - f.psi), 2.0 * kPi / n_ang);
        }
    } else {
        const Rule gl = gauss_legendre_on(n_ang, -1.0, 1.0);
        for (std::size_t j = 0; j < gl.x.size(); ++j)
            total += ray_integral(gl.x[j], 2.0 * kPi * gl.w[j]);
    }

    // Two-term analytic tail over the rays that reach P.
    const double ab = s.alpha + s.beta;
    const double other = sgn < 0 ? s.alpha : s.beta;
    if (f.d == 2) {
        total += kPi * std::pow(P, 2.0 - ab) / (ab - 2.0) +
                 (1.0 - 2.0 * other) * R * std::pow(P, 1.0 - ab) / (ab - 1.0);
    } else {
        total += 2.0 * kPi * (std::pow(P, 3.0 - ab) / (ab - 3.0) +
                              (1.0 - other) * 0.5 * R * std::pow(P, 2.0 - ab) / (ab - 2.0));
    }
    return total;
}

} // namespace

double riesz_convolution_bisector(const QuadratureSpec& spec) {
    spec.validate();
    const Frame f = make_frame(spec);
    double prev = -1.0;
    for (int scale = 1; scale <= 8; scale *= 2) {
        const int n_ang = 96 * scale, n_rad = spec.base_nodes * 2 * scale;
        const double around_zero = bisector_half(spec, f, spec.beta, spec.alpha, -1.0, n_ang, n_rad);
        const double around_xi = bisector_half(spec, f, spec.alpha, spec.beta, +1.0, n_ang, n_rad);
        const double cur = around_zero + around_xi;
        if (prev >= 0 && std::abs(cur - prev) <= spec.rel_tol * cur) return cur;
        prev = cur;
    }
    throw QuadratureError("riesz_convolution_bisector: quadrature did not reach tolerance");
}

Lemma31Report verify_lemma31(int d, double p, std::span<const double> xi_mags, double rel_tol,
                             std::optional<std::pair<double, double>> exponents) {
    if (!(p > 2) || !(d - 3 + 4.0 / p > 0))
        throw QuadratureError("verify_lemma31: need p > 2 and d - 3 + 4/p > 0");
    Lemma31Report rep;
    rep.alpha = exponents ? exponents->first : d - 1.0 + 2.0 / p;
    rep.beta = exponents ? exponents->second : d - 2.0 + 2.0 / p;
    const double golden = 2.399963229728653;
    for (std::size_t i = 0; i < xi_mags.size(); ++i) {
        QuadratureSpec spec;
        spec.d = d;
        spec.alpha = rep.alpha;
        spec.beta = rep.beta;
        spec.rel_tol = rel_tol;
        const double ang = 0.3 + golden * static_cast<double>(i);
        if (d == 2) {
            spec.xi = {xi_mags[i] * std::cos(ang), xi_mags[i] * std::sin(ang), 0.0};
        } else {
            const double z = std::cos(0.5 + 0.7 * static_cast<double>(i));
            const double r = std::sqrt(1.0 - z * z);
            spec.xi = {xi_mags[i] * r * std::cos(ang), xi_mags[i] * r * std::sin(ang),
                       xi_mags[i] * z};
        }
        const double I = riesz_convolution(spec);
        rep.xi_mags.push_back(xi_mags[i]);
        rep.normalized.push_back(I * std::pow(xi_mags[i], rep.alpha + rep.beta - d));
    }
    double sum = 0.0;
    for (double v : rep.normalized) sum += v;
    rep.mean = sum / static_cast<double>(rep.normalized.size());
    for (double v : rep.normalized)
        rep.max_rel_deviation = std::max(rep.max_rel_deviation, std::abs(v - rep.mean) / rep.mean);
    return rep;
}

namespace {

// J(K) = int_0^1 e^{-K(1-s)} s^{-2/p} ds at one resolution.
double beta_kernel_integral(double p, double K, int n) {
    const double b = -2.0 / p;
    // [0, 1/2]: Jacobi weight absorbs the s^{-2/p} singularity.
    const Rule gj = gauss_jacobi01(n, b);
    double A = 0.0;
    for (std::size_t i = 0; i < gj.x.size(); ++i) {
        const double sg = 0.5 * gj.x[i];
        A += gj.w[i] * std::exp(-K * (1.0 - sg));
    }
    A *= std::pow(0.5, b + 1.0);
    // [1/2, 1]: tau = 1-s, graded toward tau = 0 to resolve e^{-K tau}.
    const Rule pan = graded_panels(0.0, 0.5, 0.0, 44, 0.5, std::max(4, n / 8));
    double B = 0.0;
    for (std::size_t i = 0; i < pan.x.size(); ++i)
        B += pan.w[i] * std::exp(-K * pan.x[i]) * std::pow(1.0 - pan.x[i], b);
    return A + B;
}

} // namespace

BetaIntegralResult beta_time_integral(double p, double t, double delta_coef, double xi_mag) {
    if (!(p > 2)) throw QuadratureError("beta_time_integral: need p > 2");
    if (!(t >= 0) || delta_coef < 0) throw QuadratureError("beta_time_integral: bad arguments");
    BetaIntegralResult res;
    if (t == 0.0) return res; // integral -> 0 like t^{1-2/p}
    const double K = delta_coef * t * xi_mag * xi_mag;
    double prev = beta_kernel_integral(p, K, 32);
    double cur = beta_kernel_integral(p, K, 64);
    if (std::abs(cur - prev) > 1e-10 * std::abs(cur)) {
        prev = cur;
        cur = beta_kernel_integral(p, K, 128);
        if (std::abs(cur - prev) > 1e-9 * std::abs(cur))
            throw QuadratureError("beta_time_integral: endpoint quadrature failure");
    }
    res.value = std::pow(t, 1.0 - 2.0 / p) * cur;
    if (delta_coef == 0.0 || xi_mag == 0.0)
        res.bound = std::numeric_limits<double>::infinity();
    else
        res.bound = beta_constant_gamma(p) * std::pow(t, -1.0 / p) *
                    std::pow(delta_coef, -(1.0 - 1.0 / p)) * std::pow(xi_mag, -(2.0 - 2.0 / p));
    return res;
}

double beta_sigma_integral(double p) {
    if (!(p > 2)) throw QuadratureError("beta_sigma_integral: need p > 2");
    // int_0^1 (1-s)^{1/p-1} s^{-2/p} ds, singular at both endpoints; split at
    // 1/2 and absorb each singularity into a Jacobi weight.
    const int n = 96;
    const double b0 = -2.0 / p;      // at s = 0
    const double b1 = 1.0 / p - 1.0; // at s = 1
    const Rule g0 = gauss_jacobi01(n, b0);
    double A = 0.0;
    for (std::size_t i = 0; i < g0.x.size(); ++i) {
        const double sg = 0.5 * g0.x[i];
        A += g0.w[i] * std::pow(1.0 - sg, b1);
    }
    A *= std::pow(0.5, b0 + 1.0);
    const Rule g1 = gauss_jacobi01(n, b1);
    double B = 0.0;
    for (std::size_t i = 0; i < g1.x.size(); ++i) {
        const double tau = 0.5 * g1.x[i];
        B += g1.w[i] * std::pow(1.0 - tau, b0);
    }
    B *= std::pow(0.5, b1 + 1.0);
    return A + B;
}

double beta_constant_gamma(double p) {
    return std::exp(std::lgamma(1.0 - 2.0 / p) + std::lgamma(1.0 / p) - std::lgamma(1.0 - 1.0 / p));
}

} // namespace nskq
