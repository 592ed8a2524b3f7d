#pragma once

#include <string>

#include "nskq/errors.hpp"

namespace nskq {

/// Physical constants of the quantum-pressure system plus the derived
/// parabolic decay constant c0 of the linearized semigroup.
struct ModelParams {
    double mu = 1.0;    // shear viscosity, > 0
    double nu = 1.0;    // bulk viscosity, mu + nu > 0
    double kappa = 1.0; // capillarity, > 0
    double alpha = 1.0; // pressure constant, > 0
    double c0 = 0.0;    // decay constant, > 0 (spectral prediction by default)

    ModelParams() { c0 = spectral_c0(); }
    ModelParams(double mu_, double nu_, double kappa_, double alpha_, double c0_ = 0.0)
        : mu(mu_), nu(nu_), kappa(kappa_), alpha(alpha_), c0(c0_) {
        validate();
        if (c0 <= 0.0) c0 = spectral_c0();
    }

    void validate() const {
        if (!(mu > 0)) throw ModelParameterError("mu must be positive");
        if (!(mu + nu > 0)) throw ModelParameterError("mu + nu must be positive");
        if (!(kappa > 0)) throw ModelParameterError("kappa must be positive");
        if (!(alpha > 0)) throw ModelParameterError("alpha must be positive");
    }

    /// inf over xi != 0 of min(mu, Re lambda_-(xi)/|xi|^2): the transverse
    /// channel decays at exactly mu; the compressible pair at rate
    /// (2mu+nu)/2 while complex, decreasing to ((2mu+nu)-sqrt((2mu+nu)^2-4kappa))/2
    /// once the discriminant turns positive.
    double spectral_c0() const;
};

enum class G2Contraction {
    transpose, // (grad a . Du)_j = sum_k d_k a d_j u_k   (default reading)
    gradient,  // (grad a . Du)_j = sum_k d_k a d_k u_j   (collapses onto the first term)
};

enum class NonlinearMethod { oracle, fast };
enum class PicardMode { plain, analytic };

/// Solver-side configuration: Kato exponent, horizon, grids and tolerances.
struct SolverConfig {
    double p = 3.0;         // Kato exponent, p > 2 and d - 3 + 4/p > 0
    double delta = 2.0 / 3; // supercritical shift in (0, 2/p]
    double T = 1.0;         // horizon

    int time_nodes = 32;        // geometric grid t_k = T * q^(K-k)
    double t_min_ratio = 1e-4;  // t_1 / T

    int quad_panels_per_side = 18; // geometric grading depth toward each endpoint
    int quad_order = 3;           // Gauss-Legendre points per panel
    double quad_sigma_min = 1e-8; // grading floor; [0, sigma_min] dropped

    double picard_tol = 1e-10; // relative fixed-point residual in the X norm
    int max_iterations = 40;
    int divergence_streak = 5; // growing residuals in a row => divergence

    bool include_nonlinear = true;
    NonlinearMethod method = NonlinearMethod::fast;
    G2Contraction g2_contraction = G2Contraction::transpose;
    double decay_cap_factor = 2.0;

    void validate(int d) const {
        if (!(p > 2)) throw ConfigError("p must exceed 2");
        if (!(d - 3 + 4.0 / p > 0)) throw ConfigError("need d - 3 + 4/p > 0");
        if (!(delta > 0 && delta <= 2.0 / p)) throw ConfigError("delta must lie in (0, 2/p]");
        if (!(T > 0)) throw ConfigError("horizon T must be positive");
        if (time_nodes < 2) throw ConfigError("need at least 2 time nodes");
        if (!(t_min_ratio > 0 && t_min_ratio < 1)) throw ConfigError("t_min_ratio in (0,1)");
        if (quad_panels_per_side < 2 || quad_order < 1) throw ConfigError("bad quadrature config");
    }
};

} // namespace nskq
