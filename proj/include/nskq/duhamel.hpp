#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nskq/nonlinear.hpp"
#include "nskq/norms.hpp"
#include "nskq/params.hpp"
#include "nskq/symbol.hpp"

namespace nskq {

/// Geometric grid t_k = T q^{K-k}, k = 1..K, with t_1/T = t_min_ratio:
/// dense near 0 so Kato sups resolve the t^{1/p} weight.
std::vector<double> make_time_grid(double T, int nodes, double t_min_ratio);

/// Measured constants of the fixed-point argument. R and rho are derived
/// from the measured K_Phi and C_tilde via 16 R K_Phi = 1/2, rho = R/(2 C~).
struct ConstantsLedger {
    double K_Phi = 0;       // max of the per-term bilinear constants (X-norm form)
    double R = 0;           // ball radius
    double rho = 0;         // smallness threshold
    double C_tilde = 0;     // linear propagator constant
    double c_delta = 0;     // local-existence constant (filled by the scaling experiment)
    double contraction_L = 0; // measured sup ||Phi x - Phi y|| / ||x - y||

    bool small_data_regime() const { return K_Phi > 0 && 16.0 * R * K_Phi < 1.0; }
};

/// Nonlinear forcing (f, g) sampled at t = 0 and at every grid node.
struct ForcingSeries {
    std::vector<double> times; // starts at 0
    std::vector<NonlinearOutput> values;
};

/// Shared Duhamel machinery: the linear trajectory W(t) data and the graded
/// s = t sigma quadrature of int_0^t W(t-s) forcing(s) ds with the forcing
/// linearly interpolated in time between grid samples.
class DuhamelOperator {
  public:
    DuhamelOperator(const FrequencyLattice& lat, const ModelParams& params,
                    const SolverConfig& cfg);

    const SemigroupApplier& semigroup() const { return applier_; }
    const std::vector<double>& grid() const { return grid_; }

    Trajectory linear_trajectory(const FlowState& data) const;

    /// Phi(x) = W(.) data + int_0^. W(.-s) (f,g)(x(s)) ds on the grid.
    Trajectory apply_phi(const Trajectory& x, const FlowState& data) const;

    /// Duhamel integral of an explicitly given forcing series (zero data).
    Trajectory integrate_forcing(const ForcingSeries& forcing) const;

    ForcingSeries sample_forcing(const Trajectory& x, const FlowState& data) const;

  private:
    void duhamel_node(const ForcingSeries& f, double t_out, FlowState& acc) const;

    FrequencyLattice lat_;
    ModelParams params_;
    SolverConfig cfg_;
    SemigroupApplier applier_;
    std::vector<double> grid_;
    std::vector<double> quad_sigma_, quad_weight_;
    mutable std::optional<NonlinearEvaluator> evaluator_;
};

struct PicardResult {
    Trajectory trajectory;
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    std::vector<double> residuals; // x_norm(Phi x_n - x_n) per sweep
    std::vector<double> iterate_norms;
    std::vector<double> y_norms; // analytic mode only; per accepted iterate
    double contraction_L = 0;
    double final_residual = 0;
};

/// Picard iteration on the whole-interval trajectory, starting from the
/// linear iterate. Divergence (5 consecutive growing residuals) is reported,
/// not thrown. In analytic mode the same iteration additionally tracks Y
/// norms; weight overflow surfaces as SaturationError.
PicardResult picard_solve(const FlowState& data, const ModelParams& params,
                          const FrequencyLattice& lat, const SolverConfig& cfg,
                          PicardMode mode = PicardMode::plain);

/// Classical Lawson(RK4) reference integrator of the frequency-space ODE,
/// exact on the linear part. Returns the state at time T.
FlowState reference_integrate(const FlowState& data, const ModelParams& params,
                              const SolverConfig& cfg, double T, int steps);

/// Step-halving wrapper: doubles `steps` until the Richardson estimate
/// |u_h - u_{h/2}|_inf / 15 is below tol (relative); throws QuadratureError
/// if the budget is exhausted or the integration blows up.
FlowState reference_integrate_richardson(const FlowState& data, const ModelParams& params,
                                         const SolverConfig& cfg, double T, int initial_steps,
                                         double tol, int max_halvings = 6);

/// Empirical bilinear constants of the five Duhamel estimates, measured on
/// random unit-Kato-norm pairs (heat-evolved random-phase power-law data).
struct BilinearReport {
    double C_f = 0, C_f_tilde = 0, C_g1 = 0, C_g2 = 0, C_g3 = 0;
    double K_Phi = 0; // max over terms of the X-norm-over-products form
    double C_f_analytic = 0, C_g1_analytic = 0; // Gevrey-weighted variants
    double analytic_factor = 0;                 // 2^{1-1/p} e^{2 c0}
    int samples = 0;
};

BilinearReport measure_bilinear_constants(const ModelParams& params, const FrequencyLattice& lat,
                                          const SolverConfig& cfg, int sample_count,
                                          std::uint64_t seed);

/// Measured linear-propagator constants:
///   delta == 0:  ||W(.) data||_{X_T} <= C ||(a0,|D|a0,u0)||_{PM^{d-1}}
///   delta  > 0:  ||W(.) data||_{X_T} <= C T^{delta/2} ||.||_{PM^{d-1+delta}}
double measure_linear_constant(const ModelParams& params, const FrequencyLattice& lat,
                               const SolverConfig& cfg, int sample_count, std::uint64_t seed,
                               double delta = 0.0);

/// Same propagator constant but for the heat flow e^{eps c0 t Laplace} on
/// PM^{d-1+2/p} data with T^{1/p} scaling (the D_{p,eps} of the bootstrap).
double measure_heat_constant_supercritical(const ModelParams& params, const FrequencyLattice& lat,
                                           const SolverConfig& cfg, double eps_c0,
                                           int sample_count, std::uint64_t seed);

/// Largest horizon with a converging iteration, bisected on a geometric grid
/// to `resolution` (multiplicative).
double largest_converging_horizon(const FlowState& data, const ModelParams& params,
                                  const FrequencyLattice& lat, SolverConfig cfg, double T_lo,
                                  double T_hi, double resolution = std::pow(2.0, 0.125));

} // namespace nskq
