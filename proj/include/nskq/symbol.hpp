#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "nskq/field.hpp"
#include "nskq/params.hpp"

namespace nskq {

/// The (d+1)x(d+1) frequency-side symbol of the linearized system,
/// row/column 0 = density slot, 1..d = velocity slots. The evolution is
/// dU/dt = -A(xi) U + forcing, so the decaying solution operator is e^{-tA}.
struct SymbolMatrix {
    int d = 0;
    std::array<double, 3> xi{};
    std::array<Cplx, 16> entries{}; // row-major (d+1)x(d+1)

    Cplx at(int i, int j) const { return entries[static_cast<std::size_t>(i * (d + 1) + j)]; }
    Cplx& at(int i, int j) { return entries[static_cast<std::size_t>(i * (d + 1) + j)]; }
};

SymbolMatrix build_symbol(std::span<const double> xi, const ModelParams& params);

/// Transverse/compressible decomposition of e^{-tA(xi)}: the velocity part
/// orthogonal to xi decays with the scalar rate mu|xi|^2; the pair
/// (a_hat, v_hat), v_hat = (xi/|xi|).u_hat, evolves by the 2x2 block
///   B = [[0, i|xi|], [i|xi|(alpha + kappa|xi|^2), (2mu+nu)|xi|^2]].
struct SemigroupBlock {
    double xi_norm = 0.0;
    double xi_norm2 = 0.0;
    double transverse_rate = 0.0; // mu |xi|^2
    Cplx lambda_plus, lambda_minus;

    SemigroupBlock(double xi_norm_, const ModelParams& params);

    /// In-place application of e^{-tau B} to (a, v).
    void apply(double tau, Cplx& a, Cplx& v) const;

    /// Scalar pieces of e^{-tau B} = ch*I - phi*(B - m*I): returns
    /// (E00, E01, E10, E11, e^{-tau*transverse_rate}).
    std::array<Cplx, 5> propagator(double tau) const;

  private:
    double m_ = 0.0;     // (lambda+ + lambda-)/2, real
    Cplx delta_;         // (lambda+ - lambda-)/2
    double b01_mag_ = 0; // |xi|
    double b10_mag_ = 0; // |xi| (alpha + kappa |xi|^2)
};

/// e^{-tA(xi)} v for a (d+1)-vector (a_hat, u_hat), via the block decomposition.
std::vector<Cplx> semigroup_apply(double t, std::span<const double> xi, std::span<const Cplx> v,
                                  const ModelParams& params);

/// Field-level applier with per-lattice tables; exponentials are evaluated
/// once per distinct |k|^2 and reused across coefficients.
class SemigroupApplier {
  public:
    SemigroupApplier(const FrequencyLattice& lat, const ModelParams& params);

    const FrequencyLattice& lattice() const { return lat_; }

    /// out = e^{-tau A} in (a and d velocity components). in/out may alias.
    void apply(double tau, const FlowState& in, FlowState& out) const;
    FlowState apply(double tau, const FlowState& in) const;

    /// out += scale * e^{-tau A} in.
    void accumulate(double tau, const FlowState& in, double scale, FlowState& out) const;

    /// out += scale * e^{-tau A} [(1-w) lo + w hi]  (time-interpolated input).
    void accumulate_lerp(double tau, const FlowState& lo, const FlowState& hi, double w,
                         double scale, FlowState& out) const;

  private:
    template <typename Source>
    void accumulate_impl(double tau, Source&& src, double scale, FlowState& out) const;

    FrequencyLattice lat_;
    ModelParams params_;
    std::vector<std::uint32_t> group_of_;   // per flat index
    std::vector<double> group_xi_norm_;     // per group
    std::vector<SemigroupBlock> blocks_;    // per group
    mutable std::vector<std::array<Cplx, 5>> scratch_; // per-group propagators
};

/// Measured Lemma-2.1 constants: the largest c0 (binary search over a
/// log-spaced candidate grid, resolution ~1e-3) such that the weighted
/// amplification times e^{+c0 t |xi|^2} stays below cap_factor times its
/// value at the spectral prediction, together with that measured bound.
struct DecayReport {
    double c0_spectral = 0.0;
    double c0_measured = 0.0;
    double C_measured = 0.0;    // sup amplification * e^{+c0_measured t |xi|^2}
    double C_at_spectral = 0.0; // same at c0 = c0_spectral
    double worst_t = 0.0;
    double worst_xi = 0.0;
    int worst_channel = -1; // 0 = density input, 1 = parallel velocity, 2 = transverse
};

DecayReport decay_constant(const ModelParams& params, const FrequencyLattice& lat,
                           std::span<const double> t_grid, double y_max = 100.0,
                           double cap_factor = 2.0);

/// Variation-of-constants bound check at one frequency: evolves w0 under
/// forcing F (a (d+1)-vector of tau) by adaptive quadrature of the true
/// Duhamel integral and returns
///   |w(t)|_weighted / (e^{-c0 t|xi|^2} |w0|_w + int e^{-c0|xi|^2(t-tau)} |F|_w dtau),
/// the weighted magnitude being |(a, |xi| a, u)|.
double duhamel_bound_check(double t, std::span<const double> xi, std::span<const Cplx> w0,
                           const std::function<std::vector<Cplx>(double)>& forcing,
                           const ModelParams& params, double quad_tol = 1e-10);

} // namespace nskq
