#pragma once

#include <memory>
#include <vector>

#include "nskq/field.hpp"
#include "nskq/params.hpp"

namespace nskq {

/// Per-axis dealiasing band: modes |k_i| <= (N-1)/3 are retained. Products of
/// band-limited fields then alias only into the zeroed complement, so the
/// retained output equals the exact truncated convolution.
int dealias_limit(int N);
bool in_dealias_band(const FrequencyLattice& lat, std::size_t flat);
void apply_dealias_mask(SpectralField& field);

/// f, g = g1 + g2 + g3 of the system, in frequency space.
struct NonlinearOutput {
    SpectralField f_hat;
    std::vector<SpectralField> g_hat; // d components (sum of g1, g2, g3)
    NonlinearMethod method = NonlinearMethod::fast;
};

/// Transform-based pseudo-spectral evaluation with 2/3-rule dealiasing,
/// holding FFT plans and workspaces for repeated calls.
class NonlinearEvaluator {
  public:
    NonlinearEvaluator(const FrequencyLattice& lat, const ModelParams& params,
                       G2Contraction g2 = G2Contraction::transpose);
    ~NonlinearEvaluator();

    const FrequencyLattice& lattice() const { return lat_; }

    void eval(const FlowState& state, NonlinearOutput& out);
    NonlinearOutput eval(const FlowState& state);

    struct Impl; // exposed for the one-shot free-function wrappers

  private:
    FrequencyLattice lat_;
    ModelParams params_;
    G2Contraction g2_;
    std::unique_ptr<Impl> impl_;
};

/// f(u,a) = -u . grad a
SpectralField compute_f(const FlowState& state, NonlinearMethod method);
/// g1(u,u) = -u . grad u
std::vector<SpectralField> compute_g1(const FlowState& state, NonlinearMethod method);
/// g2(u,a) = mu grad a . grad u + (mu+nu) grad a . Du, the Du contraction
/// being injectable (transpose reading is the default).
std::vector<SpectralField> compute_g2(const FlowState& state, const ModelParams& params,
                                      NonlinearMethod method,
                                      G2Contraction g2 = G2Contraction::transpose);
/// g3(a,a) = (kappa/2) grad (grad a . grad a)
std::vector<SpectralField> compute_g3(const FlowState& state, const ModelParams& params,
                                      NonlinearMethod method);

NonlinearOutput compute_terms(const FlowState& state, const ModelParams& params,
                              NonlinearMethod method,
                              G2Contraction g2 = G2Contraction::transpose);

} // namespace nskq
