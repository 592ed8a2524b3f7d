#pragma once

#include <string>

#include "nskq/field.hpp"
#include "nskq/rng.hpp"

namespace nskq {

/// One named coefficient generator. All generators produce real-flagged
/// fields (conjugate-symmetric coefficients), zero the zero mode and the
/// extreme modes, and have closed-form PM norms.
///   zero                          -- the zero field
///   single_mode  (mode, amplitude)-- conjugate pair at +/-k, |coeff| = A
///   power_law    (amplitude, exponent, cutoff, random_phase)
///                                 -- |coeff| = A |xi|^{-s} for 0 < |xi| <= cutoff
///   exp_tail     (amplitude, sigma0, random_phase)
///                                 -- |coeff| = A e^{-sigma0 |xi|}
struct GeneratorSpec {
    std::string kind = "zero";
    double amplitude = 0.0;
    std::vector<int> mode;                 // single_mode
    double exponent = 0.0;                 // power_law
    double cutoff = 0.0;                   // power_law; 0 = inscribed radius
    double sigma0 = 0.0;                   // exp_tail
    bool random_phase = false;
};

struct InitialDataSpec {
    GeneratorSpec a;
    GeneratorSpec u; // applied per velocity component with distinct phase streams
    std::uint64_t seed = 1;
};

SpectralField generate_field(const GeneratorSpec& spec, const FrequencyLattice& lat, Rng& rng);

/// PM^r norm the generator is guaranteed to produce, evaluated in closed
/// form over the lattice's |xi| values (exact to rounding).
double generator_pm_norm(const GeneratorSpec& spec, const FrequencyLattice& lat, double r);

FlowState generate_initial_data(const InitialDataSpec& spec, const FrequencyLattice& lat);

/// ||(a0, |D| a0, u0)||_{PM^r} = max of the three PM^r norms (|D|a0 having
/// the PM^{r+1}-norm of a0).
double weighted_data_norm(const FlowState& data, double r);

/// Random-phase power-law field with per-mode amplitude in A*[amp_lo, amp_hi],
/// used by the measurement routines.
SpectralField random_power_law_field(const FrequencyLattice& lat, double exponent, double A,
                                     double amp_lo, double amp_hi, Rng& rng);

} // namespace nskq
