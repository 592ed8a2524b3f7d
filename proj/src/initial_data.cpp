#include "nskq/initial_data.hpp"

#include <cmath>
#include <numbers>

#include "nskq/norms.hpp"

namespace nskq {

namespace {

// Lexicographically positive half of the lattice: first nonzero component of
// k is positive. Each conjugate pair is visited once, through its positive
// member, in flat-index order (this fixes the phase-draw order).
bool positive_half(const FrequencyLattice& lat, std::size_t flat) {
    for (int a = 0; a < lat.dim(); ++a) {
        const int k = lat.k_component(flat, a);
        if (k > 0) return true;
        if (k < 0) return false;
    }
    return false; // zero mode
}

template <typename Envelope>
SpectralField envelope_field(const FrequencyLattice& lat, bool random_phase, Rng& rng,
                             Envelope&& env) {
    SpectralField f(lat, true);
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (!positive_half(lat, i) || lat.is_extreme(i)) continue;
        const std::size_t ni = lat.negated_index(i);
        if (lat.is_extreme(ni)) continue;
        const double mag = env(std::sqrt(lat.xi_norm2(i)));
        if (mag == 0.0) continue;
        double phase = 0.0;
        if (random_phase) phase = 2.0 * std::numbers::pi * rng.uniform01();
        const Cplx v = std::polar(mag, phase);
        f[i] = v;
        f[ni] = std::conj(v);
    }
    return f;
}

} // namespace

SpectralField generate_field(const GeneratorSpec& spec, const FrequencyLattice& lat, Rng& rng) {
    if (spec.kind == "zero") return SpectralField(lat, true);
    if (spec.kind == "single_mode") {
        if (static_cast<int>(spec.mode.size()) != lat.dim())
            throw ConfigError("single_mode: mode must have d components");
        SpectralField f(lat, true);
        const std::size_t i = lat.index_of(spec.mode);
        if (lat.is_zero_mode(i) || lat.is_extreme(i) || lat.is_extreme(lat.negated_index(i)))
            throw ConfigError("single_mode: mode must be nonzero and pairable");
        f[i] = Cplx(spec.amplitude, 0.0);
        f[lat.negated_index(i)] = Cplx(spec.amplitude, 0.0);
        return f;
    }
    if (spec.kind == "power_law") {
        const double cutoff = spec.cutoff > 0 ? spec.cutoff : lat.inscribed_radius();
        const double s = spec.exponent, A = spec.amplitude;
        return envelope_field(lat, spec.random_phase, rng, [=](double xi) {
            return xi > 0 && xi <= cutoff * (1 + 1e-12) ? A * std::pow(xi, -s) : 0.0;
        });
    }
    if (spec.kind == "exp_tail") {
        const double A = spec.amplitude, s0 = spec.sigma0;
        return envelope_field(lat, spec.random_phase, rng,
                              [=](double xi) { return A * std::exp(-s0 * xi); });
    }
    throw ConfigError("unknown generator kind: " + spec.kind);
}

double generator_pm_norm(const GeneratorSpec& spec, const FrequencyLattice& lat, double r) {
    if (spec.kind == "zero") return 0.0;
    if (spec.kind == "single_mode") {
        const std::size_t i = lat.index_of(spec.mode);
        return spec.amplitude * std::pow(std::sqrt(lat.xi_norm2(i)), r);
    }
    // Envelope generators: exact max of |xi|^r * envelope over the lattice's
    // (non-extreme, pairable) |xi| values.
    double best = 0.0;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        if (!positive_half(lat, i) || lat.is_extreme(i) || lat.is_extreme(lat.negated_index(i)))
            continue;
        const double xi = std::sqrt(lat.xi_norm2(i));
        double mag = 0.0;
        if (spec.kind == "power_law") {
            const double cutoff = spec.cutoff > 0 ? spec.cutoff : lat.inscribed_radius();
            mag = xi > 0 && xi <= cutoff * (1 + 1e-12) ? spec.amplitude * std::pow(xi, -spec.exponent)
                                                       : 0.0;
        } else if (spec.kind == "exp_tail") {
            mag = spec.amplitude * std::exp(-spec.sigma0 * xi);
        } else {
            throw ConfigError("unknown generator kind: " + spec.kind);
        }
        best = std::max(best, std::pow(xi, r) * mag);
    }
    return best;
}

FlowState generate_initial_data(const InitialDataSpec& spec, const FrequencyLattice& lat) {
    FlowState state(lat, true, 0.0);
    Rng rng_a(spec.seed);
    state.a = generate_field(spec.a, lat, rng_a);
    for (int j = 0; j < lat.dim(); ++j) {
        Rng rng_u(spec.seed ^ (0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(j + 1)));
        state.u[static_cast<std::size_t>(j)] = generate_field(spec.u, lat, rng_u);
    }
    state.validate();
    return state;
}

double weighted_data_norm(const FlowState& data, double r) {
    double n = std::max(pm_norm(data.a, r), pm_norm(data.a, r + 1.0));
    for (const auto& comp : data.u) n = std::max(n, pm_norm(comp, r));
    return n;
}

SpectralField random_power_law_field(const FrequencyLattice& lat, double exponent, double A,
                                     double amp_lo, double amp_hi, Rng& rng) {
    return envelope_field(lat, true, rng, [&](double xi) {
        return xi > 0 ? A * rng.uniform(amp_lo, amp_hi) * std::pow(xi, -exponent) : 0.0;
    });
}

} // namespace nskq
