#pragma once

#include <functional>
#include <vector>

#include "nskq/field.hpp"
#include "nskq/params.hpp"

namespace nskq {

/// sup over nonzero lattice modes of |xi|^r |u_hat(xi)|. The zero mode is
/// included only for r = 0; extreme modes are always excluded.
double pm_norm(const SpectralField& field, double r);

/// Same with an extra radial weight e^{w |xi|}. Throws SaturationError when
/// the exponent overflows at the lattice corner.
double pm_norm_exp_weighted(const SpectralField& field, double r, double w);

/// Time-indexed states on a strictly increasing grid in ]0, T].
struct Trajectory {
    std::vector<double> times;
    std::vector<FlowState> states;

    const FrequencyLattice& lattice() const { return states.front().lattice(); }
    std::size_t nodes() const { return times.size(); }
    void validate() const;
};

/// sup over sampled t of t^{1/p} * pm_norm(field(t), r + 2/p).
double kato_norm(const std::vector<double>& times, const std::vector<SpectralField>& fields,
                 double p, double r);

enum class Component { a, u }; // u = componentwise max over the d velocity slots
double kato_norm(const Trajectory& traj, Component comp, double p, double r);

/// max{ ||a||_{K^{p,d-1}}, ||a||_{K^{p,d}} } + ||u||_{K^{p,d-1}}.
double x_norm(const Trajectory& traj, const SolverConfig& cfg);

/// x_norm with every coefficient weighted by e^{c0 sqrt(t) |xi|}.
double y_norm(const Trajectory& traj, const SolverConfig& cfg, double c0);

/// Difference of two trajectories on the same grid, measured in the X norm.
double x_norm_difference(const Trajectory& x, const Trajectory& y, const SolverConfig& cfg);

} // namespace nskq
