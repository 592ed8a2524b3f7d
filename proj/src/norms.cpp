#include "nskq/norms.hpp"

#include <cmath>

namespace nskq {

namespace {

// Shared sup loop; weight(|xi|) multiplies |xi|^r |c|.
template <typename WeightFn>
double pm_sup(const SpectralField& field, double r, WeightFn&& weight) {
    if (r < 0) throw ConfigError("pm_norm requires r >= 0");
    const FrequencyLattice& lat = field.lattice();
    const auto c = field.coeffs();
    double best = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double mag = std::abs(c[i]);
        if (!std::isfinite(mag)) throw InvalidFieldError("non-finite coefficient in pm_norm");
        if (lat.is_extreme(i)) continue;
        const double xi2 = lat.xi_norm2(i);
        if (xi2 == 0.0) {
            if (r == 0.0) best = std::max(best, weight(0.0) * mag);
            continue;
        }
        const double xi = std::sqrt(xi2);
        const double v = std::pow(xi, r) * weight(xi) * mag;
        if (v > best) best = v;
    }
    return best;
}

} // namespace

double pm_norm(const SpectralField& field, double r) {
    return pm_sup(field, r, [](double) { return 1.0; });
}

double pm_norm_exp_weighted(const SpectralField& field, double r, double w) {
    if (w != 0.0 && w * field.lattice().corner_radius() > 700.0)
        throw SaturationError("exponential weight overflows at the lattice edge");
    return pm_sup(field, r, [w](double xi) { return std::exp(w * xi); });
}

void Trajectory::validate() const {
    if (times.empty() || times.size() != states.size())
        throw ConfigError("trajectory: empty or inconsistent grid");
    double prev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > prev)) throw ConfigError("trajectory times must be strictly increasing and positive");
        prev = times[i];
        require_same_lattice(states[i].lattice(), states[0].lattice(), "Trajectory::validate");
    }
}

double kato_norm(const std::vector<double>& times, const std::vector<SpectralField>& fields,
                 double p, double r) {
    if (times.empty() || times.size() != fields.size())
        throw ConfigError("kato_norm: empty or inconsistent trajectory");
    double best = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0)) throw ConfigError("kato_norm: times must be positive");
        const double v = std::pow(times[i], 1.0 / p) * pm_norm(fields[i], r + 2.0 / p);
        if (v > best) best = v;
    }
    return best;
}

namespace {

template <typename NodeNorm>
double kato_sup(const Trajectory& traj, NodeNorm&& node_norm) {
    traj.validate();
    double best = 0.0;
    for (std::size_t i = 0; i < traj.nodes(); ++i)
        best = std::max(best, node_norm(traj.times[i], traj.states[i]));
    return best;
}

double weighted_x_norm(const Trajectory& traj, const SolverConfig& cfg, double c0) {
    const int d = traj.lattice().dim();
    const double p = cfg.p;
    auto node_pm = [&](double t, const SpectralField& f, double r) {
        const double w = c0 == 0.0 ? 0.0 : c0 * std::sqrt(t);
        return std::pow(t, 1.0 / p) * pm_norm_exp_weighted(f, r + 2.0 / p, w);
    };
    const double a_lo = kato_sup(traj, [&](double t, const FlowState& s) {
        return node_pm(t, s.a, d - 1.0);
    });
    const double a_hi = kato_sup(traj, [&](double t, const FlowState& s) {
        return node_pm(t, s.a, static_cast<double>(d));
    });
    const double u_part = kato_sup(traj, [&](double t, const FlowState& s) {
        double m = 0.0;
        for (const auto& comp : s.u) m = std::max(m, node_pm(t, comp, d - 1.0));
        return m;
    });
    return std::max(a_lo, a_hi) + u_part;
}

} // namespace

double kato_norm(const Trajectory& traj, Component comp, double p, double r) {
    return kato_sup(traj, [&](double t, const FlowState& s) {
        if (comp == Component::a) return std::pow(t, 1.0 / p) * pm_norm(s.a, r + 2.0 / p);
        double m = 0.0;
        for (const auto& c : s.u) m = std::max(m, pm_norm(c, r + 2.0 / p));
        return std::pow(t, 1.0 / p) * m;
    });
}

double x_norm(const Trajectory& traj, const SolverConfig& cfg) {
    return weighted_x_norm(traj, cfg, 0.0);
}

double y_norm(const Trajectory& traj, const SolverConfig& cfg, double c0) {
    if (!(c0 >= 0)) throw ConfigError("y_norm requires c0 >= 0");
    return weighted_x_norm(traj, cfg, c0);
}

double x_norm_difference(const Trajectory& x, const Trajectory& y, const SolverConfig& cfg) {
    x.validate();
    y.validate();
    if (x.times != y.times) throw ConfigError("x_norm_difference: grids differ");
    Trajectory diff = x;
    for (std::size_t i = 0; i < diff.states.size(); ++i) diff.states[i] -= y.states[i];
    return x_norm(diff, cfg);
}

} // namespace nskq
