#include "nskq/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace nskq {

namespace {

const Cplx kI(0.0, 1.0);

Cplx cosh_stable(double m, Cplx z, double tau, const Cplx& em, const Cplx& ep) {
    // e^{-tau m} cosh(tau delta) without overflow; z = tau*delta.
    if (std::abs(z) < 1e-3) {
        const Cplx z2 = z * z;
        return std::exp(-tau * m) * (1.0 + z2 / 2.0 + z2 * z2 / 24.0 + z2 * z2 * z2 / 720.0);
    }
    return 0.5 * (em + ep);
}

Cplx phi_stable(double m, Cplx delta, double tau, const Cplx& em, const Cplx& ep) {
    // e^{-tau m} sinh(tau delta)/delta; series near delta -> 0 (the Jordan limit).
    const Cplx z = tau * delta;
    if (std::abs(z) < 1e-3) {
        const Cplx z2 = z * z;
        return tau * std::exp(-tau * m) *
               (1.0 + z2 / 6.0 + z2 * z2 / 120.0 + z2 * z2 * z2 / 5040.0);
    }
    return (em - ep) / (2.0 * delta);
}

} // namespace

SymbolMatrix build_symbol(std::span<const double> xi, const ModelParams& params) {
    SymbolMatrix A;
    A.d = static_cast<int>(xi.size());
    double xi2 = 0.0;
    for (int j = 0; j < A.d; ++j) {
        A.xi[static_cast<std::size_t>(j)] = xi[static_cast<std::size_t>(j)];
        xi2 += xi[static_cast<std::size_t>(j)] * xi[static_cast<std::size_t>(j)];
    }
    A.at(0, 0) = 0.0;
    for (int j = 1; j <= A.d; ++j) {
        const double xj = xi[static_cast<std::size_t>(j - 1)];
        A.at(0, j) = kI * xj;
        A.at(j, 0) = kI * (params.alpha * xj + params.kappa * xj * xi2);
        for (int k = 1; k <= A.d; ++k) {
            const double xk = xi[static_cast<std::size_t>(k - 1)];
            Cplx v = (params.mu + params.nu) * xj * xk;
            if (j == k) v += params.mu * xi2;
            A.at(j, k) = v;
        }
    }
    return A;
}

SemigroupBlock::SemigroupBlock(double xi_norm, const ModelParams& params)
    : xi_norm(xi_norm), xi_norm2(xi_norm * xi_norm) {
    transverse_rate = params.mu * xi_norm2;
    b01_mag_ = xi_norm;
    b10_mag_ = xi_norm * (params.alpha + params.kappa * xi_norm2);
    m_ = 0.5 * (2.0 * params.mu + params.nu) * xi_norm2;
    const double q = xi_norm2 * (params.alpha + params.kappa * xi_norm2);
    const Cplx delta0 = std::sqrt(Cplx(m_ * m_ - q, 0.0));
    lambda_plus = m_ + delta0;
    // lambda+ * lambda- = q exactly; the quotient form avoids the
    // m - sqrt(m^2 - q) cancellation at high frequency.
    lambda_minus = xi_norm == 0.0 ? Cplx(0.0) : q / lambda_plus;
    delta_ = 0.5 * (lambda_plus - lambda_minus);
}

std::array<Cplx, 5> SemigroupBlock::propagator(double tau) const {
    if (xi_norm == 0.0) return {Cplx(1), Cplx(0), Cplx(0), Cplx(1), Cplx(1)};
    const Cplx em = std::exp(-tau * lambda_minus);
    const Cplx ep = std::exp(-tau * lambda_plus);
    const Cplx ch = cosh_stable(m_, tau * delta_, tau, em, ep);
    const Cplx phi = phi_stable(m_, delta_, tau, em, ep);
    return {
        ch + phi * m_,          // E00
        -phi * (kI * b01_mag_), // E01
        -phi * (kI * b10_mag_), // E10
        ch - phi * m_,          // E11
        std::exp(Cplx(-tau * transverse_rate, 0.0)),
    };
}

void SemigroupBlock::apply(double tau, Cplx& a, Cplx& v) const {
    const auto E = propagator(tau);
    const Cplx a1 = E[0] * a + E[1] * v;
    const Cplx v1 = E[2] * a + E[3] * v;
    a = a1;
    v = v1;
}

std::vector<Cplx> semigroup_apply(double t, std::span<const double> xi, std::span<const Cplx> v,
                                  const ModelParams& params) {
    const int d = static_cast<int>(xi.size());
    if (static_cast<int>(v.size()) != d + 1) throw ConfigError("semigroup_apply: bad vector size");
    if (t < 0) throw ConfigError("semigroup_apply: t must be nonnegative");
    double xi2 = 0.0;
    for (double x : xi) xi2 += x * x;
    std::vector<Cplx> out(v.begin(), v.end());
    if (xi2 == 0.0) return out; // A(0) = 0
    const double xin = std::sqrt(xi2);
    const SemigroupBlock block(xin, params);
    const auto E = block.propagator(t);
    Cplx vpar(0.0);
    for (int j = 0; j < d; ++j) vpar += (xi[static_cast<std::size_t>(j)] / xin) * v[static_cast<std::size_t>(j + 1)];
    const Cplx a1 = E[0] * v[0] + E[1] * vpar;
    const Cplx v1 = E[2] * v[0] + E[3] * vpar;
    out[0] = a1;
    for (int j = 0; j < d; ++j) {
        const double e = xi[static_cast<std::size_t>(j)] / xin;
        out[static_cast<std::size_t>(j + 1)] =
            E[4] * (v[static_cast<std::size_t>(j + 1)] - e * vpar) + e * v1;
    }
    return out;
}

SemigroupApplier::SemigroupApplier(const FrequencyLattice& lat, const ModelParams& params)
    : lat_(lat), params_(params) {
    std::map<std::int64_t, std::uint32_t> ids;
    group_of_.resize(lat.size());
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const std::int64_t k2 = lat.k_norm2(i);
        auto [it, inserted] = ids.emplace(k2, static_cast<std::uint32_t>(ids.size()));
        group_of_[i] = it->second;
        if (inserted) {
            const double xin = lat.spacing() * std::sqrt(static_cast<double>(k2));
            group_xi_norm_.push_back(xin);
            blocks_.emplace_back(xin, params);
        }
    }
    scratch_.resize(blocks_.size());
}

namespace {

struct PlainSource {
    const FlowState& s;
    Cplx a(std::size_t i) const { return s.a[i]; }
    Cplx u(int j, std::size_t i) const { return s.u[static_cast<std::size_t>(j)][i]; }
};

struct LerpSource {
    const FlowState& lo;
    const FlowState& hi;
    double w;
    Cplx a(std::size_t i) const { return (1.0 - w) * lo.a[i] + w * hi.a[i]; }
    Cplx u(int j, std::size_t i) const {
        return (1.0 - w) * lo.u[static_cast<std::size_t>(j)][i] + w * hi.u[static_cast<std::size_t>(j)][i];
    }
};

} // namespace

template <typename Source>
void SemigroupApplier::accumulate_impl(double tau, Source&& src, double scale,
                                       FlowState& out) const {
    if (tau < 0) throw ConfigError("SemigroupApplier: tau must be nonnegative");
    require_same_lattice(lat_, out.lattice(), "SemigroupApplier::accumulate");
    for (std::size_t g = 0; g < blocks_.size(); ++g) scratch_[g] = blocks_[g].propagator(tau);
    const int d = lat_.dim();
    const double h = lat_.spacing();
    std::array<double, 3> dir{};
    for (std::size_t i = 0; i < lat_.size(); ++i) {
        const std::uint32_t g = group_of_[i];
        const double xin = group_xi_norm_[g];
        const Cplx a = src.a(i);
        if (xin == 0.0) {
            out.a[i] += scale * a;
            for (int j = 0; j < d; ++j) out.u[static_cast<std::size_t>(j)][i] += scale * src.u(j, i);
            continue;
        }
        const auto& E = scratch_[g];
        Cplx vpar(0.0);
        for (int j = 0; j < d; ++j) {
            dir[static_cast<std::size_t>(j)] = h * lat_.k_component(i, j) / xin;
            vpar += dir[static_cast<std::size_t>(j)] * src.u(j, i);
        }
        out.a[i] += scale * (E[0] * a + E[1] * vpar);
        const Cplx v1 = E[2] * a + E[3] * vpar;
        for (int j = 0; j < d; ++j) {
            const Cplx uj = src.u(j, i);
            out.u[static_cast<std::size_t>(j)][i] +=
                scale * (E[4] * (uj - dir[static_cast<std::size_t>(j)] * vpar) +
                         dir[static_cast<std::size_t>(j)] * v1);
        }
    }
}

void SemigroupApplier::accumulate(double tau, const FlowState& in, double scale,
                                  FlowState& out) const {
    require_same_lattice(lat_, in.lattice(), "SemigroupApplier::accumulate");
    accumulate_impl(tau, PlainSource{in}, scale, out);
}

void SemigroupApplier::accumulate_lerp(double tau, const FlowState& lo, const FlowState& hi,
                                       double w, double scale, FlowState& out) const {
    require_same_lattice(lat_, lo.lattice(), "SemigroupApplier::accumulate_lerp");
    require_same_lattice(lat_, hi.lattice(), "SemigroupApplier::accumulate_lerp");
    accumulate_impl(tau, LerpSource{lo, hi, w}, scale, out);
}

void SemigroupApplier::apply(double tau, const FlowState& in, FlowState& out) const {
    FlowState tmp(lat_, in.a.real_flagged(), in.t);
    accumulate(tau, in, 1.0, tmp);
    tmp.t = in.t;
    out = std::move(tmp);
}

FlowState SemigroupApplier::apply(double tau, const FlowState& in) const {
    FlowState out(lat_);
    apply(tau, in, out);
    return out;
}

namespace {

// Weighted magnitude |(a, |xi| a, u)| of a (d+1) frequency vector.
double weighted_mag(std::span<const Cplx> w, double xi_norm) {
    double s = std::norm(w[0]) * (1.0 + xi_norm * xi_norm);
    for (std::size_t j = 1; j < w.size(); ++j) s += std::norm(w[j]);
    return std::sqrt(s);
}

} // namespace

DecayReport decay_constant(const ModelParams& params, const FrequencyLattice& lat,
                           std::span<const double> t_grid, double y_max, double cap_factor) {
    if (t_grid.empty()) throw ConfigError("decay_constant: empty time grid");
    params.validate();

    // Distinct |xi| values on the lattice.
    std::map<std::int64_t, bool> seen;
    std::vector<double> xi_mags;
    for (std::size_t i = 0; i < lat.size(); ++i) {
        const std::int64_t k2 = lat.k_norm2(i);
        if (k2 == 0 || lat.is_extreme(i)) continue;
        if (seen.emplace(k2, true).second)
            xi_mags.push_back(lat.spacing() * std::sqrt(static_cast<double>(k2)));
    }
    std::sort(xi_mags.begin(), xi_mags.end());

    struct Sample {
        double y, amp, t, xi;
        int channel;
    };
    std::vector<Sample> samples;
    samples.reserve(xi_mags.size() * t_grid.size() * 3);

    for (double xin : xi_mags) {
        const SemigroupBlock block(xin, params);
        if (!(block.lambda_plus.real() > 0) || !(block.lambda_minus.real() > 0))
            throw ModelParameterError("non-decaying linear mode");
        const double w0a = std::sqrt(1.0 + xin * xin);
        for (double t : t_grid) {
            if (t < 0) throw ConfigError("decay_constant: negative time");
            const double y = t * xin * xin;
            if (y > y_max) continue;
            const auto E = block.propagator(t);
            // density input (1, 0)
            {
                const double wt = std::sqrt(std::norm(E[0]) * (1.0 + xin * xin) + std::norm(E[2]));
                samples.push_back({y, wt / w0a, t, xin, 0});
            }
            // parallel velocity input (0, 1)
            {
                const double wt = std::sqrt(std::norm(E[1]) * (1.0 + xin * xin) + std::norm(E[3]));
                samples.push_back({y, wt, t, xin, 1});
            }
            // transverse velocity
            samples.push_back({y, std::abs(E[4]), t, xin, 2});
        }
    }

    auto measure_C = [&](double c0) {
        double best = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double v = samples[i].amp * std::exp(c0 * samples[i].y);
            if (v > best) {
                best = v;
                arg = i;
            }
        }
        return std::pair<double, std::size_t>(best, arg);
    };

    DecayReport rep;
    rep.c0_spectral = params.spectral_c0();
    rep.C_at_spectral = measure_C(rep.c0_spectral).first;
    const double cap = cap_factor * rep.C_at_spectral;

    // Log-spaced candidates around the spectral prediction, ~0.1% resolution.
    const double lo = 0.25, hi = 4.0, step = 1e-3;
    const int n_cand = static_cast<int>(std::log(hi / lo) / step) + 1;
    auto candidate = [&](int i) { return rep.c0_spectral * lo * std::exp(step * i); };
    // C(c0) is increasing in c0: binary search the last candidate under the cap.
    int a = 0, b = n_cand - 1;
    if (measure_C(candidate(0)).first > cap) {
        a = -1;
    } else {
        while (a < b) {
            const int mid = (a + b + 1) / 2;
            if (measure_C(candidate(mid)).first <= cap)
                a = mid;
            else
                b = mid - 1;
        }
    }
    rep.c0_measured = a < 0 ? 0.0 : candidate(a);
    const auto [C, arg] = measure_C(rep.c0_measured);
    rep.C_measured = C;
    rep.worst_t = samples[arg].t;
    rep.worst_xi = samples[arg].xi;
    rep.worst_channel = samples[arg].channel;
    return rep;
}

double duhamel_bound_check(double t, std::span<const double> xi, std::span<const Cplx> w0,
                           const std::function<std::vector<Cplx>(double)>& forcing,
                           const ModelParams& params, double quad_tol) {
    const int d = static_cast<int>(xi.size());
    if (static_cast<int>(w0.size()) != d + 1) throw ConfigError("duhamel_bound_check: bad w0");
    double xi2 = 0.0;
    for (double x : xi) xi2 += x * x;
    const double xin = std::sqrt(xi2);

    const std::vector<Cplx> hom = semigroup_apply(t, xi, w0, params);
    const double rhs_hom = std::exp(-params.c0 * xi2 * t) * weighted_mag(w0, xin);

    if (t == 0.0) {
        const double lhs0 = weighted_mag(hom, xin);
        return rhs_hom == 0.0 ? 0.0 : lhs0 / rhs_hom;
    }

    // Composite Gauss-Legendre in tau, panels doubled until both integrals settle.
    static const double gx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                 0.8611363115940526};
    static const double gw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                 0.3478548451374538};
    std::vector<Cplx> integral(static_cast<std::size_t>(d + 1));
    double rhs_inh = 0.0;
    double prev_lhs = -1.0, prev_rhs = -1.0;
    for (int panels = 8; panels <= 4096; panels *= 2) {
        std::fill(integral.begin(), integral.end(), Cplx(0));
        rhs_inh = 0.0;
        const double hstep = t / panels;
        for (int pnl = 0; pnl < panels; ++pnl) {
            const double mid = (pnl + 0.5) * hstep;
            for (int q = 0; q < 4; ++q) {
                const double tau = mid + 0.5 * hstep * gx[q];
                const double w = 0.5 * hstep * gw[q];
                const std::vector<Cplx> F = forcing(tau);
                if (static_cast<int>(F.size()) != d + 1)
                    throw ConfigError("duhamel_bound_check: bad forcing size");
                const std::vector<Cplx> prop = semigroup_apply(t - tau, xi, F, params);
                for (int j = 0; j <= d; ++j) integral[static_cast<std::size_t>(j)] += w * prop[static_cast<std::size_t>(j)];
                rhs_inh += w * std::exp(-params.c0 * xi2 * (t - tau)) * weighted_mag(F, xin);
            }
        }
        std::vector<Cplx> wt(hom);
        for (int j = 0; j <= d; ++j) wt[static_cast<std::size_t>(j)] += integral[static_cast<std::size_t>(j)];
        const double lhs = weighted_mag(wt, xin);
        const double rhs = rhs_hom + rhs_inh;
        const double scale = std::max({lhs, rhs, 1e-300});
        if (prev_lhs >= 0 && std::abs(lhs - prev_lhs) <= quad_tol * scale &&
            std::abs(rhs - prev_rhs) <= quad_tol * scale) {
            return rhs == 0.0 ? 0.0 : lhs / rhs;
        }
        prev_lhs = lhs;
        prev_rhs = rhs;
    }
    throw QuadratureError("duhamel_bound_check: quadrature did not converge");
}

} // namespace nskq
