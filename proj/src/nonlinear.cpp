#include "nskq/nonlinear.hpp"

#include <cmath>
#include <cstring>

#include "nskq/fft.hpp"

namespace nskq {

namespace {

const Cplx kI(0.0, 1.0);

enum TermMask : unsigned {
    kTermF = 1u,
    kTermG1 = 2u,
    kTermG2 = 4u,
    kTermG3 = 8u,
    kTermAll = 15u,
};

bool all_real(const FlowState& s) {
    bool r = s.a.real_flagged();
    for (const auto& c : s.u) r = r && c.real_flagged();
    return r;
}

} // namespace

int dealias_limit(int N) { return (N - 1) / 3; }

bool in_dealias_band(const FrequencyLattice& lat, std::size_t flat) {
    const int kmax = dealias_limit(lat.modes_per_axis());
    for (int a = 0; a < lat.dim(); ++a)
        if (std::abs(lat.k_component(flat, a)) > kmax) return false;
    return true;
}

void apply_dealias_mask(SpectralField& field) {
    const FrequencyLattice& lat = field.lattice();
    for (std::size_t i = 0; i < lat.size(); ++i)
        if (!in_dealias_band(lat, i)) field[i] = Cplx(0);
}

// ---------------------------------------------------------------------------
// Fast path

struct NonlinearEvaluator::Impl {
    explicit Impl(const FrequencyLattice& lat)
        : fft(lat), n(lat.size()), d(lat.dim()) {
        masked_a.resize(n);
        masked_u.resize(static_cast<std::size_t>(d), std::vector<Cplx>(n));
        grad_a.resize(static_cast<std::size_t>(d), std::vector<Cplx>(n));
        vel.resize(static_cast<std::size_t>(d), std::vector<Cplx>(n));
        grad_u.resize(static_cast<std::size_t>(d * d), std::vector<Cplx>(n));
        phys_acc.resize(n);
        coeff_scratch.resize(n);
    }

    SpectralTransform fft;
    std::size_t n;
    int d;
    std::vector<Cplx> masked_a;
    std::vector<std::vector<Cplx>> masked_u;
    std::vector<std::vector<Cplx>> grad_a;  // physical d_k a
    std::vector<std::vector<Cplx>> vel;     // physical u_j
    std::vector<std::vector<Cplx>> grad_u;  // physical d_k u_j at [k*d + j]
    std::vector<Cplx> phys_acc;
    std::vector<Cplx> coeff_scratch;

    void derivative_coeffs(const FrequencyLattice& lat, const std::vector<Cplx>& in, int axis,
                           std::vector<Cplx>& out) const {
        const double h = lat.spacing();
        for (std::size_t i = 0; i < n; ++i)
            out[i] = kI * (h * lat.k_component(i, axis)) * in[i];
    }
};

NonlinearEvaluator::NonlinearEvaluator(const FrequencyLattice& lat, const ModelParams& params,
                                       G2Contraction g2)
    : lat_(lat), params_(params), g2_(g2), impl_(std::make_unique<Impl>(lat)) {}

NonlinearEvaluator::~NonlinearEvaluator() = default;

namespace {

void eval_fast(NonlinearEvaluator::Impl&, const FrequencyLattice&, const ModelParams&,
               G2Contraction, const FlowState&, NonlinearOutput&, unsigned mask);

} // namespace

void NonlinearEvaluator::eval(const FlowState& state, NonlinearOutput& out) {
    require_same_lattice(lat_, state.lattice(), "NonlinearEvaluator::eval");
    eval_fast(*impl_, lat_, params_, g2_, state, out, kTermAll);
}

NonlinearOutput NonlinearEvaluator::eval(const FlowState& state) {
    NonlinearOutput out;
    eval(state, out);
    return out;
}

namespace {

void eval_fast(NonlinearEvaluator::Impl& im, const FrequencyLattice& lat,
               const ModelParams& params, G2Contraction g2, const FlowState& state,
               NonlinearOutput& out, unsigned mask) {
    const std::size_t n = im.n;
    const int d = im.d;
    const bool real = all_real(state);
    const double h = lat.spacing();

    // Band-limited copies of the inputs.
    std::memcpy(im.masked_a.data(), state.a.coeffs().data(), n * sizeof(Cplx));
    for (int j = 0; j < d; ++j)
        std::memcpy(im.masked_u[static_cast<std::size_t>(j)].data(),
                    state.u[static_cast<std::size_t>(j)].coeffs().data(), n * sizeof(Cplx));
    for (std::size_t i = 0; i < n; ++i) {
        if (in_dealias_band(lat, i)) continue;
        im.masked_a[i] = Cplx(0);
        for (int j = 0; j < d; ++j) im.masked_u[static_cast<std::size_t>(j)][i] = Cplx(0);
    }

    const bool need_grad_a = mask & (kTermF | kTermG2 | kTermG3);
    const bool need_vel = mask & (kTermF | kTermG1);
    const bool need_grad_u = mask & (kTermG1 | kTermG2);

    if (need_grad_a)
        for (int k = 0; k < d; ++k) {
            im.derivative_coeffs(lat, im.masked_a, k, im.coeff_scratch);
            im.fft.to_physical(im.coeff_scratch, im.grad_a[static_cast<std::size_t>(k)]);
        }
    if (need_vel)
        for (int j = 0; j < d; ++j)
            im.fft.to_physical(im.masked_u[static_cast<std::size_t>(j)], im.vel[static_cast<std::size_t>(j)]);
    if (need_grad_u)
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j) {
                im.derivative_coeffs(lat, im.masked_u[static_cast<std::size_t>(j)], k,
                                     im.coeff_scratch);
                im.fft.to_physical(im.coeff_scratch,
                                   im.grad_u[static_cast<std::size_t>(k * d + j)]);
            }

    out.method = NonlinearMethod::fast;
    if (mask & kTermF) {
        for (std::size_t i = 0; i < n; ++i) {
            Cplx s(0);
            for (int j = 0; j < d; ++j)
                s += im.vel[static_cast<std::size_t>(j)][i] * im.grad_a[static_cast<std::size_t>(j)][i];
            im.phys_acc[i] = -s;
        }
        out.f_hat = SpectralField(lat, real);
        im.fft.to_coeffs(im.phys_acc, out.f_hat.coeffs());
        apply_dealias_mask(out.f_hat);
    } else {
        out.f_hat = SpectralField(lat, real);
    }

    out.g_hat.assign(static_cast<std::size_t>(d), SpectralField(lat, real));
    if (mask & (kTermG1 | kTermG2 | kTermG3)) {
        // grad a . grad a for g3, transformed once.
        std::vector<Cplx> dot_grad_a;
        if (mask & kTermG3) {
            for (std::size_t i = 0; i < n; ++i) {
                Cplx s(0);
                for (int k = 0; k < d; ++k) {
                    const Cplx g = im.grad_a[static_cast<std::size_t>(k)][i];
                    s += g * g;
                }
                im.phys_acc[i] = s;
            }
            dot_grad_a.resize(n);
            im.fft.to_coeffs(im.phys_acc, dot_grad_a);
        }
        for (int j = 0; j < d; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                Cplx s(0);
                if (mask & kTermG1)
                    for (int k = 0; k < d; ++k)
                        s -= im.vel[static_cast<std::size_t>(k)][i] *
                             im.grad_u[static_cast<std::size_t>(k * d + j)][i];
                if (mask & kTermG2) {
                    for (int k = 0; k < d; ++k) {
                        const Cplx da = im.grad_a[static_cast<std::size_t>(k)][i];
                        s += params.mu * da * im.grad_u[static_cast<std::size_t>(k * d + j)][i];
                        const Cplx du = g2 == G2Contraction::transpose
                                            ? im.grad_u[static_cast<std::size_t>(j * d + k)][i]
                                            : im.grad_u[static_cast<std::size_t>(k * d + j)][i];
                        s += (params.mu + params.nu) * da * du;
                    }
                }
                im.phys_acc[i] = s;
            }
            auto& gj = out.g_hat[static_cast<std::size_t>(j)];
            im.fft.to_coeffs(im.phys_acc, gj.coeffs());
            if (mask & kTermG3) {
                const double half_kappa = 0.5 * params.kappa;
                for (std::size_t i = 0; i < n; ++i)
                    gj[i] += half_kappa * kI * (h * lat.k_component(i, j)) * dot_grad_a[i];
            }
            apply_dealias_mask(gj);
        }
    }
}

// ---------------------------------------------------------------------------
// Oracle path: exact truncated linear convolution, O(N^{2d}).

struct OracleWork {
    const FrequencyLattice& lat;
    std::vector<std::array<int, 3>> coords;

    explicit OracleWork(const FrequencyLattice& l) : lat(l), coords(l.size()) {
        for (std::size_t i = 0; i < l.size(); ++i)
            for (int a = 0; a < l.dim(); ++a) coords[i][static_cast<std::size_t>(a)] = l.k_component(i, a);
    }

    // out(k) += scale * sum_m P(k-m) Q(m), both factors from the lattice.
    void conv_accumulate(const std::vector<Cplx>& P, const std::vector<Cplx>& Q, Cplx scale,
                         std::vector<Cplx>& out) const {
        const int d = lat.dim();
        const int N = lat.modes_per_axis();
        const std::size_t n = lat.size();
        for (std::size_t ko = 0; ko < n; ++ko) {
            Cplx acc(0);
            for (std::size_t m = 0; m < n; ++m) {
                if (Q[m] == Cplx(0)) continue;
                std::size_t flat = 0;
                bool ok = true;
                for (int a = 0; a < d; ++a) {
                    const int diff = coords[ko][static_cast<std::size_t>(a)] - coords[m][static_cast<std::size_t>(a)];
                    if (diff < -N / 2 || diff >= N / 2) {
                        ok = false;
                        break;
                    }
                    const int idx = diff >= 0 ? diff : diff + N;
                    flat = flat * static_cast<std::size_t>(N) + static_cast<std::size_t>(idx);
                }
                if (ok) acc += P[flat] * Q[m];
            }
            out[ko] += scale * acc;
        }
    }
};

namespace {

std::vector<Cplx> derivative(const FrequencyLattice& lat, const SpectralField& f, int axis) {
    std::vector<Cplx> out(lat.size());
    const double h = lat.spacing();
    for (std::size_t i = 0; i < lat.size(); ++i)
        out[i] = kI * (h * lat.k_component(i, axis)) * f[i];
    return out;
}

void eval_oracle(const FrequencyLattice& lat, const ModelParams& params, G2Contraction g2,
                 const FlowState& state, NonlinearOutput& out, unsigned mask) {
    const int d = lat.dim();
    const bool real = all_real(state);
    OracleWork work(lat);

    std::vector<std::vector<Cplx>> da(static_cast<std::size_t>(d));
    std::vector<std::vector<Cplx>> du(static_cast<std::size_t>(d * d)); // [k*d+j] = d_k u_j
    if (mask & (kTermF | kTermG2 | kTermG3))
        for (int k = 0; k < d; ++k) da[static_cast<std::size_t>(k)] = derivative(lat, state.a, k);
    if (mask & (kTermG1 | kTermG2))
        for (int k = 0; k < d; ++k)
            for (int j = 0; j < d; ++j)
                du[static_cast<std::size_t>(k * d + j)] =
                    derivative(lat, state.u[static_cast<std::size_t>(j)], k);

    auto raw = [](const SpectralField& f) {
        return std::vector<Cplx>(f.coeffs().begin(), f.coeffs().end());
    };

    out.method = NonlinearMethod::oracle;
    out.f_hat = SpectralField(lat, real);
    out.g_hat.assign(static_cast<std::size_t>(d), SpectralField(lat, real));

    if (mask & kTermF) {
        std::vector<Cplx> acc(lat.size(), Cplx(0));
        for (int j = 0; j < d; ++j)
            work.conv_accumulate(raw(state.u[static_cast<std::size_t>(j)]), da[static_cast<std::size_t>(j)],
                                 Cplx(-1.0), acc);
        std::copy(acc.begin(), acc.end(), out.f_hat.coeffs().begin());
    }
    for (int j = 0; j < d; ++j) {
        std::vector<Cplx> acc(lat.size(), Cplx(0));
        if (mask & kTermG1)
            for (int k = 0; k < d; ++k)
                work.conv_accumulate(raw(state.u[static_cast<std::size_t>(k)]),
                                     du[static_cast<std::size_t>(k * d + j)], Cplx(-1.0), acc);
        if (mask & kTermG2)
            for (int k = 0; k < d; ++k) {
                work.conv_accumulate(da[static_cast<std::size_t>(k)],
                                     du[static_cast<std::size_t>(k * d + j)], Cplx(params.mu), acc);
                const auto& second = g2 == G2Contraction::transpose
                                         ? du[static_cast<std::size_t>(j * d + k)]
                                         : du[static_cast<std::size_t>(k * d + j)];
                work.conv_accumulate(da[static_cast<std::size_t>(k)], second,
                                     Cplx(params.mu + params.nu), acc);
            }
        if (mask & kTermG3) {
            std::vector<Cplx> dot(lat.size(), Cplx(0));
            for (int k = 0; k < d; ++k)
                work.conv_accumulate(da[static_cast<std::size_t>(k)], da[static_cast<std::size_t>(k)],
                                     Cplx(1.0), dot);
            const double h = lat.spacing();
            for (std::size_t i = 0; i < lat.size(); ++i)
                acc[i] += 0.5 * params.kappa * kI * (h * lat.k_component(i, j)) * dot[i];
        }
        std::copy(acc.begin(), acc.end(), out.g_hat[static_cast<std::size_t>(j)].coeffs().begin());
    }
}

NonlinearOutput eval_any(const FlowState& state, const ModelParams& params, NonlinearMethod method,
                         G2Contraction g2, unsigned mask) {
    NonlinearOutput out;
    if (method == NonlinearMethod::oracle) {
        eval_oracle(state.lattice(), params, g2, state, out, mask);
    } else {
        NonlinearEvaluator::Impl im(state.lattice());
        eval_fast(im, state.lattice(), params, g2, state, out, mask);
    }
    return out;
}

} // namespace

SpectralField compute_f(const FlowState& state, NonlinearMethod method) {
    return eval_any(state, ModelParams(), method, G2Contraction::transpose, kTermF).f_hat;
}

std::vector<SpectralField> compute_g1(const FlowState& state, NonlinearMethod method) {
    return eval_any(state, ModelParams(), method, G2Contraction::transpose, kTermG1).g_hat;
}

std::vector<SpectralField> compute_g2(const FlowState& state, const ModelParams& params,
                                      NonlinearMethod method, G2Contraction g2) {
    return eval_any(state, params, method, g2, kTermG2).g_hat;
}

std::vector<SpectralField> compute_g3(const FlowState& state, const ModelParams& params,
                                      NonlinearMethod method) {
    return eval_any(state, params, method, kTermG3).g_hat;
}

NonlinearOutput compute_terms(const FlowState& state, const ModelParams& params,
                              NonlinearMethod method, G2Contraction g2) {
    return eval_any(state, params, method, g2, kTermAll);
}

} // namespace nskq
