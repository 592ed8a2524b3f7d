#pragma once

#include <complex>
#include <span>
#include <vector>

#include "nskq/lattice.hpp"

namespace nskq {

using Cplx = std::complex<double>;

/// Complex Fourier coefficients of one scalar field on a frequency lattice.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const FrequencyLattice& lat, bool real_flagged = false)
        : lat_(lat), real_(real_flagged), c_(lat.size(), Cplx(0, 0)) {}

    const FrequencyLattice& lattice() const { return lat_; }
    bool real_flagged() const { return real_; }
    void set_real_flagged(bool f) { real_ = f; }

    std::span<const Cplx> coeffs() const { return c_; }
    std::span<Cplx> coeffs() { return c_; }
    const Cplx& operator[](std::size_t flat) const { return c_[flat]; }
    Cplx& operator[](std::size_t flat) { return c_[flat]; }

    Cplx at(std::span<const int> k) const { return c_[lat_.index_of(k)]; }
    void set(std::span<const int> k, Cplx v) { c_[lat_.index_of(k)] = v; }
    Cplx at(int kx, int ky) const { return at(std::array<int, 2>{kx, ky}); }
    void set(int kx, int ky, Cplx v) { set(std::array<int, 2>{kx, ky}, v); }

    /// Throws InvalidFieldError on NaN/Inf, and (for real-flagged fields)
    /// when conjugate symmetry fails beyond `sym_tol` on paired modes.
    void validate(double sym_tol = 1e-12) const;

    double max_abs() const;

    SpectralField& operator*=(double s);
    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);

  private:
    FrequencyLattice lat_;
    bool real_ = false;
    std::vector<Cplx> c_;
};

/// State (a, u) of the flow at one time: scalar log-density perturbation and
/// d velocity components, all on one lattice.
struct FlowState {
    SpectralField a;
    std::vector<SpectralField> u;
    double t = 0.0;

    FlowState() = default;
    explicit FlowState(const FrequencyLattice& lat, bool real_flagged = false, double time = 0.0)
        : a(lat, real_flagged), u(lat.dim(), SpectralField(lat, real_flagged)), t(time) {}

    const FrequencyLattice& lattice() const { return a.lattice(); }
    int dim() const { return a.lattice().dim(); }
    void validate(double sym_tol = 1e-12) const;

    FlowState& operator*=(double s);
    FlowState& operator+=(const FlowState& o);
    FlowState& operator-=(const FlowState& o);
};

/// y += a * x over all components.
void axpy(FlowState& y, double a, const FlowState& x);

double max_abs(const FlowState& s);

/// Relative l_inf distance max|x - y| / max|y| over all components (0 when
/// both vanish).
double rel_linf_distance(const FlowState& x, const FlowState& y);

} // namespace nskq
