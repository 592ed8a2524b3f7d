#pragma once

#include <memory>
#include <span>

#include "nskq/field.hpp"

namespace nskq {

/// Complex-to-complex FFT pair between coefficient arrays (FFT index order)
/// and physical grid values, normalized so that
///   phys_j = sum_k coeff_k e^{+i 2pi <k, j>/N},  coeff = (1/N^d) FFT_fwd(phys).
/// Products of physical values therefore transform back to the circular
/// convolution of the coefficient arrays. Plans use FFTW_ESTIMATE so that
/// identical inputs give identical outputs run to run.
class SpectralTransform {
  public:
    explicit SpectralTransform(const FrequencyLattice& lat);
    ~SpectralTransform();
    SpectralTransform(const SpectralTransform&) = delete;
    SpectralTransform& operator=(const SpectralTransform&) = delete;

    const FrequencyLattice& lattice() const { return lat_; }

    void to_physical(std::span<const Cplx> coeffs, std::span<Cplx> phys);
    void to_coeffs(std::span<const Cplx> phys, std::span<Cplx> coeffs);

  private:
    struct Impl;
    FrequencyLattice lat_;
    std::unique_ptr<Impl> impl_;
};

} // namespace nskq
