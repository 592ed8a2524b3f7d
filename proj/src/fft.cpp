#include "nskq/fft.hpp"

#include <cstring>

#include <fftw3.h>

namespace nskq {

struct SpectralTransform::Impl {
    fftw_complex* buf_in = nullptr;
    fftw_complex* buf_out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    std::size_t n = 0;
};

SpectralTransform::SpectralTransform(const FrequencyLattice& lat)
    : lat_(lat), impl_(std::make_unique<Impl>()) {
    const std::size_t n = lat.size();
    impl_->n = n;
    impl_->buf_in = fftw_alloc_complex(n);
    impl_->buf_out = fftw_alloc_complex(n);
    const int N = lat.modes_per_axis();
    if (lat.dim() == 2) {
        impl_->fwd = fftw_plan_dft_2d(N, N, impl_->buf_in, impl_->buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_2d(N, N, impl_->buf_in, impl_->buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
        impl_->fwd = fftw_plan_dft_3d(N, N, N, impl_->buf_in, impl_->buf_out, FFTW_FORWARD, FFTW_ESTIMATE);
        impl_->bwd = fftw_plan_dft_3d(N, N, N, impl_->buf_in, impl_->buf_out, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
}

SpectralTransform::~SpectralTransform() {
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->buf_in) fftw_free(impl_->buf_in);
    if (impl_->buf_out) fftw_free(impl_->buf_out);
}

void SpectralTransform::to_physical(std::span<const Cplx> coeffs, std::span<Cplx> phys) {
    std::memcpy(impl_->buf_in, coeffs.data(), impl_->n * sizeof(Cplx));
    fftw_execute(impl_->bwd);
    std::memcpy(phys.data(), impl_->buf_out, impl_->n * sizeof(Cplx));
}

void SpectralTransform::to_coeffs(std::span<const Cplx> phys, std::span<Cplx> coeffs) {
    std::memcpy(impl_->buf_in, phys.data(), impl_->n * sizeof(Cplx));
    fftw_execute(impl_->fwd);
    const double scale = 1.0 / static_cast<double>(impl_->n);
    for (std::size_t i = 0; i < impl_->n; ++i)
        coeffs[i] = Cplx(impl_->buf_out[i][0], impl_->buf_out[i][1]) * scale;
}

} // namespace nskq
