#include "nskq/lattice.hpp"

#include <cmath>
#include <numbers>

namespace nskq {

FrequencyLattice::FrequencyLattice(int d, int N, double L) : d_(d), N_(N), L_(L) {
    if (d < 2 || d > 3) throw ConfigError("lattice dimension must be 2 or 3");
    if (N < 4 || N % 2 != 0) throw ConfigError("modes per axis must be even and >= 4");
    if (!(L > 0)) throw ConfigError("box length must be positive");
    spacing_ = 2.0 * std::numbers::pi / L;
    size_ = 1;
    for (int a = 0; a < d; ++a) size_ *= static_cast<std::size_t>(N);
    // row-major, axis 0 slowest
    std::size_t s = 1;
    for (int a = d - 1; a >= 0; --a) {
        stride_[a] = s;
        s *= static_cast<std::size_t>(N);
    }
}

double FrequencyLattice::corner_radius() const {
    return 0.5 * N_ * spacing_ * std::sqrt(static_cast<double>(d_));
}

std::size_t FrequencyLattice::index_of(std::span<const int> k) const {
    std::size_t flat = 0;
    for (int a = 0; a < d_; ++a) {
        int kk = k[a];
        if (kk < -N_ / 2 || kk >= N_ / 2) throw ConfigError("mode index out of lattice range");
        int i = kk >= 0 ? kk : kk + N_;
        flat += static_cast<std::size_t>(i) * stride_[a];
    }
    return flat;
}

std::size_t FrequencyLattice::negated_index(std::size_t flat) const {
    std::size_t out = 0;
    for (int a = 0; a < d_; ++a) {
        int k = -k_component(flat, a);
        int i = k >= 0 ? k : k + N_;
        out += static_cast<std::size_t>(i) * stride_[a];
    }
    return out;
}

std::size_t FrequencyLattice::from_ascending(std::size_t ascending) const {
    std::size_t flat = 0;
    for (int a = 0; a < d_; ++a) {
        int pos = static_cast<int>(ascending / stride_[a]) % N_;
        int k = pos - N_ / 2;
        int i = k >= 0 ? k : k + N_;
        flat += static_cast<std::size_t>(i) * stride_[a];
    }
    return flat;
}

} // namespace nskq
