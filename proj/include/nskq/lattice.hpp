#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nskq/errors.hpp"

namespace nskq {

/// Truncated frequency lattice approximating R^d: frequencies (2pi/L)*k with
/// integer k in [-N/2, N/2) per axis. Coefficient arrays indexed in FFT order
/// (k = i for i < N/2, k = i - N otherwise, axis 0 slowest).
///
/// Modes with some component k_i == -N/2 ("extreme" modes) have no negation
/// partner on the lattice; they are evolved but excluded from all norms.
class FrequencyLattice {
  public:
    FrequencyLattice() = default;
    FrequencyLattice(int d, int N, double L);

    int dim() const { return d_; }
    int modes_per_axis() const { return N_; }
    double box_length() const { return L_; }
    double spacing() const { return spacing_; }
    std::size_t size() const { return size_; }

    /// Largest |xi| of the inscribed ball (N/2 * spacing); radial fits and
    /// shells stay inside it so every shell is complete.
    double inscribed_radius() const { return 0.5 * N_ * spacing_; }
    /// Largest |xi| on the lattice (corner mode).
    double corner_radius() const;

    int k_component(std::size_t flat, int axis) const {
        int i = static_cast<int>(flat / stride_[axis]) % N_;
        return i < N_ / 2 ? i : i - N_;
    }
    void k_vector(std::size_t flat, std::span<int> out) const {
        for (int a = 0; a < d_; ++a) out[a] = k_component(flat, a);
    }
    std::size_t index_of(std::span<const int> k) const;

    void xi(std::size_t flat, std::span<double> out) const {
        for (int a = 0; a < d_; ++a) out[a] = spacing_ * k_component(flat, a);
    }
    /// |k|^2 as an exact integer.
    std::int64_t k_norm2(std::size_t flat) const {
        std::int64_t s = 0;
        for (int a = 0; a < d_; ++a) {
            std::int64_t k = k_component(flat, a);
            s += k * k;
        }
        return s;
    }
    double xi_norm2(std::size_t flat) const {
        return spacing_ * spacing_ * static_cast<double>(k_norm2(flat));
    }

    bool is_zero_mode(std::size_t flat) const { return k_norm2(flat) == 0; }
    bool is_extreme(std::size_t flat) const {
        for (int a = 0; a < d_; ++a)
            if (k_component(flat, a) == -N_ / 2) return true;
        return false;
    }
    /// Index of -k. Only valid for non-extreme modes.
    std::size_t negated_index(std::size_t flat) const;

    /// Flat index (FFT order) from the ascending-k position used by the
    /// snapshot format (k = pos - N/2 per axis, axis 0 slowest).
    std::size_t from_ascending(std::size_t ascending) const;

    bool operator==(const FrequencyLattice& o) const {
        return d_ == o.d_ && N_ == o.N_ && L_ == o.L_;
    }

  private:
    int d_ = 0;
    int N_ = 0;
    double L_ = 0;
    double spacing_ = 0;
    std::size_t size_ = 0;
    std::array<std::size_t, 3> stride_{};
};

inline void require_same_lattice(const FrequencyLattice& a, const FrequencyLattice& b,
                                 const char* where) {
    if (!(a == b)) throw LatticeMismatchError(std::string("lattice mismatch in ") + where);
}

} // namespace nskq
