#include "nskq/field.hpp"

#include <limits>

#include <cmath>

namespace nskq {

void SpectralField::validate(double sym_tol) const {
    for (const Cplx& z : c_)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw InvalidFieldError("non-finite coefficient");
    if (!real_) return;
    const double scale = std::max(max_abs(), 1e-300);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (lat_.is_extreme(i)) continue;
        const Cplx diff = c_[i] - std::conj(c_[lat_.negated_index(i)]);
        if (std::abs(diff) > sym_tol * scale)
            throw InvalidFieldError("conjugate symmetry violated on a real-flagged field");
    }
}

double SpectralField::max_abs() const {
    double m = 0.0;
    for (const Cplx& z : c_) m = std::max(m, std::abs(z));
    return m;
}

SpectralField& SpectralField::operator*=(double s) {
    for (Cplx& z : c_) z *= s;
    return *this;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    require_same_lattice(lat_, o.lat_, "SpectralField::operator+=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    real_ = real_ && o.real_;
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    require_same_lattice(lat_, o.lat_, "SpectralField::operator-=");
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    real_ = real_ && o.real_;
    return *this;
}

void FlowState::validate(double sym_tol) const {
    a.validate(sym_tol);
    for (const auto& comp : u) {
        require_same_lattice(a.lattice(), comp.lattice(), "FlowState::validate");
        comp.validate(sym_tol);
    }
}

FlowState& FlowState::operator*=(double s) {
    a *= s;
    for (auto& comp : u) comp *= s;
    return *this;
}

FlowState& FlowState::operator+=(const FlowState& o) {
    a += o.a;
    for (std::size_t j = 0; j < u.size(); ++j) u[j] += o.u[j];
    return *this;
}

FlowState& FlowState::operator-=(const FlowState& o) {
    a -= o.a;
    for (std::size_t j = 0; j < u.size(); ++j) u[j] -= o.u[j];
    return *this;
}

void axpy(FlowState& y, double a, const FlowState& x) {
    require_same_lattice(y.lattice(), x.lattice(), "axpy");
    for (std::size_t i = 0; i < y.a.coeffs().size(); ++i) y.a[i] += a * x.a[i];
    for (std::size_t j = 0; j < y.u.size(); ++j)
        for (std::size_t i = 0; i < y.u[j].coeffs().size(); ++i) y.u[j][i] += a * x.u[j][i];
}

double max_abs(const FlowState& s) {
    double m = s.a.max_abs();
    for (const auto& comp : s.u) m = std::max(m, comp.max_abs());
    return m;
}

double rel_linf_distance(const FlowState& x, const FlowState& y) {
    require_same_lattice(x.lattice(), y.lattice(), "rel_linf_distance");
    FlowState diff = x;
    diff -= y;
    const double denom = max_abs(y);
    const double num = max_abs(diff);
    if (denom == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return num / denom;
}

} // namespace nskq
