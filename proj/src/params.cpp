#include "nskq/params.hpp"

#include <algorithm>
#include <cmath>

namespace nskq {

double ModelParams::spectral_c0() const {
    validate();
    const double s = 2.0 * mu + nu;
    double drift;
    if (s * s > 4.0 * kappa)
        drift = 0.5 * (s - std::sqrt(s * s - 4.0 * kappa));
    else
        drift = 0.5 * s;
    return std::min(mu, drift);
}

} // namespace nskq
