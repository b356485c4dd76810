#include "dcopt/rng.hpp"

#include <cmath>

namespace dcopt {

double Rng::normal(double mean, double stddev) {
    // Box-Muller, cosine branch; u1 in (0,1] so the log is finite
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double z =
        std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
    return mean + stddev * z;
}

double RngSpec::sample(Rng& rng) const {
    switch (dist) {
    case Dist::Normal: return rng.normal(a, b);
    case Dist::Uniform: return rng.uniform(a, b);
    }
    return 0.0;
}

} // namespace dcopt
