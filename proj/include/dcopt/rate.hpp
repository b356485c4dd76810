#pragma once

#include "dcopt/solver.hpp"

namespace dcopt {

struct RateEstimate {
    enum class Type { Finite, Linear, Sublinear };

    Type type = Type::Finite;
    // Linear: fitted contraction factor of phi_k - phi_final.
    // Sublinear: fitted power-law exponent p in (phi_k - phi_final) ~ k^-p.
    double rate = 0.0;
};

// Empirical convergence diagnostic: least-squares fit of
// log(phi(x_k) - phi_final) against k over a trace. Entries already at the
// final value are dropped; if nothing is left the decrease was finite.
// Throws InsufficientTrace for traces shorter than 5.
RateEstimate estimate_rate(const Trace& trace);

} // namespace dcopt
