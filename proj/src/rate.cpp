#include "dcopt/rate.hpp"

#include <cmath>
#include <vector>

#include "dcopt/errors.hpp"

namespace dcopt {

namespace {

struct Fit {
    double slope = 0.0;
    double r2 = 0.0;
    bool ok = false;
};

Fit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    Fit f;
    const std::size_t n = xs.size();
    if (n < 3) return f;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx == 0.0) return f;
    f.slope = sxy / sxx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    f.ok = true;
    return f;
}

} // namespace

RateEstimate estimate_rate(const Trace& trace) {
    if (trace.size() < 5)
        throw InsufficientTrace("estimate_rate: need at least 5 iterations, got " +
                                std::to_string(trace.size()));

    // best available stand-in for the limit value
    const double phi_ref = trace.back().phi_y;
    const double span = std::fabs(trace.front().phi_x - phi_ref);
    const double drop_below = 1e-10 * (1.0 + span);

    std::vector<double> ks, log_err;
    for (const IterationRecord& rec : trace) {
        const double e = rec.phi_x - phi_ref;
        if (e <= drop_below) continue;
        ks.push_back(static_cast<double>(rec.k));
        log_err.push_back(std::log(e));
    }

    RateEstimate est;
    if (ks.size() < 3) {
        est.type = RateEstimate::Type::Finite;
        return est;
    }

    const Fit lin = least_squares(ks, log_err);
    std::vector<double> log_ks;
    std::vector<double> log_err_pos;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] < 1.0) continue;
        log_ks.push_back(std::log(ks[i]));
        log_err_pos.push_back(log_err[i]);
    }
    const Fit sub = least_squares(log_ks, log_err_pos);

    if (!lin.ok) {
        est.type = RateEstimate::Type::Finite;
        return est;
    }

    const double contraction = std::exp(lin.slope);
    if (contraction < 0.9999 && (!sub.ok || lin.r2 >= sub.r2)) {
        est.type = RateEstimate::Type::Linear;
        est.rate = contraction;
    } else {
        est.type = RateEstimate::Type::Sublinear;
        est.rate = sub.ok ? -sub.slope : 0.0;
    }
    return est;
}

} // namespace dcopt
