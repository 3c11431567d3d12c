#pragma once

#include <cmath>
#include <vector>

#include "core.hpp"

namespace subdirac {

/// Least-squares slope of log(err) against log(h). Requires at least two
/// points; suites use three or more.
inline double convergence_order(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size() || h.size() < 2)
        throw ValidationError("convergence_order needs matching samples, at least two");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(h.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log(h[static_cast<size_t>(i)]);
        const double y = std::log(std::max(err[static_cast<size_t>(i)], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// True when every error is at roundoff scale; slope fits are meaningless
/// there and the check counts as exact. The cutoff sits far below any
/// genuine second-order signal at the grid sizes the suites use.
inline bool all_roundoff(const std::vector<double>& err, double scale = 1.0) {
    for (double e : err)
        if (e > 1e-12 * std::max(scale, 1.0)) return false;
    return true;
}

} // namespace subdirac
