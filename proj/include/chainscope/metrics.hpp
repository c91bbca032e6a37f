#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "chainscope/errors.hpp"

namespace chainscope {

/// Largest k such that |est_i - true_i| / true_i <= tol for all bonds i <= k.
/// Missing (NaN) estimates count as deviations.
inline std::size_t reconstruction_distance(const std::vector<double>& j_true, const std::vector<double>& j_est,
                                           double tol) {
    if (j_true.size() != j_est.size()) {
        throw ValidationError("reconstruction_distance: length mismatch (" + std::to_string(j_true.size()) + " vs " +
                              std::to_string(j_est.size()) + ")");
    }
    if (!(tol > 0.0)) throw ValidationError("reconstruction_distance: tol must be > 0");
    std::size_t k = 0;
    for (; k < j_true.size(); ++k) {
        const double rel = std::abs(j_est[k] - j_true[k]) / j_true[k];
        if (!(rel <= tol)) break;
    }
    return k;
}

/// Max |est_i - true_i| / true_i over bonds; +inf if lengths differ or an estimate is NaN.
inline double max_relative_error(const std::vector<double>& j_true, const std::vector<double>& j_est) {
    if (j_true.size() != j_est.size()) return INFINITY;
    double worst = 0.0;
    for (std::size_t i = 0; i < j_true.size(); ++i) {
        const double rel = std::abs(j_est[i] - j_true[i]) / j_true[i];
        if (std::isnan(rel)) return INFINITY;
        worst = std::max(worst, rel);
    }
    return worst;
}

/// Estimates padded with NaN to `n_bonds` entries.
inline std::vector<double> padded_estimates(const std::vector<double>& estimates, std::size_t n_bonds) {
    std::vector<double> out(estimates.begin(), estimates.begin() + static_cast<std::ptrdiff_t>(
                                                                    std::min(estimates.size(), n_bonds)));
    out.resize(n_bonds, NAN);
    return out;
}

}  // namespace chainscope
