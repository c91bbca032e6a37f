#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chainscope/errors.hpp"
#include "chainscope/spectral.hpp"

namespace chainscope {

/// Estimated couplings J'_{i,i+1}, bond i stored at index i-1.
template <class Real = double>
struct ReconstructionResult {
    std::vector<Real> couplings;
    /// Number of modes with nonzero weight that entered the sums.
    std::size_t modes_used = 0;
    /// 1-based bond at which J' fell below the broken-bond floor. The
    /// estimate for that bond is still reported; later bonds are absent.
    std::optional<std::size_t> aborted_at;
    /// Rows C_{i,n} (i = 1..) over the used modes, only with keep_rows.
    std::vector<std::vector<Real>> coefficient_rows;

    bool aborted() const noexcept { return aborted_at.has_value(); }
};

struct ReconstructionOptions {
    /// Retain every coefficient row instead of the rolling pair.
    bool keep_rows = false;
    /// Allowed |sum of weights - 1| on input.
    double normalization_tol = 1e-9;
    /// A coupling estimate below this stops the recursion.
    double broken_bond_floor = 1e-12;
};

/// Rescales weights to sum to one; eigenvalues and `complete` untouched.
template <class Real>
SpectralData<Real> normalize_spectrum(SpectralData<Real> raw) {
    const Real total = raw.total_weight();
    if (!(total > Real(0))) throw ValidationError("normalize_spectrum: all weights are zero");
    for (auto& m : raw.modes) m.weight /= total;
    return raw;
}

/// Recovers the couplings of an N-site chain from its end-site spectrum and
/// known site energies.
///
/// J'_{1,2}   = sqrt(sum_n (lambda_n - eps_1)^2 C_{1,n})
/// u_n        = (lambda_n - eps_i) C_{i,n} - J'_{i-1,i} C_{i-1,n}
/// J'_{i,i+1} = sqrt(sum_n u_n^2 / C_{1,n})
/// C_{i+1,n}  = u_n / J'_{i,i+1}
///
/// Runs to bond N-1 whatever the number of modes. Zero-weight modes are
/// dropped before the recursion, which is identical to never having had
/// them. O(N M) time, O(M) memory unless keep_rows is set.
template <class Real>
ReconstructionResult<Real> reconstruct_couplings(const SpectralData<Real>& spectrum, const std::vector<double>& energies,
                                                 const ReconstructionOptions& options = {}) {
    using std::abs;
    using std::sqrt;
    if (energies.empty()) throw ValidationError("reconstruct_couplings: energies must be nonempty");
    for (std::size_t n = 0; n < spectrum.modes.size(); ++n) {
        if (spectrum.modes[n].weight < Real(0)) {
            throw ValidationError("reconstruct_couplings: negative weight at mode " + std::to_string(n + 1));
        }
    }
    const Real total = spectrum.total_weight();
    if (!(abs(total - Real(1)) <= Real(options.normalization_tol))) {
        throw ValidationError("reconstruct_couplings: spectrum is not normalized (sum of weights != 1)");
    }

    std::vector<Real> lambda;
    std::vector<Real> weight;
    lambda.reserve(spectrum.modes.size());
    weight.reserve(spectrum.modes.size());
    for (const auto& m : spectrum.modes) {
        if (m.weight > Real(0)) {
            lambda.push_back(m.lambda);
            weight.push_back(m.weight);
        }
    }
    const std::size_t n_modes = lambda.size();
    const std::size_t n_bonds = energies.size() - 1;

    ReconstructionResult<Real> result;
    result.modes_used = n_modes;
    result.couplings.reserve(n_bonds);

    std::vector<Real> previous(n_modes, Real(0));
    std::vector<Real> current = weight;
    std::vector<Real> next(n_modes);
    if (options.keep_rows) result.coefficient_rows.push_back(current);

    Real previous_coupling(0);
    for (std::size_t bond = 1; bond <= n_bonds; ++bond) {
        const Real eps(energies[bond - 1]);
        Real radicand(0);
        if (bond == 1) {
            for (std::size_t n = 0; n < n_modes; ++n) {
                const Real shift = lambda[n] - eps;
                radicand += shift * shift * weight[n];
                next[n] = shift * weight[n];
            }
        } else {
            for (std::size_t n = 0; n < n_modes; ++n) {
                const Real u = (lambda[n] - eps) * current[n] - previous_coupling * previous[n];
                radicand += u * u / weight[n];
                next[n] = u;
            }
        }
        // Every summand is a square over a positive weight.
        if (!(radicand >= Real(0))) {
            throw NumericalError("reconstruct_couplings: invalid radicand at bond " + std::to_string(bond));
        }
        const Real coupling = sqrt(radicand);
        result.couplings.push_back(coupling);
        if (coupling < Real(options.broken_bond_floor)) {
            result.aborted_at = bond;
            break;
        }
        for (std::size_t n = 0; n < n_modes; ++n) next[n] /= coupling;
        previous.swap(current);
        current.swap(next);
        previous_coupling = coupling;
        if (options.keep_rows) result.coefficient_rows.push_back(current);
    }
    return result;
}

}  // namespace chainscope
