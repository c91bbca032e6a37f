#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <boost/multiprecision/mpfr.hpp>

#include "chainscope/chain_model.hpp"
#include "chainscope/reconstruction.hpp"
#include "chainscope/spectral.hpp"
#include "chainscope/tridiagonal_eigen.hpp"

namespace chainscope {

/// Arbitrary-precision real used for exact round trips on disordered chains.
using BigReal = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                              boost::multiprecision::et_off>;

/// Sets the default BigReal precision (decimal digits) for the current
/// thread and restores the previous value on scope exit.
class ScopedPrecision {
public:
    explicit ScopedPrecision(unsigned digits) : saved_(BigReal::default_precision()) {
        BigReal::default_precision(digits);
    }
    ~ScopedPrecision() { BigReal::default_precision(saved_); }
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_;
};

/// log10 of the largest growth max_i |p_i(lambda_n)| of the site-1
/// normalized eigenvector recursion over all (double precision) eigenvalues.
///
/// For a localized mode the first eigenvector component is about
/// 10^-growth, so this many digits are lost when C_{1,n} is formed and
/// again amplified by the coupling recursion. Evaluated with approximate
/// eigenvalues the recursion keeps growing past the localization centre,
/// so the value is an upper estimate.
inline double spectral_growth_digits(const ChainSpec& spec) {
    const auto& eps = spec.energies();
    const auto& j = spec.couplings();
    const std::size_t n = spec.n_sites();
    if (n <= 1) return 0.0;
    const auto eig = eigen_first_row(build_hamiltonian<double>(spec));
    double worst = 0.0;
    for (double lambda : eig.values) {
        double prev = 0.0;
        double cur = 1.0;
        double scale = 0.0;
        double best = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double left = i > 0 ? j[i - 1] : 0.0;
            const double next = ((lambda - eps[i]) * cur - left * prev) / j[i];
            prev = cur;
            cur = next;
            const double m = std::max(std::abs(prev), std::abs(cur));
            if (m > 1e100) {
                prev /= m;
                cur /= m;
                scale += std::log10(m);
            }
            best = std::max(best, scale + std::log10(std::max(std::abs(cur), 1e-300)));
        }
        worst = std::max(worst, best);
    }
    return worst;
}

/// Working precision (decimal digits) for an exact round trip of `spec`
/// to about `target_digits` correct digits; 0 means double suffices.
inline unsigned required_digits(const ChainSpec& spec, unsigned target_digits = 10) {
    const double growth = spectral_growth_digits(spec);
    if (growth + target_digits + 2.0 <= 15.0) return 0;
    return static_cast<unsigned>(std::ceil(growth)) + target_digits + 12;
}

struct RoundTrip {
    std::vector<double> couplings;
    std::optional<std::size_t> aborted_at;
    /// Digits used; 0 when computed in double.
    unsigned digits = 0;
};

/// Forward spectrum and reconstruction of `spec` with enough precision that
/// the recovered couplings are exact to ~`target_digits` digits.
/// `digits` overrides the automatic choice (0 = auto).
inline RoundTrip exact_roundtrip(const ChainSpec& spec, unsigned target_digits = 10,
                                 std::optional<unsigned> digits = std::nullopt) {
    const unsigned working = digits.value_or(required_digits(spec, target_digits));
    RoundTrip out;
    out.digits = working;
    if (working == 0) {
        const auto result =
            reconstruct_couplings(normalize_spectrum(end_site_spectrum<double>(spec)), spec.energies());
        out.couplings = result.couplings;
        out.aborted_at = result.aborted_at;
        return out;
    }
    ScopedPrecision precision(working);
    const auto spectrum = normalize_spectrum(end_site_spectrum<BigReal>(spec));
    ReconstructionOptions options;
    const auto result = reconstruct_couplings(spectrum, spec.energies(), options);
    out.couplings.reserve(result.couplings.size());
    for (const auto& j : result.couplings) out.couplings.push_back(j.convert_to<double>());
    out.aborted_at = result.aborted_at;
    return out;
}

}  // namespace chainscope
