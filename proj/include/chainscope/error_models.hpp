#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "chainscope/errors.hpp"
#include "chainscope/reconstruction.hpp"
#include "chainscope/rng.hpp"
#include "chainscope/spectral.hpp"

namespace chainscope {

/// Drops weights below `theta * max_n C_{1,n}` (finite signal-to-noise floor).
struct TruncationModel {
    double theta = 0.0;

    void validate() const {
        if (!(theta >= 0.0 && theta < 1.0)) throw ValidationError("TruncationModel: theta must lie in [0, 1)");
    }
};

/// Gaussian eigenvalue error Delta lambda_n ~ N(0, sigma^2).
struct JitterModel {
    double sigma = 0.0;
    std::uint64_t base_seed = 0;

    void validate() const {
        if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("JitterModel: sigma must be >= 0");
    }
};

enum class EnsembleAggregate { mean, median };

struct EnsembleSpec {
    std::size_t n_samples = 1;
    JitterModel jitter;
    EnsembleAggregate aggregate = EnsembleAggregate::mean;
};

/// Modes with C_{1,n} < theta * C_max removed; survivors keep their exact
/// values. Clears `complete` when anything was dropped. No renormalization.
inline SpectralData<double> apply_truncation(const SpectralData<double>& spectrum, const TruncationModel& model) {
    model.validate();
    if (spectrum.empty()) throw ValidationError("apply_truncation: empty spectrum");
    const double cutoff = model.theta * spectrum.max_weight();
    SpectralData<double> out;
    out.complete = spectrum.complete;
    for (const auto& m : spectrum.modes) {
        if (m.weight < cutoff) {
            out.complete = false;
        } else {
            out.modes.push_back(m);
        }
    }
    if (out.empty()) throw NumericalError("apply_truncation: every mode fell below the threshold");
    return out;
}

/// Each lambda_n shifted by an independent N(0, sigma^2) draw.
///
/// Sample `sample_index` uses its own Philox stream keyed by
/// (base_seed, sample_index), with draws taken in mode order, so a sample
/// can be regenerated in isolation. Modes are re-sorted if the shifts
/// reorder them; weights travel with their eigenvalue.
inline SpectralData<double> apply_jitter(const SpectralData<double>& spectrum, const JitterModel& model,
                                         std::uint64_t sample_index) {
    model.validate();
    if (spectrum.empty()) throw ValidationError("apply_jitter: empty spectrum");
    SpectralData<double> out = spectrum;
    if (model.sigma == 0.0) return out;
    Philox4x32 engine(derive_stream_key(model.base_seed, sample_index));
    NormalSampler normal;
    for (auto& m : out.modes) m.lambda += model.sigma * normal(engine);
    std::stable_sort(out.modes.begin(), out.modes.end(),
                     [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
    return out;
}

/// Per-bond ensemble estimate.
struct EnsembleResult {
    /// Aggregated J' per bond; NaN where no sample survived.
    std::vector<double> couplings;
    /// Samples contributing to each bond.
    std::vector<std::size_t> counts;
    std::size_t modes_used = 0;
    /// First bond with no surviving sample, if any.
    std::optional<std::size_t> aborted_at;

    ReconstructionResult<double> as_reconstruction() const {
        ReconstructionResult<double> r;
        r.modes_used = modes_used;
        r.aborted_at = aborted_at;
        const std::size_t present = aborted_at ? *aborted_at - 1 : couplings.size();
        r.couplings.assign(couplings.begin(), couplings.begin() + static_cast<std::ptrdiff_t>(present));
        return r;
    }
};

namespace detail {

inline double median_of(std::vector<double> values) {
    const std::size_t n = values.size();
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(values.begin(), mid, values.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), mid);
    return 0.5 * (lower + upper);
}

}  // namespace detail

/// Jitter + reconstruct for sample_index = 0..M-1 and aggregate per bond.
///
/// A sample contributes to bond b only if it did not abort at or before b.
/// Samples are reduced in index order, so the result does not depend on
/// how the samples were scheduled.
inline EnsembleResult ensemble_reconstruct(const SpectralData<double>& spectrum, const std::vector<double>& energies,
                                           const EnsembleSpec& ensemble, const ReconstructionOptions& options = {}) {
    if (ensemble.n_samples == 0) throw ValidationError("ensemble_reconstruct: n_samples must be >= 1");
    ensemble.jitter.validate();
    if (energies.empty()) throw ValidationError("ensemble_reconstruct: energies must be nonempty");
    const std::size_t n_bonds = energies.size() - 1;

    std::vector<double> sums(n_bonds, 0.0);
    std::vector<std::size_t> counts(n_bonds, 0);
    std::vector<std::vector<double>> per_bond;
    if (ensemble.aggregate == EnsembleAggregate::median) per_bond.resize(n_bonds);

    EnsembleResult out;
    for (std::size_t sample = 0; sample < ensemble.n_samples; ++sample) {
        const auto jittered = apply_jitter(spectrum, ensemble.jitter, sample);
        const auto result = reconstruct_couplings(jittered, energies, options);
        out.modes_used = result.modes_used;
        const std::size_t usable = result.aborted_at ? *result.aborted_at - 1 : result.couplings.size();
        for (std::size_t b = 0; b < usable; ++b) {
            sums[b] += result.couplings[b];
            ++counts[b];
            if (!per_bond.empty()) per_bond[b].push_back(result.couplings[b]);
        }
    }

    out.counts = counts;
    out.couplings.assign(n_bonds, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t b = 0; b < n_bonds; ++b) {
        if (counts[b] == 0) {
            if (!out.aborted_at) out.aborted_at = b + 1;
            continue;
        }
        out.couplings[b] = ensemble.aggregate == EnsembleAggregate::mean
                               ? sums[b] / static_cast<double>(counts[b])
                               : detail::median_of(per_bond[b]);
    }
    if (n_bonds > 0 && counts[0] == 0) {
        throw NumericalError("ensemble_reconstruct: every sample aborted at bond 1");
    }
    return out;
}

}  // namespace chainscope
