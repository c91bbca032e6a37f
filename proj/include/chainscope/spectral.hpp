#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <fftw3.h>

#include "chainscope/chain_model.hpp"
#include "chainscope/errors.hpp"
#include "chainscope/tridiagonal_eigen.hpp"

namespace chainscope {

/// One spectral line seen from site 1: eigenvalue and end-site weight
/// C_{1,n} = |<lambda_n|1>|^2.
template <class Real = double>
struct Mode {
    Real lambda;
    Real weight;

    friend bool operator==(const Mode&, const Mode&) = default;
};

/// End-site spectral data, modes sorted by lambda.
///
/// `complete` is true only when every eigenmode is known to be present
/// (exact or closed-form spectra); measured or truncated data clear it.
template <class Real = double>
struct SpectralData {
    std::vector<Mode<Real>> modes;
    bool complete = false;

    std::size_t size() const noexcept { return modes.size(); }
    bool empty() const noexcept { return modes.empty(); }

    Real total_weight() const {
        Real sum(0);
        for (const auto& m : modes) sum += m.weight;
        return sum;
    }

    Real max_weight() const {
        Real best(0);
        for (const auto& m : modes) {
            if (m.weight > best) best = m.weight;
        }
        return best;
    }

    friend bool operator==(const SpectralData&, const SpectralData&) = default;
};

/// Checks the SpectralData invariants; throws ValidationError naming the first violation.
template <class Real>
void validate_spectrum(const SpectralData<Real>& spectrum, double completeness_tol = 1e-10) {
    using std::abs;
    for (std::size_t n = 0; n < spectrum.modes.size(); ++n) {
        if (spectrum.modes[n].weight < Real(0)) {
            throw ValidationError("spectrum: negative weight at mode " + std::to_string(n + 1));
        }
        if (n > 0 && !(spectrum.modes[n - 1].lambda < spectrum.modes[n].lambda)) {
            throw ValidationError("spectrum: eigenvalues not strictly increasing at mode " + std::to_string(n + 1));
        }
    }
    if (spectrum.complete && abs(spectrum.total_weight() - Real(1)) > Real(completeness_tol)) {
        throw ValidationError("spectrum: complete data must have weights summing to 1");
    }
}

/// Complex amplitude on site 1 sampled at t_k = k * dt.
struct TimeSignal {
    double dt = 0.0;
    std::vector<std::complex<double>> samples;

    double duration() const noexcept { return dt * static_cast<double>(samples.size()); }
};

/// Exact (lambda_n, C_{1,n}) of the chain from its eigendecomposition.
template <class Real = double>
SpectralData<Real> end_site_spectrum(const ChainSpec& spec) {
    const auto eig = eigen_first_row(build_hamiltonian<Real>(spec));
    SpectralData<Real> out;
    out.complete = true;
    out.modes.reserve(eig.values.size());
    for (std::size_t n = 0; n < eig.values.size(); ++n) {
        const Real& v1 = eig.first_components[n];
        out.modes.push_back({eig.values[n], v1 * v1});
    }
    return out;
}

/// Closed form for the homogeneous chain:
///   lambda_n = eps + 2 J cos(n pi / (N+1)),  C_{1,n} = 2/(N+1) sin^2(n pi / (N+1)).
inline SpectralData<double> homogeneous_spectrum(std::size_t n_sites, double epsilon, double j) {
    if (n_sites == 0) throw ValidationError("homogeneous_spectrum: n_sites must be positive");
    if (!(j > 0.0)) throw ValidationError("homogeneous_spectrum: j must be > 0");
    const double denom = static_cast<double>(n_sites + 1);
    SpectralData<double> out;
    out.complete = true;
    out.modes.reserve(n_sites);
    // n = N..1 gives ascending eigenvalues.
    for (std::size_t n = n_sites; n >= 1; --n) {
        const double angle = std::numbers::pi * static_cast<double>(n) / denom;
        const double s = std::sin(angle);
        out.modes.push_back({epsilon + 2.0 * j * std::cos(angle), 2.0 / denom * s * s});
    }
    return out;
}

/// c_1(t_k) = sum_n C_{1,n} exp(-i lambda_n t_k), t_k = k dt.
inline TimeSignal synthesize_end_signal(const SpectralData<double>& spectrum, double dt, std::size_t n_samples) {
    if (!(dt > 0.0)) throw ValidationError("synthesize_end_signal: dt must be > 0");
    if (n_samples == 0) throw ValidationError("synthesize_end_signal: n_samples must be positive");
    double max_abs = 0.0;
    for (const auto& m : spectrum.modes) max_abs = std::max(max_abs, std::abs(m.lambda));
    if (!(dt * max_abs < std::numbers::pi)) {
        throw ValidationError("synthesize_end_signal: dt * max|lambda| must be < pi (Nyquist); dt=" +
                              std::to_string(dt) + ", max|lambda|=" + std::to_string(max_abs));
    }
    TimeSignal signal{dt, std::vector<std::complex<double>>(n_samples)};
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = static_cast<double>(k) * dt;
        std::complex<double> acc{0.0, 0.0};
        for (const auto& m : spectrum.modes) acc += std::polar(m.weight, -m.lambda * t);
        signal.samples[k] = acc;
    }
    return signal;
}

/// Sampling grid used by the simulated measurement when a scenario does not
/// override it: dt = 0.1 / max(1, max|lambda|), 2^16 samples.
struct MeasurementGrid {
    double dt = 0.1;
    std::size_t n_samples = std::size_t{1} << 16;

    static MeasurementGrid for_bandwidth(double max_abs_lambda) {
        return MeasurementGrid{0.1 / std::max(1.0, max_abs_lambda), std::size_t{1} << 16};
    }
};

namespace detail {

struct FftwPlanDeleter {
    void operator()(fftw_plan_s* plan) const noexcept { fftw_destroy_plan(plan); }
};

struct FftwFree {
    void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace detail

/// Options for the DFT peak picker. Defaults are what extract_spectrum uses.
struct PeakExtraction {
    /// Zero-padding factor (FFT length >= factor * n_samples, rounded up to a power of two).
    std::size_t padding = 4;
};

/// Reads (lambda_n, C_{1,n}) off the spectrum of a sampled end-site signal.
///
/// Hann-windowed DFT of the complex samples (signed frequencies), zero
/// padded; every local maximum whose calibrated height exceeds
/// `peak_floor` is a mode. Position and height come from a three-point
/// parabola through the magnitudes around the maximum; heights are
/// divided by the window's coherent gain so an isolated line of weight C
/// reads C.
///
/// Throws NumericalError if two accepted peaks are closer than one
/// resolution bin 2 pi / (n dt).
inline SpectralData<double> extract_spectrum(const TimeSignal& signal, double peak_floor,
                                             PeakExtraction options = {}) {
    const std::size_t n = signal.samples.size();
    if (n < 2) throw ValidationError("extract_spectrum: need at least 2 samples");
    if (!(signal.dt > 0.0)) throw ValidationError("extract_spectrum: dt must be > 0");
    if (!(peak_floor >= 0.0)) throw ValidationError("extract_spectrum: peak_floor must be >= 0");

    const std::size_t fft_len = detail::next_pow2(std::max<std::size_t>(options.padding, 1) * n);
    std::unique_ptr<fftw_complex[], detail::FftwFree> buffer(fftw_alloc_complex(fft_len));
    if (!buffer) throw NumericalError("extract_spectrum: FFT buffer allocation failed");

    double window_sum = 0.0;
    for (std::size_t k = 0; k < fft_len; ++k) {
        if (k < n) {
            const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) /
                                                  static_cast<double>(n));
            window_sum += w;
            buffer[k][0] = w * signal.samples[k].real();
            buffer[k][1] = w * signal.samples[k].imag();
        } else {
            buffer[k][0] = 0.0;
            buffer[k][1] = 0.0;
        }
    }
    // exp(-i lambda t) appears at +lambda under the backward (e^{+i}) transform.
    std::unique_ptr<fftw_plan_s, detail::FftwPlanDeleter> plan(fftw_plan_dft_1d(
        static_cast<int>(fft_len), buffer.get(), buffer.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
    if (!plan) throw NumericalError("extract_spectrum: FFT planning failed");
    fftw_execute(plan.get());

    std::vector<double> magnitude(fft_len);
    for (std::size_t k = 0; k < fft_len; ++k) magnitude[k] = std::hypot(buffer[k][0], buffer[k][1]) / window_sum;

    const double omega_step = 2.0 * std::numbers::pi / (static_cast<double>(fft_len) * signal.dt);
    const auto signed_bin = [&](std::size_t k) {
        return k < fft_len / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(fft_len);
    };

    SpectralData<double> out;
    out.complete = false;
    for (std::size_t k = 0; k < fft_len; ++k) {
        const double mid = magnitude[k];
        if (!(mid > peak_floor)) continue;
        const double left = magnitude[(k + fft_len - 1) % fft_len];
        const double right = magnitude[(k + 1) % fft_len];
        if (!(mid > left && mid >= right)) continue;
        const double curvature = left - 2.0 * mid + right;
        const double offset = curvature < 0.0 ? 0.5 * (left - right) / curvature : 0.0;
        const double height = mid - 0.25 * (left - right) * offset;
        out.modes.push_back({(signed_bin(k) + offset) * omega_step, height});
    }
    std::sort(out.modes.begin(), out.modes.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });

    const double resolution = 2.0 * std::numbers::pi / signal.duration();
    for (std::size_t i = 1; i < out.modes.size(); ++i) {
        if (out.modes[i].lambda - out.modes[i - 1].lambda < resolution) {
            throw NumericalError("extract_spectrum: peaks at " + std::to_string(out.modes[i - 1].lambda) + " and " +
                                 std::to_string(out.modes[i].lambda) + " are closer than one bin (" +
                                 std::to_string(resolution) + ")");
        }
    }
    return out;
}

}  // namespace chainscope
