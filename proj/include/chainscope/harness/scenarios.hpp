#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "chainscope/chain_model.hpp"
#include "chainscope/error_models.hpp"
#include "chainscope/errors.hpp"
#include "chainscope/extended_precision.hpp"
#include "chainscope/harness/config.hpp"
#include "chainscope/harness/svg_plot.hpp"
#include "chainscope/metrics.hpp"
#include "chainscope/reconstruction.hpp"
#include "chainscope/rng.hpp"
#include "chainscope/spectral.hpp"
#include "chainscope/version.hpp"

namespace chainscope::harness {

struct BondRow {
    std::size_t i = 0;
    double j_true = 0.0;
    double j_est = 0.0;
    double delta_j = 0.0;
};

struct SpectrumRow {
    std::size_t n = 0;
    double lambda = 0.0;
    double c1 = 0.0;
    bool truncated = false;
};

struct SummaryRow {
    std::string condition;
    double value = 0.0;
    double distance = 0.0;
};

/// Per-condition tables, written to `<output_dir>/<label>/`.
struct ConditionTables {
    std::string label;
    std::vector<BondRow> bonds;
    std::vector<SpectrumRow> spectrum;
};

struct NamedPanel {
    std::string file;
    PlotPanel panel;
};

struct ScenarioReport {
    ExperimentConfig config;
    std::vector<ConditionTables> conditions;
    std::vector<SummaryRow> summary;
    std::vector<NamedPanel> panels;
};

/// Seed of ground-truth chain `index` under `base_seed`.
inline std::uint64_t chain_seed(std::uint64_t base_seed, std::size_t index) {
    return derive_stream_key(base_seed, 2 * static_cast<std::uint64_t>(index));
}

/// Base seed of the jitter ensemble run on chain `index`.
inline std::uint64_t jitter_seed(std::uint64_t base_seed, std::size_t index) {
    return derive_stream_key(base_seed, 2 * static_cast<std::uint64_t>(index) + 1);
}

/// Ground truth for chain `index`: homogeneous when j_low == j_high.
inline ChainSpec make_chain(const ExperimentConfig& c, std::size_t index) {
    std::vector<double> zeros(c.n_sites, 0.0);
    ChainSpec base = c.j_low == c.j_high ? ChainSpec(zeros, std::vector<double>(c.n_sites - 1, c.j_low))
                                         : random_chain(c.n_sites, c.j_low, c.j_high, zeros, chain_seed(c.base_seed, index));
    if (c.delta == 0.0) return base;
    return ChainSpec(heisenberg_site_energies(base.couplings(), c.delta), base.couplings());
}

namespace detail {

inline std::vector<BondRow> bond_rows(const std::vector<double>& truth, const std::vector<double>& est) {
    std::vector<BondRow> rows;
    rows.reserve(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i) rows.push_back({i + 1, truth[i], est[i], est[i] - truth[i]});
    return rows;
}

inline std::vector<SpectrumRow> spectrum_rows(const SpectralData<double>& full, const SpectralData<double>& kept) {
    std::vector<SpectrumRow> rows;
    std::size_t k = 0;
    for (std::size_t n = 0; n < full.modes.size(); ++n) {
        const bool present = k < kept.modes.size() && kept.modes[k] == full.modes[n];
        if (present) ++k;
        rows.push_back({n + 1, full.modes[n].lambda, full.modes[n].weight, !present});
    }
    return rows;
}

inline std::string label(const char* name, double value) { return fmt::format("{}_{:g}", name, value); }

inline double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline PlotPanel couplings_panel(const std::string& title, const std::vector<double>& truth,
                                 const std::vector<double>& est) {
    PlotSeries t{"J (true)", {}, truth, "#444444", true};
    PlotSeries e{"J' (estimated)", {}, est, "#d62728", true};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        t.x.push_back(static_cast<double>(i + 1));
        e.x.push_back(static_cast<double>(i + 1));
    }
    return {title, "bond i", "J(i,i+1)", {t, e}};
}

inline PlotPanel error_panel(const std::string& title, const std::vector<double>& truth,
                             const std::vector<double>& est) {
    PlotSeries d{"J' - J", {}, {}, "#1f77b4", true};
    for (std::size_t i = 0; i < truth.size(); ++i) {
        d.x.push_back(static_cast<double>(i + 1));
        d.y.push_back(est[i] - truth[i]);
    }
    return {title, "bond i", "delta J", {d}};
}

inline PlotPanel spectrum_panel(const std::string& title, const SpectralData<double>& s, bool log_y) {
    PlotSeries stems{"C(1,n)", {}, {}, "#2ca02c", false, true};
    for (const auto& m : s.modes) {
        stems.x.push_back(m.lambda);
        stems.y.push_back(m.weight);
    }
    return {title, "lambda", "C(1,n)", {stems}, log_y};
}

inline void run_demo(const ExperimentConfig& c, ScenarioReport& report) {
    const ChainSpec chain = make_chain(c, 0);
    const auto exact = end_site_spectrum<double>(chain);
    const auto grid = MeasurementGrid::for_bandwidth(build_hamiltonian<double>(chain).norm_inf());
    const auto signal = synthesize_end_signal(exact, grid.dt, grid.n_samples);
    const auto measured = normalize_spectrum(extract_spectrum(signal, c.peak_floor));
    const auto result = reconstruct_couplings(measured, chain.energies());
    if (result.aborted()) {
        throw NumericalError(fmt::format("demo: broken bond at {} during reconstruction", *result.aborted_at));
    }
    const auto est = padded_estimates(result.couplings, chain.n_sites() - 1);

    ConditionTables t{"demo", bond_rows(chain.couplings(), est), {}};
    for (std::size_t n = 0; n < measured.modes.size(); ++n) {
        t.spectrum.push_back({n + 1, measured.modes[n].lambda, measured.modes[n].weight, false});
    }
    report.conditions.push_back(std::move(t));
    const double dist = static_cast<double>(reconstruction_distance(chain.couplings(), est, c.distance_tol));
    report.summary.push_back({"max_rel_error", max_relative_error(chain.couplings(), est), dist});
    report.summary.push_back({"modes_found", static_cast<double>(measured.size()), dist});

    PlotSeries population{"|c1(t)|^2", {}, {}, "#1f77b4"};
    const std::size_t shown = std::min<std::size_t>(signal.samples.size(), static_cast<std::size_t>(60.0 / grid.dt));
    for (std::size_t k = 0; k < shown; ++k) {
        population.x.push_back(static_cast<double>(k) * grid.dt);
        population.y.push_back(std::norm(signal.samples[k]));
    }
    report.panels.push_back({"fig2a_population.svg", {"Site-1 population", "t", "|c1(t)|^2", {population}}});
    report.panels.push_back({"fig2b_spectrum.svg", spectrum_panel("Extracted spectrum", measured, false)});
    report.panels.push_back({"fig2c_couplings.svg", couplings_panel("Reconstructed couplings", chain.couplings(), est)});
}

inline void run_truncation(const ExperimentConfig& c, ScenarioReport& report) {
    const ChainSpec chain = make_chain(c, 0);
    const auto exact = end_site_spectrum<double>(chain);
    report.panels.push_back({"fig3a_spectrum.svg", spectrum_panel("End-site spectrum", exact, true)});
    for (double theta : c.theta_list) {
        const auto kept = apply_truncation(exact, TruncationModel{theta});
        const auto result = reconstruct_couplings(normalize_spectrum(kept), chain.energies());
        const auto est = padded_estimates(result.couplings, chain.n_sites() - 1);
        const auto lbl = label("theta", theta);
        report.conditions.push_back({lbl, bond_rows(chain.couplings(), est), spectrum_rows(exact, kept)});
        report.summary.push_back(
            {"theta", theta, static_cast<double>(reconstruction_distance(chain.couplings(), est, c.distance_tol))});
        report.panels.push_back({"fig3_" + lbl + ".svg", couplings_panel("Truncation " + lbl, chain.couplings(), est)});
    }
}

inline void run_disorder(const ExperimentConfig& c, ScenarioReport& report) {
    std::vector<ChainSpec> chains;
    std::vector<SpectralData<double>> spectra;
    for (std::size_t k = 0; k < c.n_chains; ++k) {
        chains.push_back(make_chain(c, k));
        spectra.push_back(end_site_spectrum<double>(chains.back()));
    }
    report.panels.push_back({"fig4_spectrum_chain0.svg", spectrum_panel("End-site spectrum (chain 0)", spectra[0], true)});
    for (double theta : c.theta_list) {
        std::vector<double> distances;
        std::vector<SummaryRow> per_chain;
        for (std::size_t k = 0; k < chains.size(); ++k) {
            const auto kept = apply_truncation(spectra[k], TruncationModel{theta});
            const auto result = reconstruct_couplings(normalize_spectrum(kept), chains[k].energies());
            const auto est = padded_estimates(result.couplings, chains[k].n_sites() - 1);
            const auto d = static_cast<double>(reconstruction_distance(chains[k].couplings(), est, c.distance_tol));
            distances.push_back(d);
            per_chain.push_back({fmt::format("theta/chain{}", k), theta, d});
            if (k == 0) {
                const auto lbl = label("theta", theta);
                report.conditions.push_back({lbl, bond_rows(chains[0].couplings(), est), spectrum_rows(spectra[0], kept)});
                report.panels.push_back({"fig4_" + lbl + "_couplings.svg",
                                         couplings_panel("Chain 0, " + lbl, chains[0].couplings(), est)});
                report.panels.push_back(
                    {"fig4_" + lbl + "_error.svg", error_panel("Chain 0 errors, " + lbl, chains[0].couplings(), est)});
            }
        }
        report.summary.push_back({"theta", theta, median(distances)});
        report.summary.insert(report.summary.end(), per_chain.begin(), per_chain.end());
    }
}

inline void run_jitter(const ExperimentConfig& c, ScenarioReport& report) {
    std::vector<ChainSpec> chains;
    std::vector<SpectralData<double>> spectra;
    for (std::size_t k = 0; k < c.n_chains; ++k) {
        chains.push_back(make_chain(c, k));
        spectra.push_back(normalize_spectrum(end_site_spectrum<double>(chains.back())));
    }
    for (double sigma : c.sigma_list) {
        std::vector<double> distances;
        std::vector<SummaryRow> per_chain;
        for (std::size_t k = 0; k < chains.size(); ++k) {
            EnsembleSpec ensemble{c.n_samples, JitterModel{sigma, jitter_seed(c.base_seed, k)}};
            const auto result = ensemble_reconstruct(spectra[k], chains[k].energies(), ensemble);
            const auto& est = result.couplings;
            const auto d = static_cast<double>(reconstruction_distance(chains[k].couplings(), est, c.distance_tol));
            distances.push_back(d);
            per_chain.push_back({fmt::format("sigma/chain{}", k), sigma, d});
            if (k == 0) {
                const auto lbl = label("sigma", sigma);
                report.conditions.push_back({lbl, bond_rows(chains[0].couplings(), est), spectrum_rows(spectra[0], spectra[0])});
                report.panels.push_back({"fig5_" + lbl + "_couplings.svg",
                                         couplings_panel("Chain 0, " + lbl, chains[0].couplings(), est)});
                report.panels.push_back(
                    {"fig5_" + lbl + "_error.svg", error_panel("Chain 0 errors, " + lbl, chains[0].couplings(), est)});
            }
        }
        report.summary.push_back({"sigma", sigma, median(distances)});
        report.summary.insert(report.summary.end(), per_chain.begin(), per_chain.end());
    }
}

inline void run_roundtrip(const ExperimentConfig& c, ScenarioReport& report) {
    const ChainSpec chain = make_chain(c, 0);
    const RoundTrip trip = exact_roundtrip(chain);
    if (trip.aborted_at) {
        throw NumericalError(fmt::format("roundtrip: broken bond at {} during reconstruction", *trip.aborted_at));
    }
    const auto est = padded_estimates(trip.couplings, chain.n_sites() - 1);
    const auto spectrum = end_site_spectrum<double>(chain);
    report.conditions.push_back({"roundtrip", bond_rows(chain.couplings(), est), spectrum_rows(spectrum, spectrum)});
    const double dist = static_cast<double>(reconstruction_distance(chain.couplings(), est, c.distance_tol));
    report.summary.push_back({"max_rel_error", max_relative_error(chain.couplings(), est), dist});
    report.summary.push_back({"working_digits", static_cast<double>(trip.digits), dist});
    report.panels.push_back({"roundtrip_couplings.svg", couplings_panel("Round trip", chain.couplings(), est)});
}

}  // namespace detail

/// Runs the scenario pipeline in memory; no files are touched.
inline ScenarioReport compute_scenario(const ExperimentConfig& config) {
    validate(config);
    ScenarioReport report{config, {}, {}, {}};
    switch (config.scenario) {
        case Scenario::demo: detail::run_demo(config, report); break;
        case Scenario::truncation: detail::run_truncation(config, report); break;
        case Scenario::coupling_disorder: detail::run_disorder(config, report); break;
        case Scenario::eigenvalue_jitter: detail::run_jitter(config, report); break;
        case Scenario::roundtrip: detail::run_roundtrip(config, report); break;
    }
    return report;
}

/// `#`-prefixed provenance lines heading every emitted file.
inline std::string provenance_header(const ExperimentConfig& c) {
    return fmt::format("# chainscope {}\n# scenario: {}\n# base_seed: {}\n# rng: {}\n# config: {}\n", kVersion,
                       to_string(c.scenario), c.base_seed, kRngVersion, to_json(c).dump());
}

/// Recovers the config echoed in a file written by write_report().
inline ExperimentConfig config_from_header(std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
        constexpr std::string_view kTag = "# config: ";
        if (line.starts_with(kTag)) return resolve({parse_config_text(line.substr(kTag.size()), "config header")});
    }
    throw ValidationError("config header: no '# config:' line found");
}

inline std::string format_real(double x) { return fmt::format("{:.17g}", x); }

inline std::string bonds_csv(const ExperimentConfig& c, const ConditionTables& t) {
    std::string out = provenance_header(c) + "i,j_true,j_est,delta_j\n";
    for (const auto& r : t.bonds) {
        out += fmt::format("{},{},{},{}\n", r.i, format_real(r.j_true), format_real(r.j_est), format_real(r.delta_j));
    }
    return out;
}

inline std::string spectrum_csv(const ExperimentConfig& c, const ConditionTables& t) {
    std::string out = provenance_header(c) + "n,lambda,c1,truncated\n";
    for (const auto& r : t.spectrum) {
        out += fmt::format("{},{},{},{}\n", r.n, format_real(r.lambda), format_real(r.c1), r.truncated ? 1 : 0);
    }
    return out;
}

inline std::string summary_csv(const ScenarioReport& report) {
    std::string out = provenance_header(report.config) + "condition,value,distance\n";
    for (const auto& r : report.summary) {
        out += fmt::format("{},{},{}\n", r.condition, format_real(r.value), format_real(r.distance));
    }
    return out;
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << text;
    out.close();
    if (!out) throw IoError(path.string(), "write failed");
}

inline void make_dirs(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create directory (" + ec.message() + ")");
}

}  // namespace detail

/// Writes summary.csv, <label>/bonds.csv, <label>/spectrum.csv and, when
/// enabled, one SVG per panel under <output_dir>/plots.
inline void write_report(const ScenarioReport& report) {
    const std::filesystem::path root(report.config.output_dir);
    detail::make_dirs(root);
    detail::write_text(root / "summary.csv", summary_csv(report));
    for (const auto& t : report.conditions) {
        detail::make_dirs(root / t.label);
        detail::write_text(root / t.label / "bonds.csv", bonds_csv(report.config, t));
        detail::write_text(root / t.label / "spectrum.csv", spectrum_csv(report.config, t));
    }
    if (report.config.emit_plots) {
        detail::make_dirs(root / "plots");
        for (const auto& p : report.panels) write_svg((root / "plots" / p.file).string(), p.panel, provenance_header(report.config));
    }
}

inline ScenarioReport run_scenario(const ExperimentConfig& config) {
    ScenarioReport report = compute_scenario(config);
    write_report(report);
    return report;
}

}  // namespace chainscope::harness
