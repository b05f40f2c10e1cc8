#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "fluctana/cwt.hpp"
#include "fluctana/fluctuation.hpp"
#include "fluctana/series.hpp"
#include "fluctana/spectrum.hpp"
#include "fluctana/synth.hpp"
#include "fluctana/wavelet.hpp"

namespace fluctana {

// Everything the command runners need, parsed from a JSON config document.
// Execution details (threads) are deliberately not echoed into reports so
// identical inputs give byte-identical output at any worker count.
struct AnalysisConfig {
    // input
    std::string input_path;
    std::string column = "close";
    std::string label_column;
    bool strict_csv = true;
    std::string input_kind = "prices";  // "prices" takes log returns; "returns" uses values directly

    // returns / profile
    Normalization normalization = Normalization::series_std;
    bool subtract_mean = true;

    // analysis selection for `analyze`
    std::vector<std::string> analyses = {"wbfa", "mfdfa", "spectrum", "dist"};

    // estimators
    WaveletFamily wavelet_family = WaveletFamily::daubechies;
    int wavelet_order = 6;
    Boundary boundary = Boundary::periodic;
    int poly_order = 2;
    double q_min = -4.0, q_max = 4.0, q_step = 0.5;
    ScalePolicy scale_policy{};
    std::vector<std::uint64_t> shuffle_seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    // cwt
    double omega0 = 6.0;
    int voices = 8;
    double cwt_scale_min = 2.0;
    double cwt_scale_max = 0.0;        // 0 = n/2
    std::string cwt_stream = "profile";  // price | returns | profile
    int top_k = 2;
    bool emit_coi = false;

    // spectrum
    int spectrum_log_bins = 16;
    FrequencyBand band{0.0, 0.125};  // lo = 0 selects 4/N

    // dist
    int dist_bins = 61;

    // synth passthrough
    GeneratorSpec synth{};

    // returns subcommand
    std::uint64_t returns_shuffle_seed = 1;

    // execution
    int threads = 0;  // 0 = hardware concurrency
    std::string report_format = "csv-bundle";  // "json" writes the report only

    static AnalysisConfig from_json(const nlohmann::json& j);
    static AnalysisConfig from_json_text(const std::string& text);
    nlohmann::json echo_json() const;  // analysis parameters only
};

// Full pipeline report (the `analyze` subcommand): returns, WBFA/MF-DFA
// scaling, shuffled-surrogate Hurst statistics, spectral exponent and
// distribution diagnostics, as a schema-versioned JSON document.
nlohmann::json run_analyze(const AnalysisConfig& cfg);

// Same, plus report.json and the CSV bundles written atomically to out_dir.
void write_analyze(const AnalysisConfig& cfg, const std::string& out_dir);

nlohmann::json run_cwt(const AnalysisConfig& cfg);
void write_cwt(const AnalysisConfig& cfg, const std::string& out_dir);

nlohmann::json run_spectrum(const AnalysisConfig& cfg);
void write_spectrum_cmd(const AnalysisConfig& cfg, const std::string& out_dir);

void write_synth(const AnalysisConfig& cfg, const std::string& out_path);
void write_returns_cmd(const AnalysisConfig& cfg, const std::string& out_dir);

// Throws when a report contains a non-finite number or misses a required key.
void validate_report(const nlohmann::json& report);

// Shared writers (atomic: temp file + rename).
void write_file_atomic(const std::string& path, const std::string& content);
void write_scalogram_csv(const Scalogram& sg, const std::string& path);
// Binary layout: "FASCAL01", u64 n_scales, u64 n_time, n_scales f64 scales,
// then row-major (scale, time) complex pairs (re, im) as f64; little-endian.
void write_scalogram_bin(const Scalogram& sg, const std::string& path);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace fluctana
