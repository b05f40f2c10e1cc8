#include "fluctana/analysis.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>

#include "fluctana/density.hpp"
#include "fluctana/errors.hpp"
#include "fluctana/parallel.hpp"
#include "fluctana/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fluctana {

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config key '") + key + "': " + e.what());
    }
}

const json& subobject(const json& j, const char* key) {
    static const json empty = json::object();
    if (j.is_object() && j.contains(key)) {
        if (!j.at(key).is_object()) throw ValidationError(std::string("config key '") + key + "' must be an object");
        return j.at(key);
    }
    return empty;
}

}  // namespace

AnalysisConfig AnalysisConfig::from_json(const json& j) {
    AnalysisConfig cfg;
    if (!j.is_object()) throw ValidationError("config document must be a JSON object");

    const json& input = subobject(j, "input");
    cfg.input_path = get_or<std::string>(input, "path", cfg.input_path);
    cfg.column = get_or<std::string>(input, "column", cfg.column);
    cfg.label_column = get_or<std::string>(input, "label_column", cfg.label_column);
    cfg.strict_csv = get_or<bool>(input, "strict", cfg.strict_csv);
    cfg.input_kind = get_or<std::string>(input, "kind", cfg.input_kind);
    if (cfg.input_kind != "prices" && cfg.input_kind != "returns")
        throw ValidationError("input.kind must be 'prices' or 'returns'");

    const json& ret = subobject(j, "returns");
    cfg.normalization = normalization_from_string(get_or<std::string>(ret, "normalization", to_string(cfg.normalization)));
    cfg.subtract_mean = get_or<bool>(ret, "subtract_mean", cfg.subtract_mean);

    if (j.contains("analyses")) {
        cfg.analyses.clear();
        for (const auto& a : j.at("analyses")) cfg.analyses.push_back(a.get<std::string>());
    }

    const json& wav = subobject(j, "wavelet");
    const std::string family = get_or<std::string>(wav, "family", to_string(cfg.wavelet_family));
    if (family == "haar") {
        cfg.wavelet_family = WaveletFamily::haar;
        cfg.wavelet_order = 2;
    } else if (family == "daubechies") {
        cfg.wavelet_family = WaveletFamily::daubechies;
    } else {
        throw ValidationError("wavelet.family must be 'haar' or 'daubechies'");
    }
    cfg.wavelet_order = get_or<int>(wav, "order", cfg.wavelet_order);
    cfg.boundary = boundary_from_string(get_or<std::string>(wav, "boundary", to_string(cfg.boundary)));

    cfg.poly_order = get_or<int>(subobject(j, "mfdfa"), "poly_order", cfg.poly_order);

    const json& q = subobject(j, "q");
    cfg.q_min = get_or<double>(q, "min", cfg.q_min);
    cfg.q_max = get_or<double>(q, "max", cfg.q_max);
    cfg.q_step = get_or<double>(q, "step", cfg.q_step);

    const json& scales = subobject(j, "scales");
    cfg.scale_policy.s_min = get_or<long>(scales, "min", cfg.scale_policy.s_min);
    cfg.scale_policy.s_max = get_or<long>(scales, "max", cfg.scale_policy.s_max);
    cfg.scale_policy.scale_count = get_or<int>(scales, "count", cfg.scale_policy.scale_count);
    if (cfg.scale_policy.s_min > 0 && cfg.scale_policy.s_max > 0 && cfg.scale_policy.s_min >= cfg.scale_policy.s_max)
        throw ValidationError("scales.min must be below scales.max");

    const json& shuffle = subobject(j, "shuffle");
    if (shuffle.contains("seeds")) {
        cfg.shuffle_seeds.clear();
        for (const auto& s : shuffle.at("seeds")) cfg.shuffle_seeds.push_back(s.get<std::uint64_t>());
    }

    const json& cwt = subobject(j, "cwt");
    cfg.omega0 = get_or<double>(cwt, "omega0", cfg.omega0);
    cfg.voices = get_or<int>(cwt, "voices", cfg.voices);
    cfg.cwt_scale_min = get_or<double>(cwt, "scale_min", cfg.cwt_scale_min);
    cfg.cwt_scale_max = get_or<double>(cwt, "scale_max", cfg.cwt_scale_max);
    cfg.cwt_stream = get_or<std::string>(cwt, "stream", cfg.cwt_stream);
    cfg.top_k = get_or<int>(cwt, "top_k", cfg.top_k);
    cfg.emit_coi = get_or<bool>(cwt, "coi", cfg.emit_coi);
    if (cfg.cwt_stream != "price" && cfg.cwt_stream != "returns" && cfg.cwt_stream != "profile")
        throw ValidationError("cwt.stream must be 'price', 'returns' or 'profile'");

    const json& spec = subobject(j, "spectrum");
    cfg.spectrum_log_bins = get_or<int>(spec, "log_bins", cfg.spectrum_log_bins);
    if (spec.contains("band")) {
        const auto& b = spec.at("band");
        if (!b.is_array() || b.size() != 2) throw ValidationError("spectrum.band must be [lo, hi]");
        cfg.band.lo = b[0].get<double>();
        cfg.band.hi = b[1].get<double>();
    }

    cfg.dist_bins = get_or<int>(subobject(j, "dist"), "bins", cfg.dist_bins);

    const json& synth = subobject(j, "synth");
    if (synth.contains("kind")) cfg.synth.kind = GeneratorSpec::kind_from_string(synth.at("kind").get<std::string>());
    cfg.synth.length = get_or<std::size_t>(synth, "length", cfg.synth.length);
    cfg.synth.seed = get_or<std::uint64_t>(synth, "seed", cfg.synth.seed);
    cfg.synth.hurst = get_or<double>(synth, "hurst", cfg.synth.hurst);
    cfg.synth.cascade_a = get_or<double>(synth, "a", cfg.synth.cascade_a);

    cfg.returns_shuffle_seed = get_or<std::uint64_t>(subobject(j, "returns_cmd"), "shuffle_seed", cfg.returns_shuffle_seed);

    cfg.threads = get_or<int>(j, "threads", cfg.threads);
    cfg.report_format = get_or<std::string>(j, "report_format", cfg.report_format);
    if (cfg.report_format != "json" && cfg.report_format != "csv-bundle")
        throw ValidationError("report_format must be 'json' or 'csv-bundle'");
    return cfg;
}

AnalysisConfig AnalysisConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

json AnalysisConfig::echo_json() const {
    json j;
    j["input"] = {{"path", input_path}, {"column", column}, {"label_column", label_column},
                  {"strict", strict_csv}, {"kind", input_kind}};
    j["returns"] = {{"normalization", to_string(normalization)}, {"subtract_mean", subtract_mean}};
    j["analyses"] = analyses;
    j["wavelet"] = {{"family", to_string(wavelet_family)}, {"order", wavelet_order}, {"boundary", to_string(boundary)}};
    j["mfdfa"] = {{"poly_order", poly_order}};
    j["q"] = {{"min", q_min}, {"max", q_max}, {"step", q_step}};
    j["scales"] = {{"min", scale_policy.s_min}, {"max", scale_policy.s_max}, {"count", scale_policy.scale_count}};
    j["shuffle"] = {{"seeds", shuffle_seeds}};
    j["cwt"] = {{"omega0", omega0},       {"voices", voices},   {"scale_min", cwt_scale_min},
                {"scale_max", cwt_scale_max}, {"stream", cwt_stream}, {"top_k", top_k},
                {"coi", emit_coi}};
    j["spectrum"] = {{"log_bins", spectrum_log_bins}, {"band", {band.lo, band.hi}}};
    j["dist"] = {{"bins", dist_bins}};
    j["report_format"] = report_format;
    return j;
}

namespace {

TimeSeries load_input(const AnalysisConfig& cfg) {
    if (cfg.input_path.empty()) throw ValidationError("no input path configured");
    CsvOptions opts;
    opts.column = cfg.column;
    opts.label_column = cfg.label_column;
    opts.strict = cfg.strict_csv;
    return load_csv(cfg.input_path, opts);
}

// Returns from either price input (log differences) or direct return input.
ReturnSeries returns_from(const AnalysisConfig& cfg, const TimeSeries& ts) {
    if (cfg.input_kind == "prices") return log_returns(ts, cfg.normalization);
    validate(ts, /*require_positive=*/false);
    ReturnSeries out;
    out.normalization = cfg.normalization;
    out.sigma = 1.0;
    if (cfg.normalization != Normalization::none) {
        out.sigma = sample_stddev(ts.values);
        if (!(out.sigma > 0.0) || !std::isfinite(out.sigma))
            throw DegenerateError("zero standard deviation of the return input");
    }
    out.values.resize(ts.values.size());
    for (std::size_t i = 0; i < ts.values.size(); ++i) out.values[i] = ts.values[i] / out.sigma;
    return out;
}

json input_block(const AnalysisConfig& cfg, const TimeSeries& ts) {
    json j;
    j["path"] = cfg.input_path;
    j["column"] = cfg.column;
    j["kind"] = cfg.input_kind;
    j["rows"] = ts.size();
    if (!ts.labels.empty()) {
        j["first_label"] = ts.labels.front();
        j["last_label"] = ts.labels.back();
    }
    return j;
}

json scaling_json(const FluctuationMatrix& m, const ScalingResult& r) {
    json j;
    j["estimator"] = m.estimator;
    j["hurst"] = r.hurst;
    j["hurst_in_range"] = r.hurst_in_range;
    j["multifractal_width"] = r.multifractal_width;
    j["fit_range"] = {r.fit_s_min, r.fit_s_max};
    j["scales"] = m.scales;
    j["q"] = m.q;
    json fq = json::array();
    for (std::size_t qi = 0; qi < m.q_count(); ++qi) {
        json row = json::array();
        for (std::size_t si = 0; si < m.scale_count(); ++si) row.push_back(m.at(qi, si));
        fq.push_back(std::move(row));
    }
    j["fq"] = fq;
    json hq = json::array();
    for (std::size_t qi = 0; qi < r.hq.size(); ++qi) {
        hq.push_back({{"q", r.hq[qi].q},
                      {"h", r.hq[qi].exponent},
                      {"stderr", r.hq[qi].stderr_value},
                      {"r2", r.hq[qi].r2},
                      {"unreliable", m.q_unreliable[qi] != 0}});
    }
    j["hq"] = hq;
    return j;
}

struct ShuffleStats {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t count = 0;
    std::vector<double> values;
};

json shuffle_json(const ShuffleStats& s) {
    return {{"mean", s.mean}, {"std", s.stddev}, {"seeds", s.count}};
}

ShuffleStats summarize(const std::vector<double>& values) {
    ShuffleStats s;
    s.values = values;
    s.count = values.size();
    if (!values.empty()) s.mean = mean(values);
    s.stddev = values.size() > 1 ? sample_stddev(values) : 0.0;
    return s;
}

struct AnalyzeArtifacts {
    TimeSeries series;
    ReturnSeries returns;
    Profile profile;
    std::optional<ReturnSeries> shuffled_first;
    std::optional<FluctuationMatrix> wbfa_matrix, mfdfa_matrix;
    std::optional<ScalingResult> wbfa_result, mfdfa_result;
    std::optional<PowerSpectrum> spectrum;
    std::optional<DensityComparison> density;
    json report;
};

bool selected(const AnalysisConfig& cfg, const char* name) {
    for (const auto& a : cfg.analyses)
        if (a == name) return true;
    return false;
}

AnalyzeArtifacts run_analyze_full(const AnalysisConfig& cfg) {
    if (cfg.analyses.empty()) throw ValidationError("no analyses selected");
    for (const auto& a : cfg.analyses)
        if (a != "wbfa" && a != "mfdfa" && a != "spectrum" && a != "dist")
            throw ValidationError("unknown analysis '" + a + "' (expected wbfa, mfdfa, spectrum or dist)");

    AnalyzeArtifacts art;
    art.series = load_input(cfg);
    art.returns = returns_from(cfg, art.series);
    art.profile = build_profile(art.returns, cfg.subtract_mean);

    const bool want_wbfa = selected(cfg, "wbfa");
    const bool want_mfdfa = selected(cfg, "mfdfa");
    const QGrid grid = (want_wbfa || want_mfdfa) ? QGrid::regular(cfg.q_min, cfg.q_max, cfg.q_step) : QGrid{};
    if (want_wbfa || want_mfdfa) {
        bool has2 = false;
        for (double q : grid.moments())
            if (std::abs(q - 2.0) < 1e-9) has2 = true;
        if (!has2) throw ValidationError("q grid must include q = 2 to report the Hurst exponent");
    }

    json report;
    report["schema_version"] = 1;
    report["input"] = input_block(cfg, art.series);
    report["config"] = cfg.echo_json();
    report["returns"] = {{"count", art.returns.size()},
                         {"normalization", to_string(art.returns.normalization)},
                         {"sigma", art.returns.sigma}};

    WaveletFilter filter;
    if (want_wbfa) {
        filter = make_filter(cfg.wavelet_family, cfg.wavelet_order);
        art.wbfa_matrix = wbfa(art.profile, filter, grid, cfg.scale_policy, cfg.boundary, cfg.threads);
        art.wbfa_result = fit_scaling(*art.wbfa_matrix);
        json jw = scaling_json(*art.wbfa_matrix, *art.wbfa_result);
        jw["wavelet"] = filter.name();
        report["wbfa"] = jw;
    }
    if (want_mfdfa) {
        art.mfdfa_matrix = mfdfa(art.profile, cfg.poly_order, grid, cfg.scale_policy, cfg.threads);
        art.mfdfa_result = fit_scaling(*art.mfdfa_matrix);
        json jm = scaling_json(*art.mfdfa_matrix, *art.mfdfa_result);
        jm["poly_order"] = cfg.poly_order;
        report["mfdfa"] = jm;
    }

    // Shuffled surrogates: destroy temporal order, keep the distribution.
    ShuffleStats wbfa_sh, mfdfa_sh;
    if ((want_wbfa || want_mfdfa) && !cfg.shuffle_seeds.empty()) {
        const std::size_t n_seeds = cfg.shuffle_seeds.size();
        std::vector<double> hw(n_seeds, 0.0), hm(n_seeds, 0.0);
        parallel_for(n_seeds, cfg.threads, [&](std::size_t i) {
            const ReturnSeries sh = shuffle(art.returns, cfg.shuffle_seeds[i]);
            const Profile prof = build_profile(sh, cfg.subtract_mean);
            if (want_wbfa)
                hw[i] = fit_scaling(wbfa(prof, filter, grid, cfg.scale_policy, cfg.boundary, 1)).hurst;
            if (want_mfdfa)
                hm[i] = fit_scaling(mfdfa(prof, cfg.poly_order, grid, cfg.scale_policy, 1)).hurst;
        });
        art.shuffled_first = shuffle(art.returns, cfg.shuffle_seeds.front());
        if (want_wbfa) {
            wbfa_sh = summarize(hw);
            report["wbfa"]["shuffled"] = shuffle_json(wbfa_sh);
        }
        if (want_mfdfa) {
            mfdfa_sh = summarize(hm);
            report["mfdfa"]["shuffled"] = shuffle_json(mfdfa_sh);
        }
    }

    if (want_wbfa && want_mfdfa && !cfg.shuffle_seeds.empty()) {
        report["table1"] = {{"h_wbfa", art.wbfa_result->hurst},
                            {"h_wbfa_shuffled", wbfa_sh.mean},
                            {"h_mfdfa", art.mfdfa_result->hurst},
                            {"h_mfdfa_shuffled", mfdfa_sh.mean}};
    }

    if (selected(cfg, "spectrum")) {
        art.spectrum = fit_alpha(power_spectrum(art.profile), cfg.band, cfg.spectrum_log_bins);
        json js;
        js["alpha"] = art.spectrum->alpha;
        js["alpha_stderr"] = art.spectrum->alpha_stderr;
        js["r2"] = art.spectrum->r2;
        js["fit_band"] = {art.spectrum->fit_band.lo, art.spectrum->fit_band.hi};
        js["log_bins"] = art.spectrum->log_bins;
        const ScalingResult* hsrc = art.wbfa_result ? &*art.wbfa_result
                                   : art.mfdfa_result ? &*art.mfdfa_result
                                                      : nullptr;
        if (hsrc) {
            const Consistency c = consistency_check(art.spectrum->alpha, hsrc->hurst);
            js["consistency"] = {{"hurst_source", art.wbfa_result ? "wbfa" : "mfdfa"},
                                 {"hurst", hsrc->hurst},
                                 {"predicted_alpha", c.predicted_alpha},
                                 {"gap", c.gap},
                                 {"consistent", c.consistent}};
        }
        report["spectrum"] = js;
    }

    if (selected(cfg, "dist")) {
        art.density = density_compare(art.returns, cfg.dist_bins);
        report["distribution"] = {{"bins", cfg.dist_bins},
                                  {"excess_kurtosis", art.density->excess_kurtosis},
                                  {"tail_ratio", art.density->tail_ratio},
                                  {"mean", art.density->sample_mean},
                                  {"stddev", art.density->sample_stddev}};
    }

    validate_report(report);
    art.report = std::move(report);
    return art;
}

std::string csv_series(const TimeSeries& ts) {
    std::string out = ts.labels.empty() ? "index,value\n" : "index,label,value\n";
    for (std::size_t i = 0; i < ts.values.size(); ++i) {
        out += std::to_string(i);
        if (!ts.labels.empty()) {
            out += ',';
            out += ts.labels[i];
        }
        out += ',';
        out += format_double(ts.values[i]);
        out += '\n';
    }
    return out;
}

std::string csv_values(std::span<const double> v, const char* header) {
    std::string out = header;
    out += '\n';
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_double(v[i]);
        out += '\n';
    }
    return out;
}

void append_fq_rows(std::string& out, const FluctuationMatrix& m) {
    for (std::size_t qi = 0; qi < m.q_count(); ++qi)
        for (std::size_t si = 0; si < m.scale_count(); ++si) {
            out += m.estimator;
            out += ',';
            out += format_double(m.q[qi]);
            out += ',';
            out += std::to_string(m.scales[si]);
            out += ',';
            out += format_double(m.at(qi, si));
            out += ',';
            out += std::to_string(m.excluded[qi * m.scale_count() + si]);
            out += '\n';
        }
}

void append_hq_rows(std::string& out, const FluctuationMatrix& m, const ScalingResult& r) {
    for (std::size_t qi = 0; qi < r.hq.size(); ++qi) {
        out += m.estimator;
        out += ',';
        out += format_double(r.hq[qi].q);
        out += ',';
        out += format_double(r.hq[qi].exponent);
        out += ',';
        out += format_double(r.hq[qi].stderr_value);
        out += ',';
        out += format_double(r.hq[qi].r2);
        out += ',';
        out += (m.q_unreliable[qi] ? '1' : '0');
        out += '\n';
    }
}

}  // namespace

json run_analyze(const AnalysisConfig& cfg) { return run_analyze_full(cfg).report; }

void write_analyze(const AnalysisConfig& cfg, const std::string& out_dir) {
    AnalyzeArtifacts art = run_analyze_full(cfg);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    write_file_atomic((dir / "report.json").string(), art.report.dump(2) + "\n");
    if (cfg.report_format != "csv-bundle") return;

    write_file_atomic((dir / "series.csv").string(), csv_series(art.series));
    write_file_atomic((dir / "returns.csv").string(), csv_values(art.returns.values, "index,value"));
    if (art.shuffled_first)
        write_file_atomic((dir / "returns_shuffled.csv").string(),
                          csv_values(art.shuffled_first->values, "index,value"));

    if (art.wbfa_matrix || art.mfdfa_matrix) {
        std::string fq = "estimator,q,scale,fq,excluded\n";
        std::string hq = "estimator,q,h,stderr,r2,unreliable\n";
        if (art.wbfa_matrix) {
            append_fq_rows(fq, *art.wbfa_matrix);
            append_hq_rows(hq, *art.wbfa_matrix, *art.wbfa_result);
        }
        if (art.mfdfa_matrix) {
            append_fq_rows(fq, *art.mfdfa_matrix);
            append_hq_rows(hq, *art.mfdfa_matrix, *art.mfdfa_result);
        }
        write_file_atomic((dir / "fq.csv").string(), fq);
        write_file_atomic((dir / "hq.csv").string(), hq);
    }

    if (art.spectrum) {
        std::string s = "frequency,power\n";
        for (std::size_t i = 0; i < art.spectrum->frequencies.size(); ++i) {
            s += format_double(art.spectrum->frequencies[i]);
            s += ',';
            s += format_double(art.spectrum->power[i]);
            s += '\n';
        }
        write_file_atomic((dir / "spectrum.csv").string(), s);
    }

    if (art.density) {
        std::string d = "bin_center,empirical,gaussian\n";
        for (std::size_t i = 0; i < art.density->bin_centers.size(); ++i) {
            d += format_double(art.density->bin_centers[i]);
            d += ',';
            d += format_double(art.density->empirical_density[i]);
            d += ',';
            d += format_double(art.density->gaussian_density[i]);
            d += '\n';
        }
        write_file_atomic((dir / "density.csv").string(), d);
    }
}

namespace {

struct CwtArtifacts {
    TimeSeries series;
    Scalogram scalogram;
    std::vector<double> marginal;
    json report;
};

CwtArtifacts run_cwt_full(const AnalysisConfig& cfg) {
    CwtArtifacts art;
    art.series = load_input(cfg);

    std::vector<double> stream;
    if (cfg.cwt_stream == "price") {
        stream = art.series.values;
    } else {
        const ReturnSeries ret = returns_from(cfg, art.series);
        if (cfg.cwt_stream == "returns") {
            stream = ret.values;
        } else {
            stream = build_profile(ret, cfg.subtract_mean).values;
        }
    }
    if (!(population_variance(stream) > 0.0)) throw DegenerateError("zero-variance input stream for cwt");

    MorletParams params;
    params.omega0 = cfg.omega0;
    params.scales = dyadic_scales(stream.size(), cfg.cwt_scale_min, cfg.cwt_scale_max, cfg.voices);
    art.scalogram = morlet_cwt(stream, params, CwtBackend::fft, cfg.threads);
    art.marginal = periodogram(art.scalogram, MarginalMode::scale_marginal);

    const auto peaks = dominant_scales(art.marginal, art.scalogram.scales, cfg.top_k, cfg.omega0);
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < art.marginal.size(); ++i)
        if (art.marginal[i] > art.marginal[argmax]) argmax = i;

    json report;
    report["schema_version"] = 1;
    report["input"] = input_block(cfg, art.series);
    report["config"] = cfg.echo_json();
    report["stream"] = cfg.cwt_stream;
    report["omega0"] = cfg.omega0;
    report["scales"] = {{"count", art.scalogram.scales.size()},
                        {"min", art.scalogram.scales.front()},
                        {"max", art.scalogram.scales.back()},
                        {"voices", cfg.voices}};
    json dom = json::array();
    for (const auto& p : peaks)
        dom.push_back({{"scale", p.scale}, {"wavelength", p.wavelength}, {"energy", p.energy}});
    report["dominant"] = dom;
    report["marginal_peak"] = {{"scale", art.scalogram.scales[argmax]},
                               {"wavelength", art.scalogram.fourier_wavelengths[argmax]}};
    validate_report(report);
    art.report = std::move(report);
    return art;
}

}  // namespace

json run_cwt(const AnalysisConfig& cfg) { return run_cwt_full(cfg).report; }

void write_cwt(const AnalysisConfig& cfg, const std::string& out_dir) {
    CwtArtifacts art = run_cwt_full(cfg);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    write_file_atomic((dir / "cwt_report.json").string(), art.report.dump(2) + "\n");
    write_scalogram_csv(art.scalogram, (dir / "scalogram.csv").string());
    write_scalogram_bin(art.scalogram, (dir / "scalogram.bin").string());

    std::string p = "scale,wavelength,energy\n";
    for (std::size_t i = 0; i < art.marginal.size(); ++i) {
        p += format_double(art.scalogram.scales[i]);
        p += ',';
        p += format_double(art.scalogram.fourier_wavelengths[i]);
        p += ',';
        p += format_double(art.marginal[i]);
        p += '\n';
    }
    write_file_atomic((dir / "periodogram.csv").string(), p);

    if (cfg.emit_coi) {
        const auto coi = cone_of_influence(art.scalogram.time_len);
        write_file_atomic((dir / "coi.csv").string(), csv_values(coi, "time,max_scale"));
    }
}

json run_spectrum(const AnalysisConfig& cfg) {
    const TimeSeries ts = load_input(cfg);
    const ReturnSeries ret = returns_from(cfg, ts);
    const Profile prof = build_profile(ret, cfg.subtract_mean);
    const PowerSpectrum ps = fit_alpha(power_spectrum(prof), cfg.band, cfg.spectrum_log_bins);
    json report;
    report["schema_version"] = 1;
    report["input"] = input_block(cfg, ts);
    report["config"] = cfg.echo_json();
    report["alpha"] = ps.alpha;
    report["alpha_stderr"] = ps.alpha_stderr;
    report["r2"] = ps.r2;
    report["fit_band"] = {ps.fit_band.lo, ps.fit_band.hi};
    report["log_bins"] = ps.log_bins;
    validate_report(report);
    return report;
}

void write_spectrum_cmd(const AnalysisConfig& cfg, const std::string& out_dir) {
    const TimeSeries ts = load_input(cfg);
    const ReturnSeries ret = returns_from(cfg, ts);
    const Profile prof = build_profile(ret, cfg.subtract_mean);
    const PowerSpectrum ps = fit_alpha(power_spectrum(prof), cfg.band, cfg.spectrum_log_bins);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);

    json report = run_spectrum(cfg);
    write_file_atomic((dir / "spectrum_report.json").string(), report.dump(2) + "\n");

    std::string s = "frequency,power\n";
    for (std::size_t i = 0; i < ps.frequencies.size(); ++i) {
        s += format_double(ps.frequencies[i]);
        s += ',';
        s += format_double(ps.power[i]);
        s += '\n';
    }
    write_file_atomic((dir / "spectrum.csv").string(), s);
}

void write_synth(const AnalysisConfig& cfg, const std::string& out_path) {
    const TimeSeries ts = generate(cfg.synth);
    const fs::path p(out_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    write_file_atomic(out_path, csv_series(ts));
}

void write_returns_cmd(const AnalysisConfig& cfg, const std::string& out_dir) {
    const TimeSeries ts = load_input(cfg);
    const ReturnSeries ret = returns_from(cfg, ts);
    const ReturnSeries sh = shuffle(ret, cfg.returns_shuffle_seed);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_file_atomic((dir / "series.csv").string(), csv_series(ts));
    write_file_atomic((dir / "returns.csv").string(), csv_values(ret.values, "index,value"));
    write_file_atomic((dir / "returns_shuffled.csv").string(), csv_values(sh.values, "index,value"));
}

namespace {

void check_finite(const json& j, const std::string& where) {
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) throw DegenerateError("non-finite number in report at " + where);
    } else if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) check_finite(it.value(), where + "/" + it.key());
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], where + "/" + std::to_string(i));
    }
}

}  // namespace

void validate_report(const json& report) {
    if (!report.is_object() || !report.contains("schema_version"))
        throw ValidationError("report is missing schema_version");
    if (report.at("schema_version").get<int>() != 1) throw ValidationError("unsupported report schema version");
    check_finite(report, "");
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write '" + tmp + "'");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("short write to '" + tmp + "'");
    }
    fs::rename(tmp, path);
}

void write_scalogram_csv(const Scalogram& sg, const std::string& path) {
    std::string out = "scale,time,magnitude\n";
    out.reserve(sg.coeff.size() * 24);
    for (std::size_t si = 0; si < sg.scale_count(); ++si) {
        const std::string scale_str = format_double(sg.scales[si]);
        for (std::size_t t = 0; t < sg.time_len; ++t) {
            out += scale_str;
            out += ',';
            out += std::to_string(t);
            out += ',';
            out += format_double(std::abs(sg.at(si, t)));
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

void write_scalogram_bin(const Scalogram& sg, const std::string& path) {
    std::string out;
    out.reserve(16 + sg.scales.size() * 8 + sg.coeff.size() * 16);
    out.append("FASCAL01", 8);
    auto put_u64 = [&out](std::uint64_t v) {
        char buf[8];
        std::memcpy(buf, &v, 8);
        out.append(buf, 8);
    };
    auto put_f64 = [&out](double v) {
        char buf[8];
        std::memcpy(buf, &v, 8);
        out.append(buf, 8);
    };
    put_u64(sg.scale_count());
    put_u64(sg.time_len);
    for (double s : sg.scales) put_f64(s);
    for (const auto& c : sg.coeff) {
        put_f64(c.real());
        put_f64(c.imag());
    }
    write_file_atomic(path, out);
}

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace fluctana
