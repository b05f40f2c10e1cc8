// fluctana command-line tool. Parses flags, assembles a JSON config and
// drives the shared library through its C interface.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluctana.h"

using nlohmann::json;

namespace {

struct CommonOpts {
    std::string input;
    std::string column = "close";
    std::string label_column;
    bool lenient = false;
    std::string input_kind = "prices";
    std::string normalization = "series-std";
    bool no_subtract_mean = false;
    int threads = 0;
};

void add_input_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("-i,--input", o.input, "Input CSV file")->required();
    cmd->add_option("-c,--column", o.column, "Value column (name or 0-based index)")
        ->capture_default_str();
    cmd->add_option("--label-column", o.label_column, "Optional label/date column");
    cmd->add_flag("--lenient", o.lenient, "Skip malformed rows instead of failing");
    cmd->add_option("--input-kind", o.input_kind, "prices | returns")
        ->check(CLI::IsMember({"prices", "returns"}))
        ->capture_default_str();
    cmd->add_option("--normalization", o.normalization, "series-std | return-std | none")
        ->check(CLI::IsMember({"series-std", "return-std", "none"}))
        ->capture_default_str();
    cmd->add_flag("--no-subtract-mean", o.no_subtract_mean,
                  "Accumulate the profile without subtracting the return mean");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = hardware)")->capture_default_str();
}

json base_config(const CommonOpts& o) {
    json cfg;
    cfg["input"] = {{"path", o.input}, {"column", o.column}, {"label_column", o.label_column},
                    {"strict", !o.lenient}, {"kind", o.input_kind}};
    cfg["returns"] = {{"normalization", o.normalization}, {"subtract_mean", !o.no_subtract_mean}};
    cfg["threads"] = o.threads;
    return cfg;
}

int report_failure(fa_status status, const std::string& command) {
    json err;
    err["error"] = {{"code", static_cast<int>(status)}, {"command", command}, {"message", fa_last_error()}};
    std::fprintf(stderr, "%s\n", err.dump().c_str());
    return static_cast<int>(status);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::string cur;
    for (char c : text + ",") {
        if (c == ',') {
            if (!cur.empty()) seeds.push_back(std::stoull(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return seeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fluctana - fluctuation analysis of time series"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(fa_version()));
    app.set_config("--config", "", "Read defaults from a key=value config file");
    app.allow_config_extras(CLI::config_extras_mode::error);

    // ---- analyze ----
    CommonOpts an;
    std::string an_out = "fluctana-out";
    std::vector<std::string> an_analyses = {"wbfa", "mfdfa", "spectrum", "dist"};
    std::string an_wavelet = "db6";
    int an_poly = 2;
    double an_qmin = -4.0, an_qmax = 4.0, an_qstep = 0.5;
    long an_smin = 0, an_smax = 0;
    int an_scales = 20;
    std::string an_boundary = "periodic";
    std::string an_seeds = "1,2,3,4,5,6,7,8,9,10";
    int an_bins = 61;
    int an_logbins = 16;
    double an_band_lo = 0.0, an_band_hi = 0.125;
    std::string an_format = "csv-bundle";

    CLI::App* analyze = app.add_subcommand("analyze", "Full pipeline: returns, WBFA, MF-DFA, spectrum, distribution");
    add_input_flags(analyze, an);
    analyze->add_option("-o,--out", an_out, "Output directory")->capture_default_str();
    analyze->add_option("--analyses", an_analyses, "Subset of wbfa,mfdfa,spectrum,dist")
        ->delimiter(',')
        ->capture_default_str();
    analyze->add_option("--wavelet", an_wavelet, "haar or dbN (N taps, even, <= 20)")->capture_default_str();
    analyze->add_option("--poly-order", an_poly, "MF-DFA detrending order")->capture_default_str();
    analyze->add_option("--q-min", an_qmin)->capture_default_str();
    analyze->add_option("--q-max", an_qmax)->capture_default_str();
    analyze->add_option("--q-step", an_qstep)->capture_default_str();
    analyze->add_option("--s-min", an_smin, "Smallest fit scale (0 = automatic)")->capture_default_str();
    analyze->add_option("--s-max", an_smax, "Largest fit scale (0 = N/4)")->capture_default_str();
    analyze->add_option("--scale-count", an_scales, "MF-DFA scale count")->capture_default_str();
    analyze->add_option("--boundary", an_boundary, "periodic | symmetric")
        ->check(CLI::IsMember({"periodic", "symmetric"}))
        ->capture_default_str();
    analyze->add_option("--shuffle-seeds", an_seeds, "Comma-separated surrogate seeds")->capture_default_str();
    analyze->add_option("--dist-bins", an_bins)->capture_default_str();
    analyze->add_option("--log-bins", an_logbins, "Spectral fit log bins (0 = unbinned)")->capture_default_str();
    analyze->add_option("--band-lo", an_band_lo, "Spectral fit band low edge (0 = 4/N)")->capture_default_str();
    analyze->add_option("--band-hi", an_band_hi, "Spectral fit band high edge")->capture_default_str();
    analyze->add_option("--report-format", an_format, "json | csv-bundle")
        ->check(CLI::IsMember({"json", "csv-bundle"}))
        ->capture_default_str();

    // ---- cwt ----
    CommonOpts cw;
    std::string cw_out = "fluctana-cwt";
    std::string cw_stream = "profile";
    double cw_omega0 = 6.0;
    int cw_voices = 8;
    double cw_smin = 2.0, cw_smax = 0.0;
    int cw_topk = 2;
    bool cw_coi = false;

    CLI::App* cwt = app.add_subcommand("cwt", "Morlet scalogram, periodogram and dominant scales");
    add_input_flags(cwt, cw);
    cwt->add_option("-o,--out", cw_out, "Output directory")->capture_default_str();
    cwt->add_option("--stream", cw_stream, "price | returns | profile")
        ->check(CLI::IsMember({"price", "returns", "profile"}))
        ->capture_default_str();
    cwt->add_option("--omega0", cw_omega0, "Morlet center frequency (>= 5)")->capture_default_str();
    cwt->add_option("--voices", cw_voices, "Voices per octave")->capture_default_str();
    cwt->add_option("--scale-min", cw_smin)->capture_default_str();
    cwt->add_option("--scale-max", cw_smax, "0 = N/2")->capture_default_str();
    cwt->add_option("--top-k", cw_topk, "Dominant scales to report")->capture_default_str();
    cwt->add_flag("--coi", cw_coi, "Emit the cone-of-influence mask");

    // ---- spectrum ----
    CommonOpts sp;
    std::string sp_out = "fluctana-spectrum";
    int sp_logbins = 16;
    double sp_band_lo = 0.0, sp_band_hi = 0.125;

    CLI::App* spectrum = app.add_subcommand("spectrum", "Fourier power spectrum and scaling exponent");
    add_input_flags(spectrum, sp);
    spectrum->add_option("-o,--out", sp_out, "Output directory")->capture_default_str();
    spectrum->add_option("--log-bins", sp_logbins, "0 = unbinned")->capture_default_str();
    spectrum->add_option("--band-lo", sp_band_lo, "0 = 4/N")->capture_default_str();
    spectrum->add_option("--band-hi", sp_band_hi)->capture_default_str();

    // ---- synth ----
    std::string sy_kind = "gaussian-white";
    std::size_t sy_length = 8192;
    std::uint64_t sy_seed = 1;
    double sy_hurst = 0.7;
    double sy_a = 0.75;
    std::string sy_out = "synth.csv";

    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic series as CSV");
    synth->add_option("--kind", sy_kind, "gaussian-white | fgn | binomial-cascade")
        ->check(CLI::IsMember({"gaussian-white", "fgn", "binomial-cascade"}))
        ->capture_default_str();
    synth->add_option("--length", sy_length)->capture_default_str();
    synth->add_option("--seed", sy_seed)->capture_default_str();
    synth->add_option("--hurst", sy_hurst, "fgn target H in (0,1)")->capture_default_str();
    synth->add_option("--a", sy_a, "Cascade weight in (0.5,1)")->capture_default_str();
    synth->add_option("-o,--out", sy_out, "Output CSV path")->capture_default_str();

    // ---- returns ----
    CommonOpts re;
    std::string re_out = "fluctana-returns";
    std::uint64_t re_seed = 1;

    CLI::App* returns = app.add_subcommand("returns", "Emit series, returns and a shuffled surrogate as CSV");
    add_input_flags(returns, re);
    returns->add_option("-o,--out", re_out, "Output directory")->capture_default_str();
    returns->add_option("--shuffle-seed", re_seed)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return static_cast<int>(FA_ERR_VALIDATION);
    }

    if (analyze->parsed()) {
        json cfg = base_config(an);
        cfg["analyses"] = an_analyses;
        const bool haar = an_wavelet == "haar";
        int order = 2;
        if (!haar) {
            if (an_wavelet.rfind("db", 0) != 0) {
                std::fprintf(stderr, "{\"error\":{\"code\":2,\"message\":\"bad wavelet name '%s'\"}}\n",
                             an_wavelet.c_str());
                return static_cast<int>(FA_ERR_VALIDATION);
            }
            order = std::atoi(an_wavelet.c_str() + 2);
        }
        cfg["wavelet"] = {{"family", haar ? "haar" : "daubechies"}, {"order", order}, {"boundary", an_boundary}};
        cfg["mfdfa"] = {{"poly_order", an_poly}};
        cfg["q"] = {{"min", an_qmin}, {"max", an_qmax}, {"step", an_qstep}};
        cfg["scales"] = {{"min", an_smin}, {"max", an_smax}, {"count", an_scales}};
        cfg["shuffle"] = {{"seeds", parse_seed_list(an_seeds)}};
        cfg["dist"] = {{"bins", an_bins}};
        cfg["spectrum"] = {{"log_bins", an_logbins}, {"band", {an_band_lo, an_band_hi}}};
        cfg["report_format"] = an_format;
        const fa_status st = fa_run_analyze(cfg.dump().c_str(), an_out.c_str());
        if (st != FA_OK) return report_failure(st, "analyze");
        std::printf("analyze: report written to %s/report.json\n", an_out.c_str());
        return 0;
    }

    if (cwt->parsed()) {
        json cfg = base_config(cw);
        cfg["cwt"] = {{"omega0", cw_omega0}, {"voices", cw_voices},   {"scale_min", cw_smin},
                      {"scale_max", cw_smax}, {"stream", cw_stream}, {"top_k", cw_topk},
                      {"coi", cw_coi}};
        const fa_status st = fa_run_cwt(cfg.dump().c_str(), cw_out.c_str());
        if (st != FA_OK) return report_failure(st, "cwt");
        std::printf("cwt: outputs written to %s\n", cw_out.c_str());
        return 0;
    }

    if (spectrum->parsed()) {
        json cfg = base_config(sp);
        cfg["spectrum"] = {{"log_bins", sp_logbins}, {"band", {sp_band_lo, sp_band_hi}}};
        const fa_status st = fa_run_spectrum(cfg.dump().c_str(), sp_out.c_str());
        if (st != FA_OK) return report_failure(st, "spectrum");
        std::printf("spectrum: outputs written to %s\n", sp_out.c_str());
        return 0;
    }

    if (synth->parsed()) {
        json cfg;
        cfg["synth"] = {{"kind", sy_kind}, {"length", sy_length}, {"seed", sy_seed},
                        {"hurst", sy_hurst}, {"a", sy_a}};
        const fa_status st = fa_run_synth(cfg.dump().c_str(), sy_out.c_str());
        if (st != FA_OK) return report_failure(st, "synth");
        std::printf("synth: %s\n", sy_out.c_str());
        return 0;
    }

    if (returns->parsed()) {
        json cfg = base_config(re);
        cfg["returns_cmd"] = {{"shuffle_seed", re_seed}};
        const fa_status st = fa_run_returns(cfg.dump().c_str(), re_out.c_str());
        if (st != FA_OK) return report_failure(st, "returns");
        std::printf("returns: outputs written to %s\n", re_out.c_str());
        return 0;
    }

    return static_cast<int>(FA_ERR_VALIDATION);
}
