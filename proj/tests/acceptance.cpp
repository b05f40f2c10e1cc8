// Acceptance suite: pinned end-to-end checks against analytically known
// ground truth. Prints one PASS/FAIL line per criterion; the process exits
// nonzero if any criterion fails. Criterion 7 needs an externally supplied
// market-data fixture and is skipped when the file is absent.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fluctana/analysis.hpp"
#include "fluctana/cwt.hpp"
#include "fluctana/density.hpp"
#include "fluctana/errors.hpp"
#include "fluctana/fluctuation.hpp"
#include "fluctana/rng.hpp"
#include "fluctana/series.hpp"
#include "fluctana/spectrum.hpp"
#include "fluctana/synth.hpp"
#include "fluctana/wavelet.hpp"
#include "oracles.hpp"

using namespace fluctana;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

void skip(int criterion, const std::string& detail) {
    std::printf("SKIP criterion %d: %s\n", criterion, detail.c_str());
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof(buf), format, args);
    va_end(args);
    return buf;
}

Profile profile_of(const std::vector<double>& values) {
    ReturnSeries r;
    r.values = values;
    return build_profile(r, true);
}

// ---------------------------------------------------------------- 1 ----
// fGn with H in {0.3, 0.5, 0.7}, N = 8192, 10 seeds: mean h(2) within 0.05
// of the target and every seed within 0.1, for both estimators, in < 10 s.
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const WaveletFilter db6 = make_filter(WaveletFamily::daubechies, 6);
    const QGrid q2 = [] {
        QGrid g;
        g.values = {2.0};
        g.q0_mode = false;
        return g;
    }();

    bool pass = true;
    std::string detail;
    for (const double target : {0.3, 0.5, 0.7}) {
        double sum_w = 0.0, sum_m = 0.0, worst_w = 0.0, worst_m = 0.0;
        for (int seed = 0; seed < 10; ++seed) {
            GeneratorSpec spec;
            spec.kind = GeneratorSpec::Kind::fgn;
            spec.length = 8192;
            spec.hurst = target;
            spec.seed = 1000 + static_cast<std::uint64_t>(seed);
            const Profile prof = profile_of(fgn(spec).values);
            const double hw = fit_scaling(wbfa(prof, db6, q2)).hurst;
            const double hm = fit_scaling(mfdfa(prof, 2, q2)).hurst;
            sum_w += hw;
            sum_m += hm;
            worst_w = std::max(worst_w, std::abs(hw - target));
            worst_m = std::max(worst_m, std::abs(hm - target));
        }
        const double mean_w = sum_w / 10.0, mean_m = sum_m / 10.0;
        detail += fmt("H=%.1f wbfa %.3f mfdfa %.3f; ", target, mean_w, mean_m);
        if (std::abs(mean_w - target) > 0.05 || std::abs(mean_m - target) > 0.05) pass = false;
        if (worst_w > 0.1 || worst_m > 0.1) pass = false;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 10.0) pass = false;
    report(1, pass, fmt("monofractal fGn oracle (%s%.2f s)", detail.c_str(), secs));
}

// ---------------------------------------------------------------- 2 ----
// Binomial cascade a = 0.75, N = 2^13: fitted h(q) within 0.1 of the closed
// form at q in {-4,-2,-1,0,1,2,4} and multifractal width > 0.5.
void criterion_2() {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::binomial_cascade;
    spec.length = 1 << 13;
    spec.cascade_a = 0.75;
    const Profile prof = profile_of(binomial_cascade(spec).values);
    const ScalingResult wr = fit_scaling(wbfa(prof, make_filter(WaveletFamily::daubechies, 6), QGrid::regular()));
    const ScalingResult mr = fit_scaling(mfdfa(prof, 2, QGrid::regular()));

    bool pass = true;
    double worst = 0.0, worst_m = 0.0;
    for (const double q : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
        const double target = cascade_hq(q, 0.75);
        const HqFit* fit = wr.find(q);
        if (!fit) {
            pass = false;
            continue;
        }
        worst = std::max(worst, std::abs(fit->exponent - target));
        if (std::abs(fit->exponent - target) > 0.1) pass = false;
        if (const HqFit* mfit = mr.find(q)) worst_m = std::max(worst_m, std::abs(mfit->exponent - target));
    }
    if (wr.multifractal_width <= 0.5) pass = false;
    report(2, pass,
           fmt("cascade closed form: wbfa max |dh| %.3f, width %.2f (mfdfa max |dh| %.3f, informational)",
               worst, wr.multifractal_width, worst_m));
}

// ---------------------------------------------------------------- 3 ----
// Literal moment-sum equivalence at N <= 256 within 1e-10: the estimators
// must match naive reference implementations of the segment fluctuation
// function (including the q = 0 logarithmic-average branch).
void criterion_3() {
    bool pass = true;
    double worst = 0.0;
    const QGrid grid = QGrid::regular(-4.0, 4.0, 1.0);

    for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Rng rng(seed);
        std::vector<double> fl(256);
        for (auto& v : fl) v = rng.gaussian();

        for (const long scale : {4L, 16L, 25L, 100L}) {
            const auto res = segment_moments(fl, scale, grid);
            for (const auto& r : res) {
                const double expect = oracles::brute_fq(fl, scale, r.q);
                worst = std::max(worst, std::abs(r.value - expect) / std::abs(expect));
            }
        }

        const Profile prof = profile_of(fl);
        const WaveletFilter db4 = make_filter(WaveletFamily::daubechies, 4);
        ScalePolicy policy;
        policy.s_min = 4;
        policy.s_max = 64;
        const FluctuationMatrix mw = wbfa(prof, db4, grid, policy);
        const FluctuationSet fs = extract_fluctuations(prof, db4, 8);
        for (std::size_t si = 0; si < mw.scale_count(); ++si) {
            const FluctuationLevel* lv = nullptr;
            for (const auto& cand : fs.levels)
                if (cand.scale == mw.scales[si]) lv = &cand;
            for (std::size_t qi = 0; qi < mw.q_count(); ++qi) {
                const double expect = oracles::brute_fq(lv->fluctuation, mw.scales[si], mw.q[qi]);
                worst = std::max(worst, std::abs(mw.at(qi, si) - expect) / std::abs(expect));
            }
        }

        const FluctuationMatrix mm = mfdfa(prof, 2, grid, policy);
        for (std::size_t si = 0; si < mm.scale_count(); ++si)
            for (std::size_t qi = 0; qi < mm.q_count(); ++qi) {
                const double expect = oracles::brute_mfdfa_fq(prof.values, mm.scales[si], 2, mm.q[qi]);
                worst = std::max(worst, std::abs(mm.at(qi, si) - expect) / std::abs(expect));
            }
    }
    if (worst > 1e-10) pass = false;
    report(3, pass, fmt("brute-force moment equivalence, worst relative gap %.2e", worst));
}

// ---------------------------------------------------------------- 4 ----
// Perfect reconstruction (1e-9 rel), Parseval (1e-8 rel) and vanishing
// moments (1e-7) for Haar, Db-4, Db-6 across dyadic and non-dyadic lengths
// including 2903.
void criterion_4() {
    bool pass = true;
    double worst_pr = 0.0, worst_pv = 0.0, worst_vm = 0.0;
    for (const std::size_t n : {256UL, 777UL, 1024UL, 2903UL}) {
        for (const int order : {2, 4, 6}) {
            const WaveletFilter f =
                make_filter(order == 2 ? WaveletFamily::haar : WaveletFamily::daubechies, order);
            Rng rng(n + static_cast<std::size_t>(order));
            std::vector<double> x(n);
            for (auto& v : x) v = rng.gaussian();

            int levels = 1;
            while ((1UL << (levels + 1)) <= n && levels < 7) ++levels;

            for (const Boundary b : {Boundary::periodic, Boundary::symmetric}) {
                const Decomposition d = decompose(x, f, levels, b);
                const auto back = reconstruct(d);
                double max_err = 0.0, max_x = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    max_err = std::max(max_err, std::abs(back[i] - x[i]));
                    max_x = std::max(max_x, std::abs(x[i]));
                }
                worst_pr = std::max(worst_pr, max_err / max_x);

                if (b == Boundary::periodic) {
                    double ein = 0.0, ecoef = 0.0;
                    for (double v : x) ein += v * v;
                    for (double v : d.approx) ecoef += v * v;
                    for (const auto& band : d.details)
                        for (double v : band) ecoef += v * v;
                    worst_pv = std::max(worst_pv, std::abs(ecoef - ein) / ein);
                }
            }

            // degree-(k-1) polynomial annihilation away from the seam
            const int k = order / 2;
            std::vector<double> poly(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / static_cast<double>(n);
                double p = 1.0, acc = 0.0;
                for (int d = 0; d < k; ++d) {
                    acc += p;
                    p *= t;
                }
                poly[i] = acc;
            }
            const Decomposition dp = decompose(poly, f, 1, Boundary::periodic);
            const std::size_t guard = static_cast<std::size_t>(order);
            for (std::size_t i = 0; i + guard < dp.details[0].size(); ++i)
                worst_vm = std::max(worst_vm, std::abs(dp.details[0][i]));
        }
    }
    if (worst_pr > 1e-9 || worst_pv > 1e-8 || worst_vm > 1e-7) pass = false;
    report(4, pass,
           fmt("transforms: reconstruction %.1e, parseval %.1e, moment annihilation %.1e", worst_pr,
               worst_pv, worst_vm));
}

// ---------------------------------------------------------------- 5 ----
// Morlet CWT: dominant wavelength within one grid step of the tone period
// for T in {32, 64, 256} at N = 4096; direct and FFT backends agree to 1e-6.
void criterion_5() {
    bool pass = true;
    std::string detail;
    MorletParams params;
    params.scales = dyadic_scales(4096);
    const double step = std::pow(2.0, 0.125);

    for (const double period : {32.0, 64.0, 256.0}) {
        std::vector<double> x(4096);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = std::sin(2.0 * M_PI * static_cast<double>(i) / period);
        const Scalogram sg = morlet_cwt(x, params, CwtBackend::fft, 0);
        const auto marg = periodogram(sg, MarginalMode::scale_marginal);
        std::size_t best = 0;
        for (std::size_t i = 1; i < marg.size(); ++i)
            if (marg[i] > marg[best]) best = i;
        const double lambda = sg.fourier_wavelengths[best];
        detail += fmt("T=%g->%.1f ", period, lambda);
        if (lambda / period >= step || period / lambda >= step) pass = false;
    }

    Rng rng(99);
    std::vector<double> noise(512);
    for (auto& v : noise) v = rng.gaussian();
    MorletParams small;
    small.scales = dyadic_scales(512, 2.0, 128.0, 4);
    const Scalogram a = morlet_cwt(noise, small, CwtBackend::fft, 0);
    const Scalogram b = morlet_cwt(noise, small, CwtBackend::direct, 0);
    double max_c = 0.0, gap = 0.0;
    for (const auto& c : a.coeff) max_c = std::max(max_c, std::abs(c));
    for (std::size_t i = 0; i < a.coeff.size(); ++i) gap = std::max(gap, std::abs(a.coeff[i] - b.coeff[i]));
    if (gap > 1e-6 * max_c) pass = false;
    report(5, pass, fmt("cwt period detection (%sbackend gap %.1e rel)", detail.c_str(), gap / max_c));
}

// ---------------------------------------------------------------- 6 ----
// Spectral scaling: white-noise profiles fit alpha = 2.0 +- 0.2, fGn H=0.7
// profiles fit 2.4 +- 0.25, and alpha = 2H + 1 holds within 0.3 throughout.
void criterion_6() {
    bool pass = true;
    const WaveletFilter db6 = make_filter(WaveletFamily::daubechies, 6);
    const QGrid q2 = [] {
        QGrid g;
        g.values = {2.0};
        g.q0_mode = false;
        return g;
    }();
    double worst_gap = 0.0;
    std::string detail;

    for (int seed = 0; seed < 5; ++seed) {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::gaussian_white;
        spec.length = 8192;
        spec.seed = 300 + static_cast<std::uint64_t>(seed);
        const Profile prof = profile_of(gaussian_white(spec).values);
        const double alpha = fit_alpha(power_spectrum(prof)).alpha;
        if (std::abs(alpha - 2.0) > 0.2) pass = false;
        const double h = fit_scaling(wbfa(prof, db6, q2)).hurst;
        worst_gap = std::max(worst_gap, consistency_check(alpha, h).gap);
        if (seed == 0) detail += fmt("white alpha %.2f; ", alpha);
    }

    for (int seed = 0; seed < 5; ++seed) {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::fgn;
        spec.length = 8192;
        spec.hurst = 0.7;
        spec.seed = 400 + static_cast<std::uint64_t>(seed);
        const Profile prof = profile_of(fgn(spec).values);
        const double alpha = fit_alpha(power_spectrum(prof)).alpha;
        if (std::abs(alpha - 2.4) > 0.25) pass = false;
        const double h = fit_scaling(wbfa(prof, db6, q2)).hurst;
        worst_gap = std::max(worst_gap, consistency_check(alpha, h).gap);
        if (seed == 0) detail += fmt("fGn(0.7) alpha %.2f; ", alpha);
    }

    if (worst_gap > 0.3) pass = false;
    report(6, pass, fmt("spectral relation (%sworst 2H+1 gap %.2f)", detail.c_str(), worst_gap));
}

// ---------------------------------------------------------------- 7 ----
// Reproduction on the externally supplied daily-high index fixture
// (1997-2009, 2903 rows). Checked only when the file exists.
void criterion_7() {
    std::string path = "data/bse_high.csv";
    if (const char* env = std::getenv("FLUCTANA_BSE_CSV")) path = env;
    if (!fs::exists(path)) {
        skip(7, "market-data fixture not present (set FLUCTANA_BSE_CSV or provide data/bse_high.csv)");
        return;
    }

    bool pass = true;
    std::string detail;
    try {
        CsvOptions opts;
        opts.column = "high";
        const TimeSeries ts = load_csv(path, opts);
        const ReturnSeries ret = log_returns(ts, Normalization::series_std);
        const Profile prof = build_profile(ret, true);

        const WaveletFilter db6 = make_filter(WaveletFamily::daubechies, 6);
        const QGrid grid = QGrid::regular();
        const double h_wbfa = fit_scaling(wbfa(prof, db6, grid)).hurst;
        const double h_mfdfa = fit_scaling(mfdfa(prof, 2, grid)).hurst;

        double sh_w = 0.0, sh_m = 0.0;
        const int seeds = 10;
        for (int s = 0; s < seeds; ++s) {
            const ReturnSeries sh = shuffle(ret, 1 + static_cast<std::uint64_t>(s));
            const Profile sp = build_profile(sh, true);
            sh_w += fit_scaling(wbfa(sp, db6, grid)).hurst;
            sh_m += fit_scaling(mfdfa(sp, 2, grid)).hurst;
        }
        sh_w /= seeds;
        sh_m /= seeds;
        detail += fmt("wbfa %.4f/%.4f mfdfa %.4f/%.4f; ", h_wbfa, sh_w, h_mfdfa, sh_m);
        if (std::abs(h_wbfa - 0.5486) > 0.05) pass = false;
        if (std::abs(sh_w - 0.5218) > 0.05) pass = false;
        if (std::abs(h_mfdfa - 0.5590) > 0.05) pass = false;
        if (std::abs(sh_m - 0.5420) > 0.05) pass = false;

        const double alpha = fit_alpha(power_spectrum(prof)).alpha;
        detail += fmt("alpha %.2f; ", alpha);
        if (std::abs(alpha - 2.11) > 0.15) pass = false;

        const DensityComparison d = density_compare(ret, 61);
        detail += fmt("kurt %.1f tail %.1f; ", d.excess_kurtosis, d.tail_ratio);
        if (d.excess_kurtosis <= 1.0 || d.tail_ratio <= 2.0) pass = false;

        // dominant scales near {119, 194} and a ~250-sample marginal period;
        // the input stream and |W| vs |W|^2 are free parameters, so accept
        // any documented combination
        bool scales_ok = false, period_ok = false;
        for (const bool use_profile : {true, false}) {
            MorletParams params;
            params.scales = dyadic_scales(prof.size());
            const Scalogram sg = morlet_cwt(use_profile ? prof.values : ret.values, params);
            for (const bool squared : {true, false}) {
                std::vector<double> marg(sg.scale_count(), 0.0);
                for (std::size_t si = 0; si < sg.scale_count(); ++si) {
                    double acc = 0.0;
                    for (std::size_t t = 0; t < sg.time_len; ++t) {
                        const double m = std::abs(sg.at(si, t));
                        acc += squared ? m * m : m;
                    }
                    marg[si] = acc;
                }
                try {
                    const auto peaks = dominant_scales(marg, sg.scales, 2);
                    if (peaks.size() == 2) {
                        double lo = std::min(peaks[0].scale, peaks[1].scale);
                        double hi = std::max(peaks[0].scale, peaks[1].scale);
                        if (std::abs(lo - 119.0) <= 15.0 && std::abs(hi - 194.0) <= 15.0) scales_ok = true;
                    }
                    for (const auto& p : peaks)
                        if (std::abs(p.wavelength - 250.0) <= 40.0) period_ok = true;
                } catch (const Error&) {
                }
            }
        }
        detail += fmt("cwt scales %s period %s", scales_ok ? "ok" : "off", period_ok ? "ok" : "off");
        if (!scales_ok || !period_ok) pass = false;
    } catch (const std::exception& e) {
        pass = false;
        detail += std::string("exception: ") + e.what();
    }
    report(7, pass, "index reproduction: " + detail);
}

// ---------------------------------------------------------------- 8 ----
// cmd_analyze determinism: identical inputs and configs give byte-identical
// reports at any worker count.
void criterion_8() {
    const fs::path tmp = fs::temp_directory_path() / "fluctana_acceptance_det";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    AnalysisConfig synth_cfg;
    synth_cfg.synth.kind = GeneratorSpec::Kind::gaussian_white;
    synth_cfg.synth.length = 4096;
    synth_cfg.synth.seed = 77;
    const std::string csv = (tmp / "white.csv").string();
    write_synth(synth_cfg, csv);

    auto run = [&](int threads, const std::string& sub) {
        AnalysisConfig cfg;
        cfg.input_path = csv;
        cfg.column = "value";
        cfg.input_kind = "returns";
        cfg.threads = threads;
        const std::string out = (tmp / sub).string();
        write_analyze(cfg, out);
        std::ifstream in(fs::path(out) / "report.json", std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };

    const std::string r1 = run(1, "t1");
    const std::string r1b = run(1, "t1b");
    const std::string r4 = run(4, "t4");
    const std::string r16 = run(16, "t16");
    const bool pass = !r1.empty() && r1 == r1b && r1 == r4 && r1 == r16;
    report(8, pass, fmt("byte-identical reports across worker counts 1/1/4/16 (%zu bytes)", r1.size()));
    fs::remove_all(tmp);
}

}  // namespace

int main() {
    std::printf("fluctana acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures == 0) {
        std::printf("all criteria passed\n");
    } else {
        std::printf("%d criteria FAILED\n", g_failures);
    }
    return g_failures == 0 ? 0 : 1;
}
