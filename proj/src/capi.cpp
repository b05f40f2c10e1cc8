// C API shim: translates between opaque handles / status codes and the C++
// core. Exceptions never cross this boundary.

#include "fluctana.h"

#include <cstring>
#include <string>

#include "fluctana/analysis.hpp"
#include "fluctana/cwt.hpp"
#include "fluctana/density.hpp"
#include "fluctana/errors.hpp"
#include "fluctana/fluctuation.hpp"
#include "fluctana/series.hpp"
#include "fluctana/spectrum.hpp"
#include "fluctana/synth.hpp"
#include "fluctana/wavelet.hpp"

using namespace fluctana;

namespace {

thread_local std::string g_last_error;

template <typename Fn>
fa_status guarded(Fn&& fn) {
    try {
        fn();
        return FA_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return static_cast<fa_status>(static_cast<int>(e.code()));
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return FA_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return FA_ERR_INTERNAL;
    }
}

fa_status invalid_argument(const char* what) {
    g_last_error = what;
    return FA_ERR_VALIDATION;
}

QGrid to_grid(const fa_qgrid* g) {
    if (!g) return QGrid::regular();
    return QGrid::regular(g->q_min, g->q_max, g->q_step, g->include_q0 != 0);
}

ScalePolicy to_policy(const fa_scale_policy* p) {
    ScalePolicy out;
    if (p) {
        out.s_min = p->s_min;
        out.s_max = p->s_max;
        if (p->scale_count > 0) out.scale_count = p->scale_count;
    }
    return out;
}

WaveletFamily family_from(const char* name) {
    const std::string s = name ? name : "";
    if (s == "haar") return WaveletFamily::haar;
    if (s == "daubechies") return WaveletFamily::daubechies;
    throw ValidationError("unknown wavelet family '" + s + "'");
}

}  // namespace

struct fa_series {
    TimeSeries value;
};
struct fa_returns {
    ReturnSeries value;
};
struct fa_profile {
    Profile value;
};
struct fa_filter {
    WaveletFilter value;
};
struct fa_scalogram {
    Scalogram value;
};
struct fa_matrix {
    FluctuationMatrix value;
};
struct fa_scaling {
    ScalingResult value;
};
struct fa_spectrum {
    PowerSpectrum value;
};
struct fa_density {
    DensityComparison value;
};

extern "C" {

const char* fa_version(void) { return "1.0.0"; }

const char* fa_last_error(void) { return g_last_error.c_str(); }

/* ---- series ---- */

fa_status fa_series_create(const double* values, size_t n, fa_series** out) {
    if (!values || !out) return invalid_argument("fa_series_create: null argument");
    return guarded([&] {
        TimeSeries ts;
        ts.values.assign(values, values + n);
        ts.name = "user";
        validate(ts);
        *out = new fa_series{std::move(ts)};
    });
}

fa_status fa_series_load_csv(const char* path, const char* column, const char* label_column, int strict,
                             fa_series** out) {
    if (!path || !out) return invalid_argument("fa_series_load_csv: null argument");
    return guarded([&] {
        CsvOptions opts;
        if (column) opts.column = column;
        if (label_column) opts.label_column = label_column;
        opts.strict = strict != 0;
        *out = new fa_series{load_csv(path, opts)};
    });
}

fa_status fa_series_synth(const char* kind, size_t length, uint64_t seed, double param, fa_series** out) {
    if (!kind || !out) return invalid_argument("fa_series_synth: null argument");
    return guarded([&] {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::kind_from_string(kind);
        spec.length = length;
        spec.seed = seed;
        if (spec.kind == GeneratorSpec::Kind::fgn) spec.hurst = param;
        if (spec.kind == GeneratorSpec::Kind::binomial_cascade) spec.cascade_a = param;
        *out = new fa_series{generate(spec)};
    });
}

size_t fa_series_length(const fa_series* s) { return s ? s->value.size() : 0; }
const double* fa_series_values(const fa_series* s) { return s ? s->value.values.data() : nullptr; }
void fa_series_free(fa_series* s) { delete s; }

/* ---- returns / profile ---- */

fa_status fa_log_returns(const fa_series* s, const char* normalization, fa_returns** out) {
    if (!s || !out) return invalid_argument("fa_log_returns: null argument");
    return guarded([&] {
        const Normalization norm =
            normalization ? normalization_from_string(normalization) : Normalization::series_std;
        *out = new fa_returns{log_returns(s->value, norm)};
    });
}

fa_status fa_returns_shuffle(const fa_returns* r, uint64_t seed, fa_returns** out) {
    if (!r || !out) return invalid_argument("fa_returns_shuffle: null argument");
    return guarded([&] { *out = new fa_returns{shuffle(r->value, seed)}; });
}

size_t fa_returns_length(const fa_returns* r) { return r ? r->value.size() : 0; }
const double* fa_returns_values(const fa_returns* r) { return r ? r->value.values.data() : nullptr; }
double fa_returns_sigma(const fa_returns* r) { return r ? r->value.sigma : 0.0; }
void fa_returns_free(fa_returns* r) { delete r; }

fa_status fa_profile_build(const fa_returns* r, int subtract_mean, fa_profile** out) {
    if (!r || !out) return invalid_argument("fa_profile_build: null argument");
    return guarded([&] { *out = new fa_profile{build_profile(r->value, subtract_mean != 0)}; });
}

size_t fa_profile_length(const fa_profile* p) { return p ? p->value.size() : 0; }
const double* fa_profile_values(const fa_profile* p) { return p ? p->value.values.data() : nullptr; }
void fa_profile_free(fa_profile* p) { delete p; }

/* ---- filters ---- */

fa_status fa_filter_make(const char* family, int order, fa_filter** out) {
    if (!family || !out) return invalid_argument("fa_filter_make: null argument");
    return guarded([&] { *out = new fa_filter{make_filter(family_from(family), order)}; });
}

int fa_filter_order(const fa_filter* f) { return f ? f->value.order : 0; }
const double* fa_filter_lowpass(const fa_filter* f) { return f ? f->value.lowpass.data() : nullptr; }
const double* fa_filter_highpass(const fa_filter* f) { return f ? f->value.highpass.data() : nullptr; }
void fa_filter_free(fa_filter* f) { delete f; }

/* ---- estimators ---- */

fa_status fa_wbfa(const fa_profile* p, const fa_filter* f, const fa_qgrid* grid, const fa_scale_policy* policy,
                  const char* boundary, int threads, fa_matrix** out) {
    if (!p || !f || !out) return invalid_argument("fa_wbfa: null argument");
    return guarded([&] {
        const Boundary b = boundary ? boundary_from_string(boundary) : Boundary::periodic;
        *out = new fa_matrix{wbfa(p->value, f->value, to_grid(grid), to_policy(policy), b, threads)};
    });
}

fa_status fa_mfdfa(const fa_profile* p, int poly_order, const fa_qgrid* grid, const fa_scale_policy* policy,
                   int threads, fa_matrix** out) {
    if (!p || !out) return invalid_argument("fa_mfdfa: null argument");
    return guarded([&] { *out = new fa_matrix{mfdfa(p->value, poly_order, to_grid(grid), to_policy(policy), threads)}; });
}

size_t fa_matrix_q_count(const fa_matrix* m) { return m ? m->value.q_count() : 0; }
size_t fa_matrix_scale_count(const fa_matrix* m) { return m ? m->value.scale_count() : 0; }
const double* fa_matrix_q(const fa_matrix* m) { return m ? m->value.q.data() : nullptr; }
const long* fa_matrix_scales(const fa_matrix* m) { return m ? m->value.scales.data() : nullptr; }
const double* fa_matrix_fq(const fa_matrix* m) { return m ? m->value.fq.data() : nullptr; }
void fa_matrix_free(fa_matrix* m) { delete m; }

fa_status fa_fit_scaling(const fa_matrix* m, long s_min, long s_max, fa_scaling** out) {
    if (!m || !out) return invalid_argument("fa_fit_scaling: null argument");
    return guarded([&] {
        std::optional<std::pair<long, long>> range;
        if (s_min > 0 || s_max > 0)
            range = std::make_pair(s_min > 0 ? s_min : 1L, s_max > 0 ? s_max : m->value.scales.back());
        *out = new fa_scaling{fit_scaling(m->value, range)};
    });
}

size_t fa_scaling_q_count(const fa_scaling* s) { return s ? s->value.hq.size() : 0; }

fa_status fa_scaling_hq(const fa_scaling* s, size_t index, double* q, double* h, double* stderr_out, double* r2) {
    if (!s) return invalid_argument("fa_scaling_hq: null handle");
    if (index >= s->value.hq.size()) return invalid_argument("fa_scaling_hq: index out of range");
    const HqFit& fit = s->value.hq[index];
    if (q) *q = fit.q;
    if (h) *h = fit.exponent;
    if (stderr_out) *stderr_out = fit.stderr_value;
    if (r2) *r2 = fit.r2;
    return FA_OK;
}

double fa_scaling_hurst(const fa_scaling* s) { return s ? s->value.hurst : 0.0; }
double fa_scaling_width(const fa_scaling* s) { return s ? s->value.multifractal_width : 0.0; }
void fa_scaling_free(fa_scaling* s) { delete s; }

/* ---- cwt ---- */

fa_status fa_cwt(const double* signal, size_t n, double omega0, const double* scales, size_t n_scales,
                 int use_fft, int threads, fa_scalogram** out) {
    if (!signal || !out) return invalid_argument("fa_cwt: null argument");
    return guarded([&] {
        MorletParams params;
        params.omega0 = omega0 > 0.0 ? omega0 : 6.0;
        if (scales && n_scales > 0) {
            params.scales.assign(scales, scales + n_scales);
        } else {
            params.scales = dyadic_scales(n);
        }
        *out = new fa_scalogram{morlet_cwt(std::span<const double>(signal, n), params,
                                           use_fft ? CwtBackend::fft : CwtBackend::direct, threads)};
    });
}

size_t fa_scalogram_scale_count(const fa_scalogram* sg) { return sg ? sg->value.scale_count() : 0; }
size_t fa_scalogram_time_len(const fa_scalogram* sg) { return sg ? sg->value.time_len : 0; }
const double* fa_scalogram_scales(const fa_scalogram* sg) { return sg ? sg->value.scales.data() : nullptr; }
const double* fa_scalogram_wavelengths(const fa_scalogram* sg) {
    return sg ? sg->value.fourier_wavelengths.data() : nullptr;
}
const double* fa_scalogram_coeff(const fa_scalogram* sg) {
    return sg ? reinterpret_cast<const double*>(sg->value.coeff.data()) : nullptr;
}

fa_status fa_scalogram_marginal(const fa_scalogram* sg, const char* mode, double* out) {
    if (!sg || !mode || !out) return invalid_argument("fa_scalogram_marginal: null argument");
    return guarded([&] {
        const std::string m = mode;
        MarginalMode mm;
        if (m == "scale") {
            mm = MarginalMode::scale_marginal;
        } else if (m == "time") {
            mm = MarginalMode::time_marginal;
        } else {
            throw ValidationError("marginal mode must be 'scale' or 'time'");
        }
        const auto v = periodogram(sg->value, mm);
        std::memcpy(out, v.data(), v.size() * sizeof(double));
    });
}

fa_status fa_dominant_scales(const double* marginal, const double* scales, size_t n, int k, double omega0,
                             double* out_scale, double* out_wavelength, double* out_energy, size_t* found) {
    if (!marginal || !scales || !out_scale || !out_wavelength || !out_energy || !found)
        return invalid_argument("fa_dominant_scales: null argument");
    return guarded([&] {
        const auto peaks = dominant_scales(std::span<const double>(marginal, n),
                                           std::span<const double>(scales, n), k,
                                           omega0 > 0.0 ? omega0 : 6.0);
        *found = peaks.size();
        for (std::size_t i = 0; i < peaks.size(); ++i) {
            out_scale[i] = peaks[i].scale;
            out_wavelength[i] = peaks[i].wavelength;
            out_energy[i] = peaks[i].energy;
        }
    });
}

fa_status fa_scalogram_write_csv(const fa_scalogram* sg, const char* path) {
    if (!sg || !path) return invalid_argument("fa_scalogram_write_csv: null argument");
    return guarded([&] { write_scalogram_csv(sg->value, path); });
}

fa_status fa_scalogram_write_bin(const fa_scalogram* sg, const char* path) {
    if (!sg || !path) return invalid_argument("fa_scalogram_write_bin: null argument");
    return guarded([&] { write_scalogram_bin(sg->value, path); });
}

void fa_scalogram_free(fa_scalogram* sg) { delete sg; }

/* ---- spectrum ---- */

fa_status fa_power_spectrum(const fa_profile* p, fa_spectrum** out) {
    if (!p || !out) return invalid_argument("fa_power_spectrum: null argument");
    return guarded([&] { *out = new fa_spectrum{power_spectrum(p->value)}; });
}

fa_status fa_fit_alpha(fa_spectrum* s, double f_lo, double f_hi, int log_bins) {
    if (!s) return invalid_argument("fa_fit_alpha: null handle");
    return guarded([&] {
        std::optional<FrequencyBand> band;
        if (f_lo > 0.0 || f_hi > 0.0) band = FrequencyBand{f_lo, f_hi};
        s->value = fit_alpha(std::move(s->value), band, log_bins);
    });
}

size_t fa_spectrum_length(const fa_spectrum* s) { return s ? s->value.frequencies.size() : 0; }
const double* fa_spectrum_frequencies(const fa_spectrum* s) { return s ? s->value.frequencies.data() : nullptr; }
const double* fa_spectrum_power(const fa_spectrum* s) { return s ? s->value.power.data() : nullptr; }
double fa_spectrum_alpha(const fa_spectrum* s) { return s ? s->value.alpha : 0.0; }
double fa_spectrum_alpha_stderr(const fa_spectrum* s) { return s ? s->value.alpha_stderr : 0.0; }
void fa_spectrum_free(fa_spectrum* s) { delete s; }

fa_status fa_consistency_check(double alpha, double hurst, double tolerance, double* predicted_alpha,
                               double* gap, int* consistent) {
    const Consistency c = consistency_check(alpha, hurst, tolerance > 0.0 ? tolerance : 0.3);
    if (predicted_alpha) *predicted_alpha = c.predicted_alpha;
    if (gap) *gap = c.gap;
    if (consistent) *consistent = c.consistent ? 1 : 0;
    return FA_OK;
}

/* ---- distribution ---- */

fa_status fa_density_compare(const fa_returns* r, int bins, fa_density** out) {
    if (!r || !out) return invalid_argument("fa_density_compare: null argument");
    return guarded([&] { *out = new fa_density{density_compare(r->value, bins)}; });
}

size_t fa_density_bins(const fa_density* d) { return d ? d->value.bin_centers.size() : 0; }
const double* fa_density_centers(const fa_density* d) { return d ? d->value.bin_centers.data() : nullptr; }
const double* fa_density_empirical(const fa_density* d) { return d ? d->value.empirical_density.data() : nullptr; }
const double* fa_density_gaussian(const fa_density* d) { return d ? d->value.gaussian_density.data() : nullptr; }
double fa_density_excess_kurtosis(const fa_density* d) { return d ? d->value.excess_kurtosis : 0.0; }
double fa_density_tail_ratio(const fa_density* d) { return d ? d->value.tail_ratio : 0.0; }
void fa_density_free(fa_density* d) { delete d; }

/* ---- command runners ---- */

fa_status fa_run_analyze(const char* config_json, const char* out_dir) {
    if (!config_json || !out_dir) return invalid_argument("fa_run_analyze: null argument");
    return guarded([&] { write_analyze(AnalysisConfig::from_json_text(config_json), out_dir); });
}

fa_status fa_run_cwt(const char* config_json, const char* out_dir) {
    if (!config_json || !out_dir) return invalid_argument("fa_run_cwt: null argument");
    return guarded([&] { write_cwt(AnalysisConfig::from_json_text(config_json), out_dir); });
}

fa_status fa_run_spectrum(const char* config_json, const char* out_dir) {
    if (!config_json || !out_dir) return invalid_argument("fa_run_spectrum: null argument");
    return guarded([&] { write_spectrum_cmd(AnalysisConfig::from_json_text(config_json), out_dir); });
}

fa_status fa_run_synth(const char* config_json, const char* out_path) {
    if (!config_json || !out_path) return invalid_argument("fa_run_synth: null argument");
    return guarded([&] { write_synth(AnalysisConfig::from_json_text(config_json), out_path); });
}

fa_status fa_run_returns(const char* config_json, const char* out_dir) {
    if (!config_json || !out_dir) return invalid_argument("fa_run_returns: null argument");
    return guarded([&] { write_returns_cmd(AnalysisConfig::from_json_text(config_json), out_dir); });
}

} /* extern "C" */
