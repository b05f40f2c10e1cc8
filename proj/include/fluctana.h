/*
 * fluctana — fluctuation analysis of time series.
 *
 * C interface to the shared library: log returns, orthogonal wavelet
 * decomposition, wavelet-based fluctuation analysis (WBFA), MF-DFA, Morlet
 * continuous wavelet scalograms, Fourier power-spectrum scaling, synthetic
 * reference series and distribution diagnostics.
 *
 * Conventions:
 *   - every fallible call returns fa_status; FA_OK is 0
 *   - fa_last_error() describes the most recent failure on this thread
 *   - objects are opaque handles released with their fa_*_free function
 *   - array views returned by accessors stay valid until the owning handle
 *     is freed; they must not be freed by the caller
 */
#ifndef FLUCTANA_H
#define FLUCTANA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define FA_API __declspec(dllexport)
#else
#define FA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fa_status {
    FA_OK = 0,
    FA_ERR_INTERNAL = 1,
    FA_ERR_VALIDATION = 2, /* unusable arguments or configuration */
    FA_ERR_DATA = 3,       /* unreadable or malformed input */
    FA_ERR_DEGENERATE = 4  /* numerically degenerate input */
} fa_status;

FA_API const char* fa_version(void);
FA_API const char* fa_last_error(void);

/* ------------------------------------------------------------------ */
/* opaque handles                                                      */
/* ------------------------------------------------------------------ */

typedef struct fa_series fa_series;       /* raw sample sequence            */
typedef struct fa_returns fa_returns;     /* normalized log returns         */
typedef struct fa_profile fa_profile;     /* cumulative return profile      */
typedef struct fa_filter fa_filter;       /* orthogonal wavelet filter pair */
typedef struct fa_scalogram fa_scalogram; /* complex CWT coefficients       */
typedef struct fa_matrix fa_matrix;       /* F_q(s) fluctuation matrix      */
typedef struct fa_scaling fa_scaling;     /* fitted h(q) spectrum           */
typedef struct fa_spectrum fa_spectrum;   /* Fourier power spectrum         */
typedef struct fa_density fa_density;     /* return density comparison      */

/* ------------------------------------------------------------------ */
/* series, returns, profiles                                           */
/* ------------------------------------------------------------------ */

FA_API fa_status fa_series_create(const double* values, size_t n, fa_series** out);

/* column / label_column: header name, or 0-based index as a decimal string.
 * strict != 0 rejects malformed rows, otherwise they are skipped. */
FA_API fa_status fa_series_load_csv(const char* path, const char* column, const char* label_column,
                                    int strict, fa_series** out);

/* kind: "gaussian-white", "fgn" (param = H), "binomial-cascade" (param = a). */
FA_API fa_status fa_series_synth(const char* kind, size_t length, uint64_t seed, double param,
                                 fa_series** out);

FA_API size_t fa_series_length(const fa_series* s);
FA_API const double* fa_series_values(const fa_series* s);
FA_API void fa_series_free(fa_series* s);

/* normalization: "series-std", "return-std" or "none". */
FA_API fa_status fa_log_returns(const fa_series* s, const char* normalization, fa_returns** out);
FA_API fa_status fa_returns_shuffle(const fa_returns* r, uint64_t seed, fa_returns** out);
FA_API size_t fa_returns_length(const fa_returns* r);
FA_API const double* fa_returns_values(const fa_returns* r);
FA_API double fa_returns_sigma(const fa_returns* r);
FA_API void fa_returns_free(fa_returns* r);

FA_API fa_status fa_profile_build(const fa_returns* r, int subtract_mean, fa_profile** out);
FA_API size_t fa_profile_length(const fa_profile* p);
FA_API const double* fa_profile_values(const fa_profile* p);
FA_API void fa_profile_free(fa_profile* p);

/* ------------------------------------------------------------------ */
/* wavelet filters                                                     */
/* ------------------------------------------------------------------ */

/* family: "haar" (order 2) or "daubechies" (tap count 2,4,...,20). */
FA_API fa_status fa_filter_make(const char* family, int order, fa_filter** out);
FA_API int fa_filter_order(const fa_filter* f);
FA_API const double* fa_filter_lowpass(const fa_filter* f);
FA_API const double* fa_filter_highpass(const fa_filter* f);
FA_API void fa_filter_free(fa_filter* f);

/* ------------------------------------------------------------------ */
/* fluctuation estimators                                              */
/* ------------------------------------------------------------------ */

typedef struct fa_qgrid {
    double q_min;   /* default grid: -4 */
    double q_max;   /* +4 */
    double q_step;  /* 0.5 */
    int include_q0; /* nonzero adds the q = 0 logarithmic-average branch */
} fa_qgrid;

typedef struct fa_scale_policy {
    long s_min;      /* 0 = automatic */
    long s_max;      /* 0 = N/4 */
    int scale_count; /* log-spaced scale count for fa_mfdfa; 0 = 20 */
} fa_scale_policy;

/* boundary: "periodic" or "symmetric". grid/policy NULL = defaults. */
FA_API fa_status fa_wbfa(const fa_profile* p, const fa_filter* f, const fa_qgrid* grid,
                         const fa_scale_policy* policy, const char* boundary, int threads,
                         fa_matrix** out);
FA_API fa_status fa_mfdfa(const fa_profile* p, int poly_order, const fa_qgrid* grid,
                          const fa_scale_policy* policy, int threads, fa_matrix** out);

FA_API size_t fa_matrix_q_count(const fa_matrix* m);
FA_API size_t fa_matrix_scale_count(const fa_matrix* m);
FA_API const double* fa_matrix_q(const fa_matrix* m);
FA_API const long* fa_matrix_scales(const fa_matrix* m);
/* row-major (q, scale) */
FA_API const double* fa_matrix_fq(const fa_matrix* m);
FA_API void fa_matrix_free(fa_matrix* m);

/* s_min/s_max restrict the fitted scales; 0 keeps every scale. */
FA_API fa_status fa_fit_scaling(const fa_matrix* m, long s_min, long s_max, fa_scaling** out);
FA_API size_t fa_scaling_q_count(const fa_scaling* s);
FA_API fa_status fa_scaling_hq(const fa_scaling* s, size_t index, double* q, double* h,
                               double* stderr_out, double* r2);
FA_API double fa_scaling_hurst(const fa_scaling* s);
FA_API double fa_scaling_width(const fa_scaling* s);
FA_API void fa_scaling_free(fa_scaling* s);

/* ------------------------------------------------------------------ */
/* Morlet continuous wavelet transform                                 */
/* ------------------------------------------------------------------ */

/* scales NULL selects the fractional-dyadic default grid (8 voices per
 * octave spanning [2, n/2]). use_fft == 0 runs the direct time-domain
 * reference convolution instead of the frequency-domain product. */
FA_API fa_status fa_cwt(const double* signal, size_t n, double omega0, const double* scales,
                        size_t n_scales, int use_fft, int threads, fa_scalogram** out);

FA_API size_t fa_scalogram_scale_count(const fa_scalogram* sg);
FA_API size_t fa_scalogram_time_len(const fa_scalogram* sg);
FA_API const double* fa_scalogram_scales(const fa_scalogram* sg);
FA_API const double* fa_scalogram_wavelengths(const fa_scalogram* sg);
/* row-major (scale, time), interleaved re/im pairs */
FA_API const double* fa_scalogram_coeff(const fa_scalogram* sg);

/* mode: "scale" (global wavelet spectrum, one value per scale) or "time".
 * The marginal is written to out (capacity respectively scale count or
 * time length). */
FA_API fa_status fa_scalogram_marginal(const fa_scalogram* sg, const char* mode, double* out);

/* k largest strict local maxima of a scale marginal; arrays hold k slots,
 * *found reports how many exist. */
FA_API fa_status fa_dominant_scales(const double* marginal, const double* scales, size_t n, int k,
                                    double omega0, double* out_scale, double* out_wavelength,
                                    double* out_energy, size_t* found);

FA_API fa_status fa_scalogram_write_csv(const fa_scalogram* sg, const char* path);
/* layout: "FASCAL01", u64 scale count, u64 time length, f64 scales, then
 * row-major complex pairs as little-endian f64 */
FA_API fa_status fa_scalogram_write_bin(const fa_scalogram* sg, const char* path);
FA_API void fa_scalogram_free(fa_scalogram* sg);

/* ------------------------------------------------------------------ */
/* Fourier power spectrum                                              */
/* ------------------------------------------------------------------ */

FA_API fa_status fa_power_spectrum(const fa_profile* p, fa_spectrum** out);
/* f_lo/f_hi in cycles/sample; 0 selects the defaults [4/N, 1/8].
 * log_bins 0 fits the raw periodogram points. */
FA_API fa_status fa_fit_alpha(fa_spectrum* s, double f_lo, double f_hi, int log_bins);
FA_API size_t fa_spectrum_length(const fa_spectrum* s);
FA_API const double* fa_spectrum_frequencies(const fa_spectrum* s);
FA_API const double* fa_spectrum_power(const fa_spectrum* s);
FA_API double fa_spectrum_alpha(const fa_spectrum* s);
FA_API double fa_spectrum_alpha_stderr(const fa_spectrum* s);
FA_API void fa_spectrum_free(fa_spectrum* s);

FA_API fa_status fa_consistency_check(double alpha, double hurst, double tolerance,
                                      double* predicted_alpha, double* gap, int* consistent);

/* ------------------------------------------------------------------ */
/* distribution diagnostics                                            */
/* ------------------------------------------------------------------ */

FA_API fa_status fa_density_compare(const fa_returns* r, int bins, fa_density** out);
FA_API size_t fa_density_bins(const fa_density* d);
FA_API const double* fa_density_centers(const fa_density* d);
FA_API const double* fa_density_empirical(const fa_density* d);
FA_API const double* fa_density_gaussian(const fa_density* d);
FA_API double fa_density_excess_kurtosis(const fa_density* d);
FA_API double fa_density_tail_ratio(const fa_density* d);
FA_API void fa_density_free(fa_density* d);

/* ------------------------------------------------------------------ */
/* command runners                                                     */
/* ------------------------------------------------------------------ */

/* The engine behind the CLI subcommands. config_json is a JSON document
 * (see the project README for the key reference); outputs are written
 * atomically. Identical inputs and configs produce byte-identical reports
 * at any thread count. */
FA_API fa_status fa_run_analyze(const char* config_json, const char* out_dir);
FA_API fa_status fa_run_cwt(const char* config_json, const char* out_dir);
FA_API fa_status fa_run_spectrum(const char* config_json, const char* out_dir);
FA_API fa_status fa_run_synth(const char* config_json, const char* out_path);
FA_API fa_status fa_run_returns(const char* config_json, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FLUCTANA_H */
