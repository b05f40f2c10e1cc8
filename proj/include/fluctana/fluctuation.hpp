#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fluctana/series.hpp"
#include "fluctana/wavelet.hpp"

namespace fluctana {

// Moment orders. `values` excludes 0; with q0_mode the q=0 entry is computed
// through the logarithmic-average limit instead of direct evaluation.
struct QGrid {
    std::vector<double> values;
    bool q0_mode = true;

    static QGrid regular(double q_min = -4.0, double q_max = 4.0, double step = 0.5, bool q0 = true);
    std::vector<double> moments() const;  // merged, ordered, 0 inserted when q0_mode
    void check() const;
};

struct ScalePolicy {
    long s_min = 0;       // 0 = max(8, filter support) or max(8, poly_order+2)
    long s_max = 0;       // 0 = N/4
    int scale_count = 20; // log-spaced scale count for the polynomial estimator
};

struct MomentResult {
    double q = 0.0;
    double value = 0.0;
    long excluded = 0;  // degenerate segments dropped at this q
};

// q-th order fluctuation function over bidirectional segments of one
// fluctuation signal: segments 1..M_s left-to-right plus M_s+1..2M_s
// right-to-left, F^2(b,s) = mean square over the segment, then the q/2
// power mean (geometric-mean limit at q = 0). Segments with
// F^2 < 1e-15 * var(fluct) are excluded for q <= 0.
std::vector<MomentResult> segment_moments(std::span<const double> fluct, long scale, const QGrid& grid);

struct FluctuationMatrix {
    std::string estimator;            // "wbfa" or "mfdfa"
    std::vector<long> scales;
    std::vector<double> q;            // merged grid, matches rows
    std::vector<double> fq;           // row-major (q, scale), strictly positive
    std::vector<long> segment_counts; // per scale: 2*M_s
    std::vector<long> excluded;       // row-major (q, scale)
    std::vector<char> q_unreliable;   // per q: >1% of segments excluded at some scale

    double at(std::size_t qi, std::size_t si) const { return fq[qi * scales.size() + si]; }
    std::size_t q_count() const { return q.size(); }
    std::size_t scale_count() const { return scales.size(); }
};

// Wavelet-based fluctuation analysis: fluctuation signals from
// extract_fluctuations feed segment_moments at the per-level scale
// (order-1)*(2^L-1)+1; levels whose scale falls outside the policy are
// dropped. Needs at least 4 usable scales.
FluctuationMatrix wbfa(const Profile& profile, const WaveletFilter& filter, const QGrid& grid,
                       const ScalePolicy& policy = {}, Boundary boundary = Boundary::periodic, int threads = 1);

// Multifractal detrended fluctuation analysis: per segment a least-squares
// polynomial of the given order is removed from the profile and F^2 is the
// mean squared residual; the same bidirectional segmentation and moments as
// wbfa. Scales are log-spaced integers within the policy.
FluctuationMatrix mfdfa(const Profile& profile, int poly_order, const QGrid& grid,
                        const ScalePolicy& policy = {}, int threads = 1);

struct HqFit {
    double q = 0.0;
    double exponent = 0.0;
    double stderr_value = 0.0;
    double r2 = 0.0;
};

struct ScalingResult {
    std::vector<HqFit> hq;
    double hurst = 0.0;             // h(2); NaN when q=2 is absent from the grid
    bool hurst_in_range = false;    // flags hurst in (0,1); never clamped
    long fit_s_min = 0;
    long fit_s_max = 0;
    double multifractal_width = 0.0;  // max h - min h over the grid

    const HqFit* find(double q) const;
};

// Ordinary least squares of ln F_q(s) on ln s per moment order.
ScalingResult fit_scaling(const FluctuationMatrix& matrix,
                          std::optional<std::pair<long, long>> fit_range = std::nullopt);

}  // namespace fluctana
