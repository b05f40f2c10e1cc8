#include "fluctana/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluctana/errors.hpp"
#include "fluctana/parallel.hpp"
#include "fluctana/stats.hpp"

namespace fluctana {

QGrid QGrid::regular(double q_min, double q_max, double step, bool q0) {
    if (!(step > 0.0)) throw ValidationError("q grid step must be positive");
    if (!(q_min < q_max)) throw ValidationError("q grid needs q_min < q_max");
    QGrid g;
    g.q0_mode = q0;
    const long count = std::lround((q_max - q_min) / step);
    for (long i = 0; i <= count; ++i) {
        const double q = q_min + static_cast<double>(i) * step;
        if (std::abs(q) < 1e-12) continue;  // 0 is handled by the log branch
        g.values.push_back(q);
    }
    g.check();
    return g;
}

void QGrid::check() const {
    if (values.empty() && !q0_mode) throw ValidationError("empty q grid");
    double prev = -std::numeric_limits<double>::infinity();
    for (double q : values) {
        if (!std::isfinite(q)) throw ValidationError("non-finite q value");
        if (q == 0.0) throw ValidationError("q = 0 must go through q0_mode, not direct evaluation");
        if (!(q > prev)) throw ValidationError("q grid must be strictly increasing");
        prev = q;
    }
}

std::vector<double> QGrid::moments() const {
    std::vector<double> out;
    out.reserve(values.size() + 1);
    bool inserted = !q0_mode;
    for (double q : values) {
        if (!inserted && q > 0.0) {
            out.push_back(0.0);
            inserted = true;
        }
        out.push_back(q);
    }
    if (!inserted) out.push_back(0.0);
    return out;
}

namespace {

// Shared moment evaluation over a list of per-segment F^2 values.
std::vector<MomentResult> moments_from_f2(const std::vector<double>& f2, const QGrid& grid, double eps,
                                          long scale) {
    const auto qs = grid.moments();
    std::vector<MomentResult> out(qs.size());
    const double count = static_cast<double>(f2.size());
    for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        const double q = qs[qi];
        MomentResult& r = out[qi];
        r.q = q;
        if (q > 0.0) {
            double acc = 0.0;
            for (double v : f2) acc += std::pow(v, 0.5 * q);
            r.value = std::pow(acc / count, 1.0 / q);
        } else {
            // zero segments blow up negative moments and the log average
            double acc = 0.0;
            long used = 0;
            for (double v : f2) {
                if (v > eps) {
                    acc += (q == 0.0) ? std::log(v) : std::pow(v, 0.5 * q);
                    ++used;
                }
            }
            r.excluded = static_cast<long>(f2.size()) - used;
            if (used == 0)
                throw DegenerateError("all segments degenerate at scale " + std::to_string(scale) + " for q = " +
                                      std::to_string(q));
            const double m = acc / static_cast<double>(used);
            r.value = (q == 0.0) ? std::exp(0.5 * m) : std::pow(m, 1.0 / q);
        }
    }
    return out;
}

std::vector<double> bidirectional_f2(std::span<const double> fluct, long scale) {
    const long n = static_cast<long>(fluct.size());
    const long m = n / scale;
    std::vector<double> f2;
    f2.reserve(static_cast<std::size_t>(2 * m));
    for (long b = 0; b < m; ++b) {
        double acc = 0.0;
        for (long i = b * scale; i < (b + 1) * scale; ++i) acc += fluct[static_cast<std::size_t>(i)] * fluct[static_cast<std::size_t>(i)];
        f2.push_back(acc / static_cast<double>(scale));
    }
    for (long b = 0; b < m; ++b) {
        double acc = 0.0;
        for (long i = n - (b + 1) * scale; i < n - b * scale; ++i) acc += fluct[static_cast<std::size_t>(i)] * fluct[static_cast<std::size_t>(i)];
        f2.push_back(acc / static_cast<double>(scale));
    }
    return f2;
}

void check_matrix(const FluctuationMatrix& m) {
    for (std::size_t qi = 0; qi < m.q_count(); ++qi) {
        for (std::size_t si = 0; si < m.scale_count(); ++si) {
            const double v = m.at(qi, si);
            if (!std::isfinite(v) || v <= 0.0)
                throw DegenerateError(m.estimator + ": degenerate fluctuation function at q = " +
                                      std::to_string(m.q[qi]) + ", scale " + std::to_string(m.scales[si]));
        }
    }
}

void flag_unreliable(FluctuationMatrix& m) {
    m.q_unreliable.assign(m.q_count(), 0);
    for (std::size_t qi = 0; qi < m.q_count(); ++qi) {
        for (std::size_t si = 0; si < m.scale_count(); ++si) {
            const double frac = static_cast<double>(m.excluded[qi * m.scale_count() + si]) /
                                static_cast<double>(m.segment_counts[si]);
            if (frac > 0.01) m.q_unreliable[qi] = 1;
        }
    }
}

// Least-squares polynomial detrending of one segment on t mapped to [-1, 1];
// returns the mean squared residual. The normal equations are solved by
// Cholesky; conditioning is benign for the low orders used here.
class SegmentDetrender {
public:
    SegmentDetrender(long scale, int order)
        : scale_(scale), dim_(order + 1), vand_(static_cast<std::size_t>(scale) * static_cast<std::size_t>(dim_)) {
        for (long t = 0; t < scale; ++t) {
            const double u = scale == 1 ? 0.0 : 2.0 * static_cast<double>(t) / static_cast<double>(scale - 1) - 1.0;
            double p = 1.0;
            for (int j = 0; j < dim_; ++j) {
                vand_[static_cast<std::size_t>(t) * dim_ + j] = p;
                p *= u;
            }
        }
        // G = V^T V, factored once per scale
        std::vector<double> gram(static_cast<std::size_t>(dim_) * dim_, 0.0);
        for (long t = 0; t < scale; ++t)
            for (int a = 0; a < dim_; ++a)
                for (int b = 0; b <= a; ++b)
                    gram[static_cast<std::size_t>(a) * dim_ + b] += vrow(t)[a] * vrow(t)[b];
        chol_ = gram;
        for (int a = 0; a < dim_; ++a) {
            for (int b = 0; b <= a; ++b) {
                double s = chol_[static_cast<std::size_t>(a) * dim_ + b];
                for (int k = 0; k < b; ++k)
                    s -= chol_[static_cast<std::size_t>(a) * dim_ + k] * chol_[static_cast<std::size_t>(b) * dim_ + k];
                if (a == b) {
                    if (!(s > 0.0)) throw DegenerateError("ill-conditioned segment fit at scale " + std::to_string(scale));
                    chol_[static_cast<std::size_t>(a) * dim_ + b] = std::sqrt(s);
                } else {
                    chol_[static_cast<std::size_t>(a) * dim_ + b] = s / chol_[static_cast<std::size_t>(b) * dim_ + b];
                }
            }
        }
    }

    double residual_msq(std::span<const double> seg) const {
        std::vector<double> rhs(static_cast<std::size_t>(dim_), 0.0);
        for (long t = 0; t < scale_; ++t)
            for (int j = 0; j < dim_; ++j) rhs[static_cast<std::size_t>(j)] += vrow(t)[j] * seg[static_cast<std::size_t>(t)];
        // forward then backward substitution
        std::vector<double> c(rhs);
        for (int a = 0; a < dim_; ++a) {
            double s = c[static_cast<std::size_t>(a)];
            for (int k = 0; k < a; ++k) s -= chol_[static_cast<std::size_t>(a) * dim_ + k] * c[static_cast<std::size_t>(k)];
            c[static_cast<std::size_t>(a)] = s / chol_[static_cast<std::size_t>(a) * dim_ + a];
        }
        for (int a = dim_ - 1; a >= 0; --a) {
            double s = c[static_cast<std::size_t>(a)];
            for (int k = a + 1; k < dim_; ++k) s -= chol_[static_cast<std::size_t>(k) * dim_ + a] * c[static_cast<std::size_t>(k)];
            c[static_cast<std::size_t>(a)] = s / chol_[static_cast<std::size_t>(a) * dim_ + a];
        }
        double acc = 0.0;
        for (long t = 0; t < scale_; ++t) {
            double fit = 0.0;
            for (int j = 0; j < dim_; ++j) fit += vrow(t)[j] * c[static_cast<std::size_t>(j)];
            const double r = seg[static_cast<std::size_t>(t)] - fit;
            acc += r * r;
        }
        return acc / static_cast<double>(scale_);
    }

private:
    const double* vrow(long t) const { return vand_.data() + static_cast<std::size_t>(t) * dim_; }

    long scale_;
    int dim_;
    std::vector<double> vand_;
    std::vector<double> chol_;
};

std::vector<long> log_spaced_scales(long s_min, long s_max, int count) {
    std::vector<long> out;
    if (count < 2) count = 2;
    const double llo = std::log(static_cast<double>(s_min));
    const double lhi = std::log(static_cast<double>(s_max));
    for (int i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        const long s = std::lround(std::exp(llo + f * (lhi - llo)));
        if (out.empty() || s > out.back()) out.push_back(s);
    }
    return out;
}

}  // namespace

std::vector<MomentResult> segment_moments(std::span<const double> fluct, long scale, const QGrid& grid) {
    grid.check();
    if (scale < 2) throw ValidationError("segment scale must be >= 2");
    if (fluct.size() < 2 * static_cast<std::size_t>(scale))
        throw ValidationError("scale " + std::to_string(scale) + " too large for " + std::to_string(fluct.size()) +
                              " samples (need >= 2 segments)");
    const double eps = 1e-15 * population_variance(fluct);
    return moments_from_f2(bidirectional_f2(fluct, scale), grid, eps, scale);
}

FluctuationMatrix wbfa(const Profile& profile, const WaveletFilter& filter, const QGrid& grid,
                       const ScalePolicy& policy, Boundary boundary, int threads) {
    grid.check();
    const std::size_t n = profile.size();
    if (n < 4 * static_cast<std::size_t>(filter.order))
        throw ValidationError("profile length " + std::to_string(n) + " below 4x filter support");

    const long s_min = policy.s_min > 0 ? policy.s_min : std::max(8L, static_cast<long>(filter.order));
    const long s_max = policy.s_max > 0 ? policy.s_max : static_cast<long>(n) / 4;

    std::vector<int> levels;
    for (int L = 1; (static_cast<std::size_t>(1) << L) <= n; ++L) {
        const long s = level_scale(filter.order, L);
        if (s > s_max || 2 * s > static_cast<long>(n)) break;
        if (s >= s_min) levels.push_back(L);
    }
    if (levels.size() < 4)
        throw ValidationError("wbfa: fewer than 4 usable scales in [" + std::to_string(s_min) + ", " +
                              std::to_string(s_max) + "] for length " + std::to_string(n));

    const FluctuationSet fs = extract_fluctuations(profile, filter, levels.back(), boundary, threads);

    FluctuationMatrix m;
    m.estimator = "wbfa";
    const auto qs = grid.moments();
    m.q = qs;
    m.scales.resize(levels.size());
    m.segment_counts.resize(levels.size());
    m.fq.assign(qs.size() * levels.size(), 0.0);
    m.excluded.assign(qs.size() * levels.size(), 0);

    parallel_for(levels.size(), threads, [&](std::size_t si) {
        const FluctuationLevel& lv = fs.levels[static_cast<std::size_t>(levels[si] - 1)];
        const auto res = segment_moments(lv.fluctuation, lv.scale, grid);
        m.scales[si] = lv.scale;
        m.segment_counts[si] = 2 * (static_cast<long>(n) / lv.scale);
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
            m.fq[qi * levels.size() + si] = res[qi].value;
            m.excluded[qi * levels.size() + si] = res[qi].excluded;
        }
    });

    check_matrix(m);
    flag_unreliable(m);
    return m;
}

FluctuationMatrix mfdfa(const Profile& profile, int poly_order, const QGrid& grid, const ScalePolicy& policy,
                        int threads) {
    grid.check();
    if (poly_order < 1) throw ValidationError("mfdfa polynomial order must be >= 1");
    const long n = static_cast<long>(profile.size());

    const long s_min = std::max(policy.s_min > 0 ? policy.s_min : 8L, static_cast<long>(poly_order) + 2L);
    const long s_max = policy.s_max > 0 ? policy.s_max : n / 4;
    if (s_max < s_min) throw ValidationError("mfdfa: empty scale range");

    std::vector<long> scales = log_spaced_scales(s_min, s_max, policy.scale_count);
    scales.erase(std::remove_if(scales.begin(), scales.end(), [n](long s) { return 2 * s > n; }), scales.end());
    if (scales.size() < 4)
        throw ValidationError("mfdfa: fewer than 4 usable scales in [" + std::to_string(s_min) + ", " +
                              std::to_string(s_max) + "] for length " + std::to_string(n));

    FluctuationMatrix m;
    m.estimator = "mfdfa";
    const auto qs = grid.moments();
    m.q = qs;
    m.scales = scales;
    m.segment_counts.resize(scales.size());
    m.fq.assign(qs.size() * scales.size(), 0.0);
    m.excluded.assign(qs.size() * scales.size(), 0);

    const double eps = 1e-15 * population_variance(profile.values);
    const auto& y = profile.values;

    parallel_for(scales.size(), threads, [&](std::size_t si) {
        const long s = scales[si];
        const long seg_count = n / s;
        const SegmentDetrender detrender(s, poly_order);
        std::vector<double> f2;
        f2.reserve(static_cast<std::size_t>(2 * seg_count));
        for (long b = 0; b < seg_count; ++b)
            f2.push_back(detrender.residual_msq(std::span<const double>(y).subspan(
                static_cast<std::size_t>(b * s), static_cast<std::size_t>(s))));
        for (long b = 0; b < seg_count; ++b)
            f2.push_back(detrender.residual_msq(std::span<const double>(y).subspan(
                static_cast<std::size_t>(n - (b + 1) * s), static_cast<std::size_t>(s))));
        const auto res = moments_from_f2(f2, grid, eps, s);
        m.segment_counts[si] = 2 * seg_count;
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
            m.fq[qi * scales.size() + si] = res[qi].value;
            m.excluded[qi * scales.size() + si] = res[qi].excluded;
        }
    });

    check_matrix(m);
    flag_unreliable(m);
    return m;
}

const HqFit* ScalingResult::find(double q) const {
    for (const auto& f : hq)
        if (std::abs(f.q - q) < 1e-9) return &f;
    return nullptr;
}

ScalingResult fit_scaling(const FluctuationMatrix& matrix, std::optional<std::pair<long, long>> fit_range) {
    std::vector<std::size_t> sel;
    for (std::size_t si = 0; si < matrix.scale_count(); ++si) {
        const long s = matrix.scales[si];
        if (!fit_range || (s >= fit_range->first && s <= fit_range->second)) sel.push_back(si);
    }
    if (sel.size() < 4)
        throw ValidationError("fit_scaling: fewer than 4 scales inside the fit range");

    ScalingResult out;
    out.fit_s_min = matrix.scales[sel.front()];
    out.fit_s_max = matrix.scales[sel.back()];

    std::vector<double> lx(sel.size());
    for (std::size_t i = 0; i < sel.size(); ++i) lx[i] = std::log(static_cast<double>(matrix.scales[sel[i]]));
    const double n = static_cast<double>(sel.size());
    double mx = 0.0;
    for (double v : lx) mx += v;
    mx /= n;
    double sxx = 0.0;
    for (double v : lx) sxx += (v - mx) * (v - mx);

    out.hq.resize(matrix.q_count());
    for (std::size_t qi = 0; qi < matrix.q_count(); ++qi) {
        std::vector<double> ly(sel.size());
        for (std::size_t i = 0; i < sel.size(); ++i) {
            const double f = matrix.at(qi, sel[i]);
            if (!std::isfinite(f) || f <= 0.0)
                throw DegenerateError("fit_scaling: non-positive F at q = " + std::to_string(matrix.q[qi]));
            ly[i] = std::log(f);
        }
        double my = 0.0;
        for (double v : ly) my += v;
        my /= n;
        double sxy = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < sel.size(); ++i) {
            sxy += (lx[i] - mx) * (ly[i] - my);
            syy += (ly[i] - my) * (ly[i] - my);
        }
        const double slope = sxy / sxx;
        const double intercept = my - slope * mx;
        double sse = 0.0;
        for (std::size_t i = 0; i < sel.size(); ++i) {
            const double r = ly[i] - (intercept + slope * lx[i]);
            sse += r * r;
        }
        HqFit& fit = out.hq[qi];
        fit.q = matrix.q[qi];
        fit.exponent = slope;
        fit.stderr_value = std::sqrt(sse / (n - 2.0) / sxx);
        fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    }

    double lo = out.hq.front().exponent, hi = out.hq.front().exponent;
    for (const auto& f : out.hq) {
        lo = std::min(lo, f.exponent);
        hi = std::max(hi, f.exponent);
    }
    out.multifractal_width = hi - lo;

    const HqFit* h2 = out.find(2.0);
    out.hurst = h2 ? h2->exponent : std::numeric_limits<double>::quiet_NaN();
    out.hurst_in_range = h2 && h2->exponent > 0.0 && h2->exponent < 1.0;
    return out;
}

}  // namespace fluctana
