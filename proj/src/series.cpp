#include "fluctana/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fluctana/errors.hpp"
#include "fluctana/rng.hpp"
#include "fluctana/stats.hpp"

namespace fluctana {

const char* to_string(Normalization n) {
    switch (n) {
        case Normalization::series_std: return "series-std";
        case Normalization::return_std: return "return-std";
        case Normalization::none: return "none";
    }
    return "?";
}

Normalization normalization_from_string(const std::string& s) {
    if (s == "series-std") return Normalization::series_std;
    if (s == "return-std") return Normalization::return_std;
    if (s == "none") return Normalization::none;
    throw ValidationError("unknown normalization '" + s + "' (expected series-std, return-std or none)");
}

void validate(const TimeSeries& series, bool require_positive) {
    if (series.size() < 2) throw ValidationError("time series needs at least 2 samples, got " + std::to_string(series.size()));
    if (!series.labels.empty() && series.labels.size() != series.values.size())
        throw ValidationError("label count does not match value count");
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        const double v = series.values[i];
        if (!std::isfinite(v)) throw DataError("non-finite value at index " + std::to_string(i));
        if (require_positive && v <= 0.0)
            throw DataError("non-positive price " + std::to_string(v) + " at index " + std::to_string(i));
    }
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        } else if (c == ',' && !quoted) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& f : out) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ' || f.back() == '\t')) f.pop_back();
        std::size_t b = 0;
        while (b < f.size() && (f[b] == ' ' || f[b] == '\t')) ++b;
        f.erase(0, b);
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool parse_index(const std::string& s, std::size_t& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

TimeSeries load_csv(const std::string& path, const CsvOptions& opts) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::size_t value_idx = 0;
    std::size_t label_idx = 0;
    const bool by_index = parse_index(opts.column, value_idx);
    bool want_labels = !opts.label_column.empty();
    bool label_by_index = want_labels && parse_index(opts.label_column, label_idx);

    TimeSeries out;
    out.name = path;

    std::string line;
    std::size_t row = 0;
    bool header_done = false;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_row(line);

        if (!header_done) {
            header_done = true;
            if (!by_index || (want_labels && !label_by_index)) {
                // named-column mode: the first row must be a header
                auto find = [&](const std::string& name) {
                    auto it = std::find(fields.begin(), fields.end(), name);
                    if (it == fields.end())
                        throw DataError("column '" + name + "' not found in header of '" + path + "'");
                    return static_cast<std::size_t>(it - fields.begin());
                };
                if (!by_index) value_idx = find(opts.column);
                if (want_labels && !label_by_index) label_idx = find(opts.label_column);
                continue;  // consume header row
            }
            // index mode: skip the first row only if the target cell is non-numeric
            double probe;
            if (value_idx < fields.size() && parse_double(fields[value_idx], probe)) {
                // falls through: first row is data
            } else {
                continue;
            }
        }

        if (value_idx >= fields.size()) {
            if (opts.strict) throw DataError("row " + std::to_string(row) + ": missing column " + std::to_string(value_idx));
            continue;
        }
        double v;
        if (!parse_double(fields[value_idx], v)) {
            if (opts.strict)
                throw DataError("row " + std::to_string(row) + ": cannot parse '" + fields[value_idx] + "' as a number");
            continue;
        }
        out.values.push_back(v);
        if (want_labels) out.labels.push_back(label_idx < fields.size() ? fields[label_idx] : "");
    }

    if (out.values.size() < 2)
        throw DataError("'" + path + "' yields " + std::to_string(out.values.size()) + " usable rows, need at least 2");
    return out;
}

ReturnSeries log_returns(const TimeSeries& series, Normalization norm) {
    validate(series, /*require_positive=*/true);
    const auto& x = series.values;
    std::vector<double> diff(x.size() - 1);
    for (std::size_t t = 0; t + 1 < x.size(); ++t) diff[t] = std::log(x[t + 1]) - std::log(x[t]);

    double sigma = 1.0;
    switch (norm) {
        case Normalization::series_std: sigma = sample_stddev(x); break;
        case Normalization::return_std: sigma = sample_stddev(diff); break;
        case Normalization::none: sigma = 1.0; break;
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw DegenerateError(std::string("zero standard deviation under ") + to_string(norm) +
                              " normalization (constant input)");

    ReturnSeries out;
    out.normalization = norm;
    out.sigma = sigma;
    out.values.resize(diff.size());
    for (std::size_t t = 0; t < diff.size(); ++t) out.values[t] = diff[t] / sigma;
    return out;
}

ReturnSeries shuffle(const ReturnSeries& returns, std::uint64_t seed) {
    ReturnSeries out = returns;
    Rng rng(seed);
    for (std::size_t i = out.values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.bounded(i));
        std::swap(out.values[i - 1], out.values[j]);
    }
    return out;
}

Profile build_profile(const ReturnSeries& returns, bool subtract_mean) {
    if (returns.values.empty()) throw ValidationError("cannot build a profile from empty returns");
    Profile out;
    out.zero_mean = subtract_mean;
    out.values.resize(returns.values.size());
    const double m = subtract_mean ? mean(returns.values) : 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < returns.values.size(); ++i) {
        acc += returns.values[i] - m;
        out.values[i] = acc;
    }
    return out;
}

}  // namespace fluctana
