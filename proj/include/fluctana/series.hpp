#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fluctana {

// Divisor applied to raw log differences.
enum class Normalization {
    series_std,  // sample std of the raw series x(t)
    return_std,  // sample std of the log differences themselves
    none,        // divisor 1
};

const char* to_string(Normalization n);
Normalization normalization_from_string(const std::string& s);

struct TimeSeries {
    std::vector<double> values;
    std::vector<std::string> labels;  // empty, or one label per value
    std::string name;

    std::size_t size() const { return values.size(); }
};

// Throws ValidationError/DataError on length < 2, non-finite values, label
// count mismatch, or (when require_positive) non-positive values.
void validate(const TimeSeries& series, bool require_positive = false);

struct ReturnSeries {
    std::vector<double> values;
    Normalization normalization = Normalization::series_std;
    double sigma = 1.0;  // the divisor actually applied

    std::size_t size() const { return values.size(); }
};

struct Profile {
    std::vector<double> values;
    bool zero_mean = false;  // return mean subtracted before accumulation

    std::size_t size() const { return values.size(); }
};

struct CsvOptions {
    std::string column = "close";  // header name, or 0-based index if numeric
    std::string label_column;      // optional
    bool strict = true;            // strict: malformed row is an error; lenient: row skipped
};

// Reads one numeric column (plus an optional label column) from a CSV file.
// Header row is required when columns are addressed by name. UTF-8, '.'
// decimal separator, rows kept in file order.
TimeSeries load_csv(const std::string& path, const CsvOptions& opts = {});

// Normalized log returns: values[t] = (ln x(t+1) - ln x(t)) / sigma.
ReturnSeries log_returns(const TimeSeries& series, Normalization norm);

// Seeded Fisher-Yates permutation; the value multiset is preserved exactly.
ReturnSeries shuffle(const ReturnSeries& returns, std::uint64_t seed);

// Cumulative sum of (optionally mean-subtracted) returns.
Profile build_profile(const ReturnSeries& returns, bool subtract_mean);

}  // namespace fluctana
