#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace isac::bench {

/// One output record. std_error and wall_ms are NaN when not applicable.
struct ResultRow {
    std::string experiment;
    std::string point;  // "key=value;key=value"
    std::string metric;
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t seed = 0;
    double wall_ms = 0.0;

    bool operator==(const ResultRow& o) const;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    bool with_timing = false;  // emit the wall_ms column

    bool operator==(const ResultTable& o) const;
};

enum class Format { Csv, Json };

Format parse_format(const std::string& s);

/// %.12g, with "inf" / "-inf" for infinities and "" for NaN.
std::string format_number(double v);
double parse_number(const std::string& s);

std::string to_csv(const ResultTable& t);
std::string to_json(const ResultTable& t);
ResultTable parse_csv(const std::string& text);
ResultTable parse_json(const std::string& text);

/// Writes the table. Throws std::invalid_argument on an empty table or a
/// non-finite value other than +-inf, std::runtime_error on I/O failure.
void emit(const ResultTable& t, Format f, const std::string& path);

}  // namespace isac::bench
