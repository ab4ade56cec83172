#include "isac/bench/table.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace isac::bench {

namespace {

bool same_number(double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
}

std::string quote_csv(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

// RFC-4180 record splitter; handles quoted fields with embedded separators.
std::vector<std::vector<std::string>> split_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        any = true;
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            fields.push_back(cur);
            records.push_back(fields);
            fields.clear();
            cur.clear();
            any = false;
        } else {
            cur += c;
        }
    }
    if (quoted)
        throw std::invalid_argument("csv: unterminated quoted field");
    if (any) {
        fields.push_back(cur);
        records.push_back(fields);
    }
    return records;
}

void check_values(const ResultTable& t) {
    if (t.rows.empty())
        throw std::invalid_argument("emit: empty result table");
    for (const auto& r : t.rows)
        if (std::isnan(r.value))
            throw std::invalid_argument("emit: NaN value for metric " + r.metric);
}

nlohmann::json number_json(double v) {
    if (std::isnan(v))
        return nullptr;
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return parse_number(format_number(v));
}

double json_number(const nlohmann::json& j) {
    if (j.is_null())
        return std::numeric_limits<double>::quiet_NaN();
    if (j.is_string())
        return parse_number(j.get<std::string>());
    return j.get<double>();
}

}  // namespace

bool ResultRow::operator==(const ResultRow& o) const {
    return experiment == o.experiment && point == o.point && metric == o.metric &&
           same_number(value, o.value) && same_number(std_error, o.std_error) && seed == o.seed &&
           same_number(wall_ms, o.wall_ms);
}

bool ResultTable::operator==(const ResultTable& o) const {
    return with_timing == o.with_timing && rows == o.rows;
}

Format parse_format(const std::string& s) {
    if (s == "csv")
        return Format::Csv;
    if (s == "json")
        return Format::Json;
    throw std::invalid_argument("unknown format: " + s);
}

std::string format_number(double v) {
    if (std::isnan(v))
        return "";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double parse_number(const std::string& s) {
    if (s.empty())
        return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw std::invalid_argument("bad number: " + s);
    return v;
}

std::string to_csv(const ResultTable& t) {
    std::ostringstream os;
    os << "experiment,point,metric,value,std_error,seed";
    if (t.with_timing)
        os << ",wall_ms";
    os << "\r\n";
    for (const auto& r : t.rows) {
        os << quote_csv(r.experiment) << ',' << quote_csv(r.point) << ',' << quote_csv(r.metric) << ','
           << format_number(r.value) << ',' << format_number(r.std_error) << ',' << r.seed;
        if (t.with_timing)
            os << ',' << format_number(r.wall_ms);
        os << "\r\n";
    }
    return os.str();
}

std::string to_json(const ResultTable& t) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json o;
        o["experiment"] = r.experiment;
        o["point"] = r.point;
        o["metric"] = r.metric;
        o["value"] = number_json(r.value);
        o["std_error"] = number_json(r.std_error);
        o["seed"] = r.seed;
        if (t.with_timing)
            o["wall_ms"] = number_json(r.wall_ms);
        arr.push_back(std::move(o));
    }
    return arr.dump(2) + "\n";
}

ResultTable parse_csv(const std::string& text) {
    const auto recs = split_csv(text);
    if (recs.empty())
        throw std::invalid_argument("csv: missing header");
    ResultTable t;
    const auto& head = recs[0];
    if (head.size() == 7 && head[6] == "wall_ms")
        t.with_timing = true;
    else if (head.size() != 6)
        throw std::invalid_argument("csv: unexpected header");
    for (std::size_t i = 1; i < recs.size(); ++i) {
        const auto& f = recs[i];
        if (f.size() != head.size())
            throw std::invalid_argument("csv: wrong field count on record " + std::to_string(i));
        ResultRow r;
        r.experiment = f[0];
        r.point = f[1];
        r.metric = f[2];
        r.value = parse_number(f[3]);
        r.std_error = parse_number(f[4]);
        r.seed = std::stoull(f[5]);
        r.wall_ms = t.with_timing ? parse_number(f[6]) : std::numeric_limits<double>::quiet_NaN();
        t.rows.push_back(std::move(r));
    }
    return t;
}

ResultTable parse_json(const std::string& text) {
    const nlohmann::json arr = nlohmann::json::parse(text);
    ResultTable t;
    for (const auto& o : arr) {
        ResultRow r;
        r.experiment = o.at("experiment").get<std::string>();
        r.point = o.at("point").get<std::string>();
        r.metric = o.at("metric").get<std::string>();
        r.value = json_number(o.at("value"));
        r.std_error = json_number(o.at("std_error"));
        r.seed = o.at("seed").get<std::uint64_t>();
        if (o.contains("wall_ms")) {
            t.with_timing = true;
            r.wall_ms = json_number(o.at("wall_ms"));
        } else {
            r.wall_ms = std::numeric_limits<double>::quiet_NaN();
        }
        t.rows.push_back(std::move(r));
    }
    return t;
}

void emit(const ResultTable& t, Format f, const std::string& path) {
    check_values(t);
    const std::string body = f == Format::Csv ? to_csv(t) : to_json(t);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    out << body;
    out.flush();
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

}  // namespace isac::bench
