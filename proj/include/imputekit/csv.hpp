#ifndef IMPUTEKIT_CSV_HPP
#define IMPUTEKIT_CSV_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "imputekit/errors.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

// RFC-4180 field splitting: quoted fields, doubled quotes, embedded commas
// and newlines, CRLF line endings.
inline std::vector<std::vector<std::string>> parse_csv_records(
    const std::string& text, const std::string& path) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool any_char = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_field = [&]() {
        record.push_back(field);
        field.clear();
    };
    auto end_record = [&]() {
        end_field();
        records.push_back(record);
        record.clear();
        any_char = false;
    };
    while (i < n) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            in_quotes = true;
            any_char = true;
        } else if (c == ',') {
            end_field();
            any_char = true;
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            end_record();
        } else {
            field += c;
            any_char = true;
        }
        ++i;
    }
    if (in_quotes)
        throw IoError(path + ": unterminated quoted field");
    if (any_char || !field.empty() || !record.empty()) end_record();
    return records;
}

inline std::optional<double> parse_number(const std::string& raw) {
    std::size_t b = raw.find_first_not_of(" \t");
    if (b == std::string::npos) return std::nullopt;
    std::size_t e = raw.find_last_not_of(" \t") + 1;
    double v = 0.0;
    auto res = std::from_chars(raw.data() + b, raw.data() + e, v);
    if (res.ec != std::errc() || res.ptr != raw.data() + e)
        return std::nullopt;
    return v;
}

inline bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

inline std::string quote_field(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace detail

// Optional sidecar schema: {"columns": {name: {"kind": "continuous" |
// "categorical", "codes": [..]}}}. Columns absent from the schema keep
// their inferred kind.
struct TableSchema {
    struct Column {
        ColumnKind kind = ColumnKind::Continuous;
        std::vector<double> codes;
    };
    std::vector<std::pair<std::string, Column>> columns;
};

inline TableSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open schema file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("schema '" + path + "': " + e.what());
    }
    if (!j.contains("columns") || !j["columns"].is_object())
        throw ConfigError("schema '" + path + "' must have a 'columns' object");
    TableSchema schema;
    for (auto& [name, spec] : j["columns"].items()) {
        TableSchema::Column col;
        std::string kind = spec.value("kind", "continuous");
        if (kind == "continuous") {
            col.kind = ColumnKind::Continuous;
        } else if (kind == "categorical") {
            col.kind = ColumnKind::Categorical;
            if (spec.contains("codes"))
                col.codes = spec["codes"].get<std::vector<double>>();
            std::sort(col.codes.begin(), col.codes.end());
        } else {
            throw ConfigError("schema '" + path + "': unknown kind '" + kind +
                              "' for column '" + name + "'");
        }
        schema.columns.emplace_back(name, std::move(col));
    }
    return schema;
}

// Integer-valued columns with at most this many distinct observed values
// are inferred categorical unless the schema says otherwise.
inline constexpr std::size_t kCategoricalInferenceMaxCodes = 10;

inline MaskedTable load_csv(const std::string& path,
                            const std::string& missing_token = "",
                            const TableSchema* schema = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    auto records = detail::parse_csv_records(buf.str(), path);
    if (records.empty()) throw IoError(path + ": no header row");

    const auto& header = records[0];
    MaskedTable t = make_table(header, records.size() - 1);
    {
        std::set<std::string> seen;
        for (const auto& name : header) {
            if (name.empty())
                throw ConfigError(path + ": empty column name in header");
            if (!seen.insert(name).second)
                throw ConfigError(path + ": duplicate header '" + name + "'");
        }
    }

    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& row = records[r];
        if (row.size() != t.n_cols)
            throw IoError(path + ": row " + std::to_string(r) + " has " +
                          std::to_string(row.size()) + " fields, expected " +
                          std::to_string(t.n_cols));
        for (std::size_t j = 0; j < t.n_cols; ++j) {
            if (row[j] == missing_token) {
                t.set_observed(r - 1, j, false);
                continue;
            }
            auto v = detail::parse_number(row[j]);
            if (!v || !std::isfinite(*v))
                throw IoError(path + ": cell at row " + std::to_string(r) +
                              ", column '" + header[j] +
                              "' is not a finite number: '" + row[j] + "'");
            t.at(r - 1, j) = *v;
        }
    }

    // Kind inference, then schema overrides.
    for (std::size_t j = 0; j < t.n_cols; ++j) {
        std::set<double> distinct;
        bool integral = true;
        for (std::size_t i = 0; i < t.n_rows && integral; ++i) {
            if (!t.observed(i, j)) continue;
            double v = t.at(i, j);
            if (v != std::floor(v)) integral = false;
            distinct.insert(v);
            if (distinct.size() > kCategoricalInferenceMaxCodes)
                integral = false;
        }
        if (integral && !distinct.empty()) {
            t.column_kinds[j] = ColumnKind::Categorical;
            t.code_sets[j].assign(distinct.begin(), distinct.end());
        }
    }
    if (schema) {
        for (const auto& [name, col] : schema->columns) {
            if (!t.has_column(name))
                throw ConfigError("schema names column '" + name +
                                  "' absent from '" + path + "'");
            std::size_t j = t.column_index(name);
            t.column_kinds[j] = col.kind;
            t.code_sets[j] = col.codes;
            if (col.kind == ColumnKind::Continuous) t.code_sets[j].clear();
        }
        // Declared code sets are enforced on loaded data only; imputation
        // may later fill off-code values by design.
        for (std::size_t j = 0; j < t.n_cols; ++j) {
            if (t.code_sets[j].empty()) continue;
            for (std::size_t i = 0; i < t.n_rows; ++i) {
                if (!t.observed(i, j)) continue;
                if (!std::binary_search(t.code_sets[j].begin(),
                                        t.code_sets[j].end(), t.at(i, j)))
                    throw ConfigError(path + ": value " +
                                      format_double(t.at(i, j)) + " at row " +
                                      std::to_string(i + 1) + " not in code set of '" +
                                      t.column_names[j] + "'");
            }
        }
    }
    validate(t);
    return t;
}

// Atomic write: stream into <path>.tmp then rename over the target.
inline void write_csv(const MaskedTable& t, const std::string& path,
                      const std::string& missing_token = "") {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        for (std::size_t j = 0; j < t.n_cols; ++j) {
            if (j) out << ',';
            out << detail::quote_field(t.column_names[j]);
        }
        out << '\n';
        for (std::size_t i = 0; i < t.n_rows; ++i) {
            for (std::size_t j = 0; j < t.n_cols; ++j) {
                if (j) out << ',';
                if (t.observed(i, j))
                    out << format_double(t.at(i, j));
                else
                    out << detail::quote_field(missing_token);
            }
            out << '\n';
        }
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec)
        throw IoError("cannot move '" + tmp.string() + "' to '" + path +
                      "': " + ec.message());
}

}  // namespace imputekit

#endif  // IMPUTEKIT_CSV_HPP
