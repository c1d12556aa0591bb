#ifndef IMPUTEKIT_MISSINGNESS_HPP
#define IMPUTEKIT_MISSINGNESS_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "imputekit/csv.hpp"
#include "imputekit/errors.hpp"
#include "imputekit/rng.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

enum class Mechanism { Mcar, Mar, Mnar };

inline std::string to_string(Mechanism m) {
    switch (m) {
        case Mechanism::Mcar: return "mcar";
        case Mechanism::Mar: return "mar";
        case Mechanism::Mnar: return "mnar";
    }
    return "mcar";
}

inline Mechanism mechanism_from_string(const std::string& s) {
    if (s == "mcar") return Mechanism::Mcar;
    if (s == "mar") return Mechanism::Mar;
    if (s == "mnar") return Mechanism::Mnar;
    throw ConfigError("unknown mechanism '" + s + "'");
}

// Row predicate over one conditioning covariate.
struct Condition {
    enum class Kind { Equals, GreaterThan };
    Kind kind = Kind::Equals;
    double value = 0.0;

    bool holds(double x) const {
        return kind == Kind::Equals ? x == value : x > value;
    }
};

// Rows failing the condition lose each target cell with probability
// base_rate; rows satisfying it with min(amplification * base_rate, 1).
// MCAR may puncture several columns; MAR and MNAR puncture exactly one.
struct MissingnessSpec {
    Mechanism mechanism = Mechanism::Mcar;
    std::vector<std::string> target_columns;
    double base_rate = 0.0;
    std::optional<Condition> condition;
    // MAR: an observed column of the table. MNAR: the label of an external
    // covariate vector that must NOT be a column of the table.
    std::string condition_source;
    double amplification = 2.0;
    std::uint64_t seed = 0;
};

inline double deletion_probability(const MissingnessSpec& spec,
                                   bool row_condition) {
    if (spec.mechanism == Mechanism::Mcar || !row_condition)
        return spec.base_rate;
    return std::min(spec.amplification * spec.base_rate, 1.0);
}

// The (row, column, true value) triples removed by a simulation; the oracle
// against which imputations are scored.
struct GroundTruth {
    struct Entry {
        std::size_t row;
        std::string column;
        double value;
    };
    std::vector<Entry> entries;
    MissingnessSpec source_spec;
};

inline void validate_spec(const MaskedTable& t, const MissingnessSpec& spec,
                          const std::vector<double>* covariate) {
    if (spec.base_rate < 0.0 || spec.base_rate > 1.0)
        throw ConfigError("base_rate must lie in [0, 1]");
    if (spec.amplification < 0.0)
        throw ConfigError("amplification must be >= 0");
    if (spec.target_columns.empty())
        throw ConfigError("target_columns must not be empty");
    for (const auto& c : spec.target_columns)
        if (!t.has_column(c))
            throw ConfigError("target column '" + c + "' not in table");
    switch (spec.mechanism) {
        case Mechanism::Mcar:
            if (spec.condition)
                throw ConfigError("mcar carries no condition");
            break;
        case Mechanism::Mar: {
            if (spec.target_columns.size() != 1)
                throw ConfigError("mar targets exactly one column");
            if (!spec.condition)
                throw ConfigError("mar requires a condition");
            if (!t.has_column(spec.condition_source))
                throw ConfigError("mar condition_source '" +
                                  spec.condition_source +
                                  "' is not a column of the table");
            std::size_t j = t.column_index(spec.condition_source);
            if (t.n_observed(j) != t.n_rows)
                throw ConfigError("mar condition_source '" +
                                  spec.condition_source +
                                  "' must be fully observed");
            break;
        }
        case Mechanism::Mnar:
            if (spec.target_columns.size() != 1)
                throw ConfigError("mnar targets exactly one column");
            if (!spec.condition)
                throw ConfigError("mnar requires a condition");
            if (t.has_column(spec.condition_source))
                throw ConfigError("mnar condition_source '" +
                                  spec.condition_source +
                                  "' must be external, not a table column");
            if (!covariate)
                throw ConfigError("mnar requires an external covariate vector");
            if (covariate->size() != t.n_rows)
                throw ConfigError("mnar covariate has length " +
                                  std::to_string(covariate->size()) +
                                  ", expected " + std::to_string(t.n_rows));
            break;
    }
}

// Punctures the target cells of a fully observed (in the targets) table.
// One uniform is drawn per target cell, counter-indexed in row-major order,
// so the result is bit-reproducible under any evaluation schedule.
inline std::pair<MaskedTable, GroundTruth> apply_missingness(
    const MaskedTable& t, const MissingnessSpec& spec,
    const std::vector<double>* covariate = nullptr) {
    validate_spec(t, spec, covariate);

    std::vector<std::size_t> targets;
    for (const auto& name : spec.target_columns)
        targets.push_back(t.column_index(name));
    std::sort(targets.begin(), targets.end());
    for (std::size_t j : targets)
        if (t.n_observed(j) != t.n_rows)
            throw ConfigError("target column '" + t.column_names[j] +
                              "' already has missing cells");

    const std::vector<double>* cond_values = nullptr;
    std::vector<double> mar_column;
    if (spec.mechanism == Mechanism::Mar) {
        std::size_t j = t.column_index(spec.condition_source);
        mar_column.resize(t.n_rows);
        for (std::size_t i = 0; i < t.n_rows; ++i) mar_column[i] = t.at(i, j);
        cond_values = &mar_column;
    } else if (spec.mechanism == Mechanism::Mnar) {
        cond_values = covariate;
    }

    MaskedTable out = t;
    GroundTruth gt;
    gt.source_spec = spec;
    CounterRng rng(spec.seed);
    std::uint64_t counter = 0;
    for (std::size_t i = 0; i < t.n_rows; ++i) {
        bool cond = cond_values && spec.condition &&
                    spec.condition->holds((*cond_values)[i]);
        double p = deletion_probability(spec, cond);
        for (std::size_t j : targets) {
            if (rng.uniform(counter++) < p) {
                out.set_observed(i, j, false);
                gt.entries.push_back({i, t.column_names[j], t.at(i, j)});
            }
        }
    }
    return {std::move(out), std::move(gt)};
}

// Restores every deleted cell; inverse of apply_missingness for audit.
inline MaskedTable reinsert(const MaskedTable& punctured,
                            const GroundTruth& gt) {
    MaskedTable out = punctured;
    for (const auto& e : gt.entries) {
        std::size_t j = out.column_index(e.column);
        out.at(e.row, j) = e.value;
        out.set_observed(e.row, j, true);
    }
    return out;
}

inline void write_ground_truth_csv(const GroundTruth& gt,
                                   const std::string& path) {
    std::filesystem::path tmp(path + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out << "row,column,value\n";
        for (const auto& e : gt.entries)
            out << e.row << ',' << detail::quote_field(e.column) << ','
                << format_double(e.value) << '\n';
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp.string() + "': " + ec.message());
}

inline void to_json(nlohmann::json& j, const MissingnessSpec& spec) {
    j = nlohmann::json{{"mechanism", to_string(spec.mechanism)},
                       {"target_columns", spec.target_columns},
                       {"base_rate", spec.base_rate},
                       {"amplification", spec.amplification},
                       {"seed", spec.seed}};
    if (spec.condition) {
        j["condition"] = {
            {"kind", spec.condition->kind == Condition::Kind::Equals
                         ? "equals"
                         : "greater_than"},
            {"value", spec.condition->value}};
        j["condition_source"] = spec.condition_source;
    }
}

inline void from_json(const nlohmann::json& j, MissingnessSpec& spec) {
    spec = MissingnessSpec{};
    spec.mechanism = mechanism_from_string(j.at("mechanism").get<std::string>());
    spec.target_columns = j.at("target_columns").get<std::vector<std::string>>();
    spec.base_rate = j.at("base_rate").get<double>();
    spec.amplification = j.value("amplification", 2.0);
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("condition")) {
        Condition c;
        std::string kind = j["condition"].at("kind").get<std::string>();
        if (kind == "equals")
            c.kind = Condition::Kind::Equals;
        else if (kind == "greater_than")
            c.kind = Condition::Kind::GreaterThan;
        else
            throw ConfigError("unknown condition kind '" + kind + "'");
        c.value = j["condition"].at("value").get<double>();
        spec.condition = c;
        spec.condition_source = j.value("condition_source", "");
    }
}

}  // namespace imputekit

#endif  // IMPUTEKIT_MISSINGNESS_HPP
