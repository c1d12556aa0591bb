#ifndef IMPUTEKIT_TABLE_HPP
#define IMPUTEKIT_TABLE_HPP

#include <cmath>
#include <cstdint>
#include <cstddef>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "imputekit/errors.hpp"

namespace imputekit {

enum class ColumnKind { Continuous, Categorical };

// Column-named numeric matrix plus a missingness mask. Row-major doubles;
// mask true = observed. Cells with mask false are never read as data.
struct MaskedTable {
    std::vector<std::string> column_names;
    std::vector<ColumnKind> column_kinds;
    // Declared code set per column; empty for continuous columns. Imputed
    // values are left continuous, so codes are enforced only at load time.
    std::vector<std::vector<double>> code_sets;
    std::vector<double> values;   // n_rows * n_cols, row-major
    std::vector<std::uint8_t> mask;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;

    double at(std::size_t row, std::size_t col) const {
        return values[row * n_cols + col];
    }
    double& at(std::size_t row, std::size_t col) {
        return values[row * n_cols + col];
    }
    bool observed(std::size_t row, std::size_t col) const {
        return mask[row * n_cols + col] != 0;
    }
    void set_observed(std::size_t row, std::size_t col, bool obs) {
        mask[row * n_cols + col] = obs ? 1 : 0;
    }

    std::size_t column_index(const std::string& name) const {
        for (std::size_t j = 0; j < column_names.size(); ++j)
            if (column_names[j] == name) return j;
        throw ConfigError("unknown column '" + name + "'");
    }

    bool has_column(const std::string& name) const {
        for (const auto& n : column_names)
            if (n == name) return true;
        return false;
    }

    std::vector<double> observed_values(std::size_t col) const {
        std::vector<double> out;
        out.reserve(n_rows);
        for (std::size_t i = 0; i < n_rows; ++i)
            if (observed(i, col)) out.push_back(at(i, col));
        return out;
    }

    std::size_t n_observed(std::size_t col) const {
        std::size_t n = 0;
        for (std::size_t i = 0; i < n_rows; ++i)
            if (observed(i, col)) ++n;
        return n;
    }

    std::size_t n_missing_total() const {
        std::size_t n = 0;
        for (auto m : mask)
            if (!m) ++n;
        return n;
    }
};

inline MaskedTable make_table(std::vector<std::string> names,
                              std::size_t n_rows) {
    MaskedTable t;
    t.n_rows = n_rows;
    t.n_cols = names.size();
    t.column_names = std::move(names);
    t.column_kinds.assign(t.n_cols, ColumnKind::Continuous);
    t.code_sets.resize(t.n_cols);
    t.values.assign(t.n_rows * t.n_cols, 0.0);
    t.mask.assign(t.n_rows * t.n_cols, 1);
    return t;
}

// Shared shape/finiteness validator; every operation that builds a table
// runs its result through this.
inline void validate(const MaskedTable& t) {
    if (t.column_names.size() != t.n_cols ||
        t.column_kinds.size() != t.n_cols || t.code_sets.size() != t.n_cols)
        throw ConfigError("table metadata does not match n_cols");
    if (t.values.size() != t.n_rows * t.n_cols ||
        t.mask.size() != t.n_rows * t.n_cols)
        throw ConfigError("mask and values must both be n_rows x n_cols");
    std::unordered_set<std::string> seen;
    for (const auto& name : t.column_names) {
        if (name.empty()) throw ConfigError("empty column name");
        if (!seen.insert(name).second)
            throw ConfigError("duplicate column name '" + name + "'");
    }
    for (std::size_t k = 0; k < t.values.size(); ++k) {
        if (t.mask[k] && !std::isfinite(t.values[k]))
            throw ConfigError("observed cell " + std::to_string(k / t.n_cols) +
                              "," + std::to_string(k % t.n_cols) +
                              " is not finite");
    }
}

// Drops every row containing a masked cell. Returns the filtered table and
// the original indices of the kept rows, so that externally aligned vectors
// (e.g. an unobserved covariate) can be subset the same way.
inline std::pair<MaskedTable, std::vector<std::size_t>> complete_cases(
    const MaskedTable& t) {
    std::vector<std::size_t> keep;
    keep.reserve(t.n_rows);
    for (std::size_t i = 0; i < t.n_rows; ++i) {
        bool full = true;
        for (std::size_t j = 0; j < t.n_cols; ++j)
            if (!t.observed(i, j)) {
                full = false;
                break;
            }
        if (full) keep.push_back(i);
    }
    MaskedTable out = t;
    out.n_rows = keep.size();
    out.values.resize(keep.size() * t.n_cols);
    out.mask.assign(keep.size() * t.n_cols, 1);
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < t.n_cols; ++j)
            out.values[i * t.n_cols + j] = t.at(keep[i], j);
    return {std::move(out), std::move(keep)};
}

}  // namespace imputekit

#endif  // IMPUTEKIT_TABLE_HPP
