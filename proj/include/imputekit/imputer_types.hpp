#ifndef IMPUTEKIT_IMPUTER_TYPES_HPP
#define IMPUTEKIT_IMPUTER_TYPES_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "imputekit/errors.hpp"
#include "imputekit/stats.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

struct MeanImputer {};
struct MedianImputer {};
struct MostFrequentImputer {};

struct KnnImputer {
    int k = 5;
};

// rank == 0 selects the rank on a seeded cell holdout (auto mode).
struct LowRankImputer {
    int rank = 0;
    int max_iter = 100;
    double tol = 1e-5;
    double holdout_fraction = 0.2;
    std::uint64_t seed = 0;
    int max_rank_candidates = 10;
};

struct RoundRobinImputer {
    int max_iter = 10;
    double tol = 1e-4;
    double ridge_eps = 1e-8;
};

using ImputerConfig = std::variant<MeanImputer, MedianImputer,
                                   MostFrequentImputer, KnnImputer,
                                   LowRankImputer, RoundRobinImputer>;

struct RankCandidate {
    int rank = 0;
    double holdout_rmse = 0.0;
};

struct ImputerDiagnostics {
    int iterations = 0;
    double final_change = 0.0;
    bool converged = true;
    int selected_rank = 0;                     // 0 when not applicable
    std::vector<RankCandidate> rank_search;    // auto rank selection trace
    std::vector<std::string> fallback_columns; // round-robin mean fallbacks
    // Per-iteration RMSE of the low-rank reconstruction against the observed
    // cells; non-increasing by construction.
    std::vector<double> observed_fit_history;
};

struct FilledCell {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

// A completed table plus the audit trail of what was written where.
// Previously observed cells pass through bit-unchanged.
struct ImputationResult {
    MaskedTable table;
    std::vector<FilledCell> filled;
    ImputerDiagnostics diagnostics;
};

namespace detail {

inline std::vector<FilledCell> hole_list(const MaskedTable& t) {
    std::vector<FilledCell> holes;
    for (std::size_t i = 0; i < t.n_rows; ++i)
        for (std::size_t j = 0; j < t.n_cols; ++j)
            if (!t.observed(i, j)) holes.push_back({i, j, 0.0});
    return holes;
}

inline ImputationResult apply_fills(const MaskedTable& input,
                                    std::vector<FilledCell> fills,
                                    ImputerDiagnostics diag) {
    ImputationResult res;
    res.table = input;
    for (const auto& f : fills) {
        res.table.at(f.row, f.col) = f.value;
        res.table.set_observed(f.row, f.col, true);
    }
    res.filled = std::move(fills);
    res.diagnostics = std::move(diag);
    validate(res.table);
    return res;
}

// Scaling for distance/regression internals: zero-variance columns get
// scale 1 so they contribute nothing instead of failing outright.
inline StandardizationParams lenient_params(const MaskedTable& t) {
    StandardizationParams p;
    p.center.resize(t.n_cols);
    p.scale.resize(t.n_cols);
    for (std::size_t j = 0; j < t.n_cols; ++j) {
        ColumnStats s = column_stats(t, j);
        p.center[j] = s.mean;
        p.scale[j] = s.std > 0.0 ? s.std : 1.0;
    }
    return p;
}

}  // namespace detail

inline void write_filled_cells_csv(const ImputationResult& r,
                                   const std::string& path) {
    std::filesystem::path tmp(path + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out << "row,column,value\n";
        for (const auto& f : r.filled)
            out << f.row << ','
                << detail::quote_field(r.table.column_names[f.col]) << ','
                << format_double(f.value) << '\n';
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move '" + tmp.string() + "': " + ec.message());
}

inline std::string method_name(const ImputerConfig& cfg) {
    struct Visitor {
        std::string operator()(const MeanImputer&) const { return "mean"; }
        std::string operator()(const MedianImputer&) const { return "median"; }
        std::string operator()(const MostFrequentImputer&) const {
            return "most_frequent";
        }
        std::string operator()(const KnnImputer&) const { return "knn"; }
        std::string operator()(const LowRankImputer&) const {
            return "low_rank";
        }
        std::string operator()(const RoundRobinImputer&) const {
            return "regression";
        }
    };
    return std::visit(Visitor{}, cfg);
}

inline void to_json(nlohmann::json& j, const ImputerConfig& cfg) {
    j = nlohmann::json{{"method", method_name(cfg)}};
    if (const auto* knn = std::get_if<KnnImputer>(&cfg)) {
        j["k"] = knn->k;
    } else if (const auto* lr = std::get_if<LowRankImputer>(&cfg)) {
        if (lr->rank == 0)
            j["rank"] = "auto";
        else
            j["rank"] = lr->rank;
        j["max_iter"] = lr->max_iter;
        j["tol"] = lr->tol;
        j["holdout_fraction"] = lr->holdout_fraction;
        j["seed"] = lr->seed;
        j["max_rank_candidates"] = lr->max_rank_candidates;
    } else if (const auto* rr = std::get_if<RoundRobinImputer>(&cfg)) {
        j["max_iter"] = rr->max_iter;
        j["tol"] = rr->tol;
        j["ridge_eps"] = rr->ridge_eps;
    }
}

inline void from_json(const nlohmann::json& j, ImputerConfig& cfg) {
    std::string method = j.at("method").get<std::string>();
    if (method == "mean") {
        cfg = MeanImputer{};
    } else if (method == "median") {
        cfg = MedianImputer{};
    } else if (method == "most_frequent") {
        cfg = MostFrequentImputer{};
    } else if (method == "knn") {
        KnnImputer k;
        k.k = j.value("k", 5);
        cfg = k;
    } else if (method == "low_rank") {
        LowRankImputer lr;
        if (j.contains("rank") && !j["rank"].is_string())
            lr.rank = j["rank"].get<int>();
        lr.max_iter = j.value("max_iter", 100);
        lr.tol = j.value("tol", 1e-5);
        lr.holdout_fraction = j.value("holdout_fraction", 0.2);
        lr.seed = j.value("seed", std::uint64_t{0});
        lr.max_rank_candidates = j.value("max_rank_candidates", 10);
        cfg = lr;
    } else if (method == "regression" || method == "iterative_regression") {
        RoundRobinImputer rr;
        rr.max_iter = j.value("max_iter", 10);
        rr.tol = j.value("tol", 1e-4);
        rr.ridge_eps = j.value("ridge_eps", 1e-8);
        cfg = rr;
    } else {
        throw ConfigError("unknown imputation method '" + method + "'");
    }
}

inline void to_json(nlohmann::json& j, const ImputerDiagnostics& d) {
    j = nlohmann::json{{"iterations", d.iterations},
                       {"final_change", d.final_change},
                       {"converged", d.converged}};
    if (d.selected_rank > 0) j["selected_rank"] = d.selected_rank;
    if (!d.rank_search.empty()) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& c : d.rank_search)
            arr.push_back({{"rank", c.rank}, {"holdout_rmse", c.holdout_rmse}});
        j["rank_search"] = arr;
    }
    if (!d.fallback_columns.empty()) j["fallback_columns"] = d.fallback_columns;
}

}  // namespace imputekit

#endif  // IMPUTEKIT_IMPUTER_TYPES_HPP
