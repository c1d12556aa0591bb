#ifndef IMPUTEKIT_LOW_RANK_HPP
#define IMPUTEKIT_LOW_RANK_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "imputekit/imputer_types.hpp"
#include "imputekit/rng.hpp"
#include "imputekit/stats.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

namespace detail {

struct HardImputeOutcome {
    Eigen::MatrixXd filled;  // standardized scale
    ImputerDiagnostics diagnostics;
};

// Hard-impute: alternate a truncated SVD of the filled matrix with
// overwriting the hole positions by the reconstruction. Column means are
// re-estimated from the filled matrix each iteration and modelled
// separately from the rank-r term; the truncated SVD of a column-centered
// matrix stays column-centered, so each step weakly decreases the
// observed-cell fit and exact low-rank matrices are exactly completable.
inline HardImputeOutcome hard_impute(const MaskedTable& t,
                                     const Eigen::MatrixXd& z0, int rank,
                                     int max_iter, double tol) {
    const Eigen::Index n = z0.rows(), p = z0.cols();
    std::vector<std::pair<Eigen::Index, Eigen::Index>> holes;
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < p; ++j)
            if (!t.observed(static_cast<std::size_t>(i),
                            static_cast<std::size_t>(j)))
                holes.emplace_back(i, j);

    HardImputeOutcome out;
    out.filled = z0;
    auto& diag = out.diagnostics;
    if (holes.empty()) return out;

    const double n_obs =
        static_cast<double>(n * p) - static_cast<double>(holes.size());
    Eigen::MatrixXd& Z = out.filled;
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::RowVectorXd mu = Z.colwise().mean();
        Eigen::MatrixXd C = Z.rowwise() - mu;
        Eigen::BDCSVD<Eigen::MatrixXd> svd(
            C, Eigen::ComputeThinU | Eigen::ComputeThinV);
        Eigen::MatrixXd R =
            svd.matrixU().leftCols(rank) *
            svd.singularValues().head(rank).asDiagonal() *
            svd.matrixV().leftCols(rank).transpose();
        R.rowwise() += mu;

        double obs_sq = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < p; ++j)
                if (t.observed(static_cast<std::size_t>(i),
                               static_cast<std::size_t>(j))) {
                    double diff = Z(i, j) - R(i, j);
                    obs_sq += diff * diff;
                }
        diag.observed_fit_history.push_back(std::sqrt(obs_sq / n_obs));

        double delta_sq = 0.0;
        for (auto [i, j] : holes) {
            double diff = R(i, j) - Z(i, j);
            delta_sq += diff * diff;
            Z(i, j) = R(i, j);
        }
        diag.iterations = it;
        diag.final_change =
            std::sqrt(delta_sq / static_cast<double>(holes.size()));
        if (diag.final_change < tol) {
            diag.converged = true;
            return out;
        }
    }
    diag.converged = false;  // hit max_iter; result still returned
    return out;
}

inline Eigen::MatrixXd standardized_matrix(const MaskedTable& t,
                                           const StandardizationParams& p) {
    Eigen::MatrixXd Z(t.n_rows, t.n_cols);
    for (std::size_t i = 0; i < t.n_rows; ++i)
        for (std::size_t j = 0; j < t.n_cols; ++j)
            Z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                t.observed(i, j) ? (t.at(i, j) - p.center[j]) / p.scale[j]
                                 : 0.0;  // column mean after standardization
    return Z;
}

}  // namespace detail

struct RankSelection {
    int selected_rank = 0;
    std::vector<RankCandidate> candidates;
};

// Chooses the truncation rank by masking an extra seeded holdout of observed
// cells in the punctured columns, imputing at every candidate rank, and
// scoring RMSE on the holdout (standardized scale). Ties go to the smaller
// rank; the holdout is disjoint from the real holes.
inline RankSelection select_rank(const MaskedTable& t,
                                 const LowRankImputer& cfg);

inline ImputationResult impute_low_rank(const MaskedTable& t,
                                        const LowRankImputer& cfg) {
    const int max_rank = static_cast<int>(std::min(t.n_rows, t.n_cols));
    if (cfg.rank > max_rank)
        throw ConfigError("low_rank: rank " + std::to_string(cfg.rank) +
                          " exceeds min(n_rows, n_cols) = " +
                          std::to_string(max_rank));
    if (cfg.rank < 0) throw ConfigError("low_rank: rank must be >= 0");
    if (cfg.tol <= 0.0 || cfg.max_iter < 1)
        throw ConfigError("low_rank: tol must be > 0 and max_iter >= 1");

    auto holes = detail::hole_list(t);
    if (holes.empty())
        return detail::apply_fills(t, {}, ImputerDiagnostics{});

    RankSelection selection;
    LowRankImputer run = cfg;
    if (cfg.rank == 0) {
        selection = select_rank(t, cfg);
        run.rank = selection.selected_rank;
    }

    StandardizationParams params = standardization_params(t);
    Eigen::MatrixXd Z0 = detail::standardized_matrix(t, params);
    auto outcome = detail::hard_impute(t, Z0, run.rank, run.max_iter, run.tol);

    for (auto& h : holes)
        h.value = outcome.filled(static_cast<Eigen::Index>(h.row),
                                 static_cast<Eigen::Index>(h.col)) *
                      params.scale[h.col] +
                  params.center[h.col];
    auto diag = std::move(outcome.diagnostics);
    diag.selected_rank = run.rank;
    diag.rank_search = std::move(selection.candidates);
    return detail::apply_fills(t, std::move(holes), std::move(diag));
}

inline RankSelection select_rank(const MaskedTable& t,
                                 const LowRankImputer& cfg) {
    std::vector<bool> punctured(t.n_cols, false);
    bool any = false;
    for (std::size_t j = 0; j < t.n_cols; ++j) {
        if (t.n_observed(j) < t.n_rows) {
            punctured[j] = true;
            any = true;
        }
    }
    if (!any)
        throw ComputeError("select_rank: table has no holes to tune against");

    // Observed cells of the punctured columns, row-major; each gets one
    // counter-indexed uniform and the smallest keys form the holdout.
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> keyed;
    CounterRng rng(cfg.seed);
    std::uint64_t counter = 0;
    for (std::size_t i = 0; i < t.n_rows; ++i)
        for (std::size_t j = 0; j < t.n_cols; ++j) {
            if (!punctured[j] || !t.observed(i, j)) continue;
            keyed.push_back({rng.uniform(counter++), {i, j}});
        }
    if (keyed.size() < 10)
        throw ComputeError("select_rank: fewer than 10 observed cells "
                           "available for holdout");
    std::size_t n_holdout = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(
               cfg.holdout_fraction * static_cast<double>(keyed.size()))));
    std::sort(keyed.begin(), keyed.end());
    keyed.resize(n_holdout);

    MaskedTable masked = t;
    for (const auto& [key, cell] : keyed)
        masked.set_observed(cell.first, cell.second, false);
    StandardizationParams params = standardization_params(masked);

    const int cap = static_cast<int>(
        std::min({t.n_rows, t.n_cols,
                  static_cast<std::size_t>(cfg.max_rank_candidates)}));
    RankSelection sel;
    double best = 0.0;
    Eigen::MatrixXd Z0 = detail::standardized_matrix(masked, params);
    for (int r = 1; r <= cap; ++r) {
        auto outcome =
            detail::hard_impute(masked, Z0, r, cfg.max_iter, cfg.tol);
        double sq = 0.0;
        for (const auto& [key, cell] : keyed) {
            double imputed =
                outcome.filled(static_cast<Eigen::Index>(cell.first),
                               static_cast<Eigen::Index>(cell.second)) *
                    params.scale[cell.second] +
                params.center[cell.second];
            double truth = t.at(cell.first, cell.second);
            double e = (imputed - truth) / params.scale[cell.second];
            sq += e * e;
        }
        double rmse = std::sqrt(sq / static_cast<double>(n_holdout));
        sel.candidates.push_back({r, rmse});
        if (sel.selected_rank == 0 || rmse < best) {
            best = rmse;
            sel.selected_rank = r;
        }
    }
    return sel;
}

}  // namespace imputekit

#endif  // IMPUTEKIT_LOW_RANK_HPP
