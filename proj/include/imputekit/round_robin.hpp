#ifndef IMPUTEKIT_ROUND_ROBIN_HPP
#define IMPUTEKIT_ROUND_ROBIN_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "imputekit/imputer_types.hpp"
#include "imputekit/regression.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

// Round-robin multivariate imputation: each hole-bearing column in turn is
// regressed (OLS) on every other column over the rows where it was
// originally observed, with predictors at their current filled values, and
// its holes are overwritten by the predictions. Sweeps repeat until the
// largest hole update falls below tol. Columns are visited in ascending
// hole count; columns too sparse to fit fall back to their mean.
inline ImputationResult impute_iterative_regression(
    const MaskedTable& t, const RoundRobinImputer& cfg) {
    if (cfg.max_iter < 1 || cfg.tol <= 0.0 || cfg.ridge_eps < 0.0)
        throw ConfigError("regression imputer: bad hyperparameters");
    auto holes = detail::hole_list(t);
    if (holes.empty())
        return detail::apply_fills(t, {}, ImputerDiagnostics{});

    const std::size_t n = t.n_rows, p = t.n_cols;
    StandardizationParams params = detail::lenient_params(t);
    Eigen::MatrixXd Z(n, p);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            Z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                t.observed(i, j)
                    ? (t.at(i, j) - params.center[j]) / params.scale[j]
                    : 0.0;  // column mean

    std::vector<std::size_t> hole_count(p, 0);
    for (const auto& h : holes) ++hole_count[h.col];
    std::vector<std::size_t> visit;
    for (std::size_t j = 0; j < p; ++j)
        if (hole_count[j] > 0) visit.push_back(j);
    std::sort(visit.begin(), visit.end(),
              [&](std::size_t a, std::size_t b) {
                  return hole_count[a] != hole_count[b]
                             ? hole_count[a] < hole_count[b]
                             : a < b;
              });

    ImputerDiagnostics diag;
    auto note_fallback = [&](std::size_t col) {
        const std::string& name = t.column_names[col];
        if (std::find(diag.fallback_columns.begin(),
                      diag.fallback_columns.end(),
                      name) == diag.fallback_columns.end())
            diag.fallback_columns.push_back(name);
    };

    for (int sweep = 1; sweep <= cfg.max_iter; ++sweep) {
        double max_change = 0.0;
        for (std::size_t jy : visit) {
            const std::size_t n_obs = n - hole_count[jy];
            // Column-mean fallback covers both the no-predictor table and
            // columns without enough observed rows for a fit.
            if (p < 2 || n_obs <= p) {
                note_fallback(jy);
                for (std::size_t i = 0; i < n; ++i)
                    if (!t.observed(i, jy)) {
                        max_change = std::max(
                            max_change,
                            std::abs(Z(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(jy))));
                        Z(static_cast<Eigen::Index>(i),
                          static_cast<Eigen::Index>(jy)) = 0.0;
                    }
                continue;
            }
            Eigen::MatrixXd X(n_obs, p - 1);
            Eigen::VectorXd y(n_obs);
            Eigen::MatrixXd Xmiss(hole_count[jy], p - 1);
            Eigen::Index ro = 0, rm = 0;
            for (std::size_t i = 0; i < n; ++i) {
                Eigen::Index c = 0;
                if (t.observed(i, jy)) {
                    for (std::size_t j = 0; j < p; ++j)
                        if (j != jy)
                            X(ro, c++) = Z(static_cast<Eigen::Index>(i),
                                           static_cast<Eigen::Index>(j));
                    y(ro++) = Z(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(jy));
                } else {
                    for (std::size_t j = 0; j < p; ++j)
                        if (j != jy)
                            Xmiss(rm, c++) = Z(static_cast<Eigen::Index>(i),
                                               static_cast<Eigen::Index>(j));
                    ++rm;
                }
            }
            OlsModel model;
            try {
                model = fit_ols(X, y);
            } catch (const RankDeficiencyError&) {
                model = fit_ols_ridge(X, y, cfg.ridge_eps);
            }
            Eigen::VectorXd pred = predict(model, Xmiss);
            rm = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (t.observed(i, jy)) continue;
                double delta = pred(rm) - Z(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(jy));
                max_change = std::max(max_change, std::abs(delta));
                Z(static_cast<Eigen::Index>(i),
                  static_cast<Eigen::Index>(jy)) = pred(rm);
                ++rm;
            }
        }
        diag.iterations = sweep;
        diag.final_change = max_change;
        diag.converged = max_change < cfg.tol;
        if (diag.converged) break;
    }

    for (auto& h : holes)
        h.value = Z(static_cast<Eigen::Index>(h.row),
                    static_cast<Eigen::Index>(h.col)) *
                      params.scale[h.col] +
                  params.center[h.col];
    return detail::apply_fills(t, std::move(holes), std::move(diag));
}

}  // namespace imputekit

#endif  // IMPUTEKIT_ROUND_ROBIN_HPP
