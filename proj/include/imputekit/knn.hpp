#ifndef IMPUTEKIT_KNN_HPP
#define IMPUTEKIT_KNN_HPP

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "imputekit/imputer_types.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

// Nearest-neighbour imputation on standardized coordinates. Row distance is
// Euclidean over mutually observed columns, rescaled by
// sqrt(n_cols / n_shared) to compensate for the columns a pair does not
// share. Donors must observe the hole's column; ties in distance break to
// the lower row index and the fill is the unweighted donor mean.
inline ImputationResult impute_knn(const MaskedTable& t,
                                   const KnnImputer& cfg) {
    if (cfg.k < 1) throw ConfigError("knn: k must be >= 1");
    auto holes = detail::hole_list(t);
    if (holes.empty())
        return detail::apply_fills(t, {}, ImputerDiagnostics{});

    StandardizationParams p = detail::lenient_params(t);
    const std::size_t n = t.n_rows, d = t.n_cols;
    std::vector<double> z(n * d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (t.observed(i, j))
                z[i * d + j] = (t.at(i, j) - p.center[j]) / p.scale[j];

    std::vector<std::pair<double, std::size_t>> candidates;
    for (auto& h : holes) {
        candidates.clear();
        for (std::size_t r = 0; r < n; ++r) {
            if (r == h.row || !t.observed(r, h.col)) continue;
            double sq = 0.0;
            std::size_t shared = 0;
            for (std::size_t j = 0; j < d; ++j) {
                if (t.observed(h.row, j) && t.observed(r, j)) {
                    double diff = z[h.row * d + j] - z[r * d + j];
                    sq += diff * diff;
                    ++shared;
                }
            }
            if (shared == 0) continue;
            candidates.emplace_back(
                sq * static_cast<double>(d) / static_cast<double>(shared), r);
        }
        if (candidates.empty())
            throw IsolatedRowError(h.row, t.column_names[h.col]);
        std::size_t take = std::min<std::size_t>(candidates.size(),
                                                 static_cast<std::size_t>(cfg.k));
        std::partial_sort(candidates.begin(), candidates.begin() + take,
                          candidates.end());
        double sum = 0.0;
        for (std::size_t i = 0; i < take; ++i)
            sum += t.at(candidates[i].second, h.col);
        h.value = sum / static_cast<double>(take);
    }
    return detail::apply_fills(t, std::move(holes), ImputerDiagnostics{});
}

}  // namespace imputekit

#endif  // IMPUTEKIT_KNN_HPP
