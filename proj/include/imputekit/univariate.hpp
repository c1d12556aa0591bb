#ifndef IMPUTEKIT_UNIVARIATE_HPP
#define IMPUTEKIT_UNIVARIATE_HPP

#include <string>

#include "imputekit/imputer_types.hpp"
#include "imputekit/stats.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

enum class UnivariateKind { Mean, Median, MostFrequent };

// Fills every hole in a column with a single statistic of that column's
// observed cells.
inline ImputationResult impute_univariate(const MaskedTable& t,
                                          UnivariateKind kind) {
    auto holes = detail::hole_list(t);
    std::vector<double> fill(t.n_cols, 0.0);
    std::vector<bool> have(t.n_cols, false);
    for (auto& h : holes) {
        if (!have[h.col]) {
            ColumnStats s = column_stats(t, h.col);  // throws on empty column
            switch (kind) {
                case UnivariateKind::Mean: fill[h.col] = s.mean; break;
                case UnivariateKind::Median: fill[h.col] = s.median; break;
                case UnivariateKind::MostFrequent: fill[h.col] = s.mode; break;
            }
            have[h.col] = true;
        }
        h.value = fill[h.col];
    }
    return detail::apply_fills(t, std::move(holes), ImputerDiagnostics{});
}

}  // namespace imputekit

#endif  // IMPUTEKIT_UNIVARIATE_HPP
