#ifndef IMPUTEKIT_IMPUTERS_HPP
#define IMPUTEKIT_IMPUTERS_HPP

#include <variant>

#include "imputekit/imputer_types.hpp"
#include "imputekit/knn.hpp"
#include "imputekit/low_rank.hpp"
#include "imputekit/round_robin.hpp"
#include "imputekit/univariate.hpp"

namespace imputekit {

inline ImputationResult impute(const MaskedTable& t,
                               const ImputerConfig& cfg) {
    struct Visitor {
        const MaskedTable& t;
        ImputationResult operator()(const MeanImputer&) const {
            return impute_univariate(t, UnivariateKind::Mean);
        }
        ImputationResult operator()(const MedianImputer&) const {
            return impute_univariate(t, UnivariateKind::Median);
        }
        ImputationResult operator()(const MostFrequentImputer&) const {
            return impute_univariate(t, UnivariateKind::MostFrequent);
        }
        ImputationResult operator()(const KnnImputer& c) const {
            return impute_knn(t, c);
        }
        ImputationResult operator()(const LowRankImputer& c) const {
            return impute_low_rank(t, c);
        }
        ImputationResult operator()(const RoundRobinImputer& c) const {
            return impute_iterative_regression(t, c);
        }
    };
    return std::visit(Visitor{t}, cfg);
}

}  // namespace imputekit

#endif  // IMPUTEKIT_IMPUTERS_HPP
