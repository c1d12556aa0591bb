#ifndef IMPUTEKIT_REGRESSION_HPP
#define IMPUTEKIT_REGRESSION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "imputekit/errors.hpp"
#include "imputekit/rng.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

struct OlsModel {
    std::vector<std::string> predictors;  // empty when fit from a bare matrix
    std::vector<double> coefficients;     // aligned to predictors
    double intercept = 0.0;
    double rss = 0.0;
    std::size_t n = 0;  // training rows
    std::size_t p = 0;  // predictor count
};

// Least squares through a column-pivoting Householder QR of the augmented
// design [1 X]; the normal matrix is never formed. Rank deficiency is an
// error that names a dependent column rather than a silent pseudo-inverse.
inline OlsModel fit_ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                        const std::vector<std::string>& names = {}) {
    const Eigen::Index n = X.rows(), p = X.cols();
    if (y.size() != n)
        throw ConfigError("fit_ols: X has " + std::to_string(n) +
                          " rows but y has " + std::to_string(y.size()));
    if (n <= p + 1)
        throw ConfigError("fit_ols: need more rows than predictors plus "
                          "intercept (" + std::to_string(n) + " <= " +
                          std::to_string(p + 1) + ")");
    Eigen::MatrixXd A(n, p + 1);
    A.col(0).setOnes();
    A.rightCols(p) = X;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < p + 1) {
        // Pivot order puts dependent columns last.
        Eigen::Index dep = qr.colsPermutation().indices()(p);
        std::string label;
        if (dep == 0)
            label = "(intercept)";
        else if (!names.empty())
            label = names[static_cast<std::size_t>(dep - 1)];
        else
            label = "x" + std::to_string(dep - 1);
        throw RankDeficiencyError(label);
    }
    Eigen::VectorXd beta = qr.solve(y);
    OlsModel m;
    m.predictors = names;
    m.intercept = beta(0);
    m.coefficients.assign(beta.data() + 1, beta.data() + p + 1);
    m.n = static_cast<std::size_t>(n);
    m.p = static_cast<std::size_t>(p);
    m.rss = (y - A * beta).squaredNorm();
    return m;
}

// Ridge-stabilized fallback used by the round-robin imputer when the design
// is rank deficient: solves (A^T A + eps I) beta = A^T y.
inline OlsModel fit_ols_ridge(const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, double eps,
                              const std::vector<std::string>& names = {}) {
    const Eigen::Index n = X.rows(), p = X.cols();
    if (y.size() != n) throw ConfigError("fit_ols_ridge: size mismatch");
    Eigen::MatrixXd A(n, p + 1);
    A.col(0).setOnes();
    A.rightCols(p) = X;
    Eigen::MatrixXd G = A.transpose() * A;
    G.diagonal().array() += eps;
    Eigen::VectorXd beta = G.ldlt().solve(A.transpose() * y);
    OlsModel m;
    m.predictors = names;
    m.intercept = beta(0);
    m.coefficients.assign(beta.data() + 1, beta.data() + p + 1);
    m.n = static_cast<std::size_t>(n);
    m.p = static_cast<std::size_t>(p);
    m.rss = (y - A * beta).squaredNorm();
    return m;
}

inline Eigen::VectorXd predict(const OlsModel& m, const Eigen::MatrixXd& X) {
    if (static_cast<std::size_t>(X.cols()) != m.coefficients.size())
        throw ConfigError("predict: design has " + std::to_string(X.cols()) +
                          " columns, model expects " +
                          std::to_string(m.coefficients.size()));
    Eigen::Map<const Eigen::VectorXd> beta(m.coefficients.data(),
                                           m.coefficients.size());
    return (X * beta).array() + m.intercept;
}

struct SplitSpec {
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
};

struct Split {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

// Seeded disjoint exhaustive partition. Each row's key is its index; rows
// are ranked by a counter-indexed uniform and the round(f*n) smallest form
// the training set (round half up, so n=10 gives 7/3).
inline Split train_test_split(std::size_t n_rows, const SplitSpec& spec) {
    if (spec.train_fraction <= 0.0 || spec.train_fraction >= 1.0)
        throw ConfigError("train_fraction must lie in (0, 1)");
    if (n_rows < 10)
        throw ConfigError("train_test_split needs at least 10 rows, got " +
                          std::to_string(n_rows));
    CounterRng rng(spec.seed);
    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> score(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) score[i] = rng.uniform(i);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return score[a] != score[b] ? score[a] < score[b] : a < b;
    });
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(spec.train_fraction * static_cast<double>(n_rows) + 0.5));
    Split s;
    s.train_rows.assign(order.begin(), order.begin() + n_train);
    s.test_rows.assign(order.begin() + n_train, order.end());
    std::sort(s.train_rows.begin(), s.train_rows.end());
    std::sort(s.test_rows.begin(), s.test_rows.end());
    return s;
}

inline Split train_test_split(const MaskedTable& t, const SplitSpec& spec) {
    return train_test_split(t.n_rows, spec);
}

inline double mse(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || a.size() != b.size())
        throw ConfigError("mse: vectors must be non-empty and equal length");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

inline double rmse(const std::vector<double>& a, const std::vector<double>& b) {
    return std::sqrt(mse(a, b));
}

inline void to_json(nlohmann::json& j, const OlsModel& m) {
    j = nlohmann::json{{"predictors", m.predictors},
                       {"coefficients", m.coefficients},
                       {"intercept", m.intercept},
                       {"rss", m.rss},
                       {"n", m.n},
                       {"p", m.p}};
}

inline void from_json(const nlohmann::json& j, OlsModel& m) {
    m.predictors = j.at("predictors").get<std::vector<std::string>>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.intercept = j.at("intercept").get<double>();
    m.rss = j.value("rss", 0.0);
    m.n = j.value("n", std::size_t{0});
    m.p = j.value("p", m.coefficients.size());
}

}  // namespace imputekit

#endif  // IMPUTEKIT_REGRESSION_HPP
