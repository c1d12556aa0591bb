#ifndef IMPUTEKIT_STATS_HPP
#define IMPUTEKIT_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "imputekit/errors.hpp"
#include "imputekit/table.hpp"

namespace imputekit {

// All statistics run over observed cells only. Standard deviation uses the
// sample (n-1) denominator throughout the toolkit.
struct ColumnStats {
    double mean = 0.0;
    double median = 0.0;
    double mode = 0.0;   // ties break to the smallest value
    double std = 0.0;
    std::size_t n_observed = 0;
};

inline ColumnStats column_stats(const MaskedTable& t, std::size_t col) {
    std::vector<double> v = t.observed_values(col);
    if (v.empty()) throw EmptyColumnError(t.column_names[col]);
    ColumnStats s;
    s.n_observed = v.size();
    double sum = 0.0;
    for (double x : v) sum += x;
    s.mean = sum / static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - s.mean) * (x - s.mean);
    s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1))
                         : 0.0;
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    s.median = (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    // v is sorted, so equal runs are contiguous and the first longest run
    // is the smallest tied value.
    double best = v[0];
    std::size_t best_count = 0, run = 0;
    for (std::size_t i = 0; i < n; ++i) {
        run = (i > 0 && v[i] == v[i - 1]) ? run + 1 : 1;
        if (run > best_count) {
            best_count = run;
            best = v[i];
        }
    }
    s.mode = best;
    return s;
}

inline ColumnStats column_stats(const MaskedTable& t, const std::string& col) {
    return column_stats(t, t.column_index(col));
}

struct StandardizationParams {
    std::vector<double> center;  // observed mean per column
    std::vector<double> scale;   // observed sample std per column, > 0
};

inline StandardizationParams standardization_params(const MaskedTable& t) {
    StandardizationParams p;
    p.center.resize(t.n_cols);
    p.scale.resize(t.n_cols);
    for (std::size_t j = 0; j < t.n_cols; ++j) {
        ColumnStats s = column_stats(t, j);
        if (!(s.std > 0.0)) throw DegenerateColumnError(t.column_names[j]);
        p.center[j] = s.mean;
        p.scale[j] = s.std;
    }
    return p;
}

inline MaskedTable apply_standardization(const MaskedTable& t,
                                         const StandardizationParams& p) {
    MaskedTable out = t;
    for (std::size_t i = 0; i < t.n_rows; ++i)
        for (std::size_t j = 0; j < t.n_cols; ++j)
            if (t.observed(i, j))
                out.at(i, j) = (t.at(i, j) - p.center[j]) / p.scale[j];
    return out;
}

inline std::pair<MaskedTable, StandardizationParams> standardize(
    const MaskedTable& t) {
    StandardizationParams p = standardization_params(t);
    return {apply_standardization(t, p), p};
}

inline MaskedTable destandardize(const MaskedTable& t,
                                 const StandardizationParams& p) {
    MaskedTable out = t;
    for (std::size_t i = 0; i < t.n_rows; ++i)
        for (std::size_t j = 0; j < t.n_cols; ++j)
            if (t.observed(i, j))
                out.at(i, j) = t.at(i, j) * p.scale[j] + p.center[j];
    return out;
}

// Pairwise-complete Pearson correlations: entry (i,j) uses only rows where
// both columns are observed. Undefined entries (fewer than two shared rows,
// or zero variance on the shared rows) are NaN, never 0.
inline std::vector<std::vector<double>> pearson_correlation_matrix(
    const MaskedTable& t) {
    const double undefined = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<double>> r(t.n_cols,
                                       std::vector<double>(t.n_cols, 1.0));
    for (std::size_t a = 0; a < t.n_cols; ++a) {
        for (std::size_t b = a + 1; b < t.n_cols; ++b) {
            std::vector<double> x, y;
            for (std::size_t i = 0; i < t.n_rows; ++i)
                if (t.observed(i, a) && t.observed(i, b)) {
                    x.push_back(t.at(i, a));
                    y.push_back(t.at(i, b));
                }
            double rho = undefined;
            if (x.size() >= 2) {
                const double n = static_cast<double>(x.size());
                double mx = 0.0, my = 0.0;
                for (std::size_t k = 0; k < x.size(); ++k) {
                    mx += x[k];
                    my += y[k];
                }
                mx /= n;
                my /= n;
                double sxy = 0.0, sxx = 0.0, syy = 0.0;
                for (std::size_t k = 0; k < x.size(); ++k) {
                    sxy += (x[k] - mx) * (y[k] - my);
                    sxx += (x[k] - mx) * (x[k] - mx);
                    syy += (y[k] - my) * (y[k] - my);
                }
                if (sxx > 0.0 && syy > 0.0) {
                    rho = sxy / std::sqrt(sxx * syy);
                    rho = std::clamp(rho, -1.0, 1.0);
                }
            }
            r[a][b] = rho;
            r[b][a] = rho;
        }
    }
    return r;
}

struct ChiSquaredResult {
    double statistic = 0.0;
    int dof = 1;
    double p_value = 1.0;
};

// Survival function of chi-squared with one degree of freedom.
inline double chi_squared_1_sf(double x) {
    return std::erfc(std::sqrt(x / 2.0));
}

// Pearson chi-squared on the 2x2 contingency table of two binary vectors,
// via the closed form n*(ad-bc)^2 / (r0*r1*c0*c1). The grouped products
// make the statistic bit-identical under argument swap.
inline ChiSquaredResult chi_squared_independence(
    const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
    if (a.size() != b.size())
        throw ConfigError("chi-squared inputs must have equal length");
    double n00 = 0, n01 = 0, n10 = 0, n11 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i]) {
            if (b[i]) ++n11; else ++n10;
        } else {
            if (b[i]) ++n01; else ++n00;
        }
    }
    const double r0 = n00 + n01, r1 = n10 + n11;
    const double c0 = n00 + n10, c1 = n01 + n11;
    if (r0 == 0 || r1 == 0 || c0 == 0 || c1 == 0)
        throw ComputeError("chi-squared table is degenerate: a vector has a "
                           "single level");
    const double n = r0 + r1;
    const double det = n00 * n11 - n01 * n10;
    ChiSquaredResult res;
    res.statistic = n * det * det / ((r0 * r1) * (c0 * c1));
    res.dof = 1;
    res.p_value = chi_squared_1_sf(res.statistic);
    return res;
}

inline double sample_variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

}  // namespace imputekit

#endif  // IMPUTEKIT_STATS_HPP
