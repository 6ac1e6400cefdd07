#include "hkm/fom.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hkm/error.hpp"
#include "hkm/parallel.hpp"

namespace hkm {

double fom_condition(const Matrix& values, const std::vector<int>& assignment, std::size_t k, std::size_t e) {
    if (e >= static_cast<std::size_t>(values.cols())) {
        throw ValidationError("held-out condition " + std::to_string(e) + " out of range");
    }
    if (assignment.size() != static_cast<std::size_t>(values.rows())) {
        throw ValidationError("assignment length does not match gene count");
    }
    const auto col = static_cast<Eigen::Index>(e);

    std::vector<double> sum(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    std::size_t n = 0;
    for (std::size_t g = 0; g < assignment.size(); ++g) {
        const int c = assignment[g];
        if (c == kUnassigned) continue;
        if (c < 0 || static_cast<std::size_t>(c) >= k) {
            throw ValidationError("cluster id " + std::to_string(c) + " outside 0.." + std::to_string(k - 1));
        }
        sum[static_cast<std::size_t>(c)] += values(static_cast<Eigen::Index>(g), col);
        ++count[static_cast<std::size_t>(c)];
        ++n;
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (count[c] == 0) throw ValidationError("cluster " + std::to_string(c) + " has no members");
    }

    double ss = 0.0;
    for (std::size_t g = 0; g < assignment.size(); ++g) {
        const int c = assignment[g];
        if (c == kUnassigned) continue;
        const auto ci = static_cast<std::size_t>(c);
        const double dev = values(static_cast<Eigen::Index>(g), col) - sum[ci] / static_cast<double>(count[ci]);
        ss += dev * dev;
    }
    return std::sqrt(ss / static_cast<double>(n));
}

double fom_condition(const ExpressionMatrix& m, const Clustering& clustering, std::size_t e) {
    return fom_condition(m.values(), clustering.assignment, clustering.k, e);
}

double fom_aggregate(const ExpressionMatrix& m, const ClusterAlgorithm& algorithm, std::size_t k, FomMode mode,
                     unsigned threads) {
    const std::size_t n = m.n_genes();
    const std::size_t b = m.n_conditions();
    if (k < 1 || k > n) {
        throw ValidationError("k = " + std::to_string(k) + " outside 1.." + std::to_string(n));
    }
    double divisor = 1.0;
    if (mode == FomMode::adjusted) {
        if (k + 1 > n) throw ValidationError("adjusted FOM needs k <= n - 1");
        divisor = std::sqrt(static_cast<double>(n - k) / static_cast<double>(n));
    }

    std::vector<double> terms(b, 0.0);
    parallel_for(b, threads, [&](std::size_t e) {
        const Clustering c = algorithm(drop_column(m.values(), e), k);
        terms[e] = fom_condition(m.values(), c.assignment, c.k, e) / divisor;
    });
    double total = 0.0;
    for (double t : terms) total += t;
    return total;
}

FomCurve fom_curve(const ExpressionMatrix& m, const ClusterAlgorithm& algorithm, std::vector<std::size_t> k_range,
                   FomMode mode, unsigned threads) {
    if (k_range.empty()) throw ValidationError("k range is empty");
    std::sort(k_range.begin(), k_range.end());
    k_range.erase(std::unique(k_range.begin(), k_range.end()), k_range.end());
    for (auto k : k_range) {
        if (k < 1 || k > m.n_genes()) {
            throw ValidationError("k = " + std::to_string(k) + " outside 1.." + std::to_string(m.n_genes()));
        }
    }

    FomCurve curve;
    curve.conditions_used = m.n_conditions();
    curve.aggregation = mode;
    for (auto k : k_range) curve.points.push_back({k, fom_aggregate(m, algorithm, k, mode, threads)});
    return curve;
}

ClusterAlgorithm hkm_algorithm(HkmConfig base) {
    return [base](const Matrix& training, std::size_t k) {
        HkmConfig cfg = base;
        cfg.cut = CutPolicy::with_buckets(k);
        return hkm(training, cfg).clustering;
    };
}

}  // namespace hkm
