#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "hkm/clustering.hpp"
#include "hkm/expression.hpp"

namespace hkm {

enum class FomMode { raw, adjusted };

// Clusters `training` (the matrix with one condition held out) into k groups.
using ClusterAlgorithm = std::function<Clustering(const Matrix& training, std::size_t k)>;

// Root mean within-cluster squared deviation of condition `e`:
//   sqrt( (1/n) * sum_i sum_{x in C_i} (R(x, e) - mean_{C_i}(e))^2 )
// Unassigned genes are left out and do not count towards n. Throws
// ValidationError if a cluster id in 0..k-1 has no members.
double fom_condition(const Matrix& values, const std::vector<int>& assignment, std::size_t k, std::size_t e);
double fom_condition(const ExpressionMatrix& m, const Clustering& clustering, std::size_t e);

// Sum over every held-out condition e of fom_condition, reclustering the
// matrix without column e each time. Adjusted mode divides each term by
// sqrt((n - k) / n). Terms are summed in ascending e regardless of `threads`.
double fom_aggregate(const ExpressionMatrix& m, const ClusterAlgorithm& algorithm, std::size_t k,
                     FomMode mode = FomMode::raw, unsigned threads = 1);

struct FomPoint {
    std::size_t k;
    double fom;
};

struct FomCurve {
    std::vector<FomPoint> points;  // ascending k
    std::size_t conditions_used = 0;
    FomMode aggregation = FomMode::raw;
};

// One fom_aggregate per distinct k, ascending.
FomCurve fom_curve(const ExpressionMatrix& m, const ClusterAlgorithm& algorithm, std::vector<std::size_t> k_range,
                   FomMode mode = FomMode::raw, unsigned threads = 1);

// HKM with the cut forced to exactly k buckets.
ClusterAlgorithm hkm_algorithm(HkmConfig base = {});

}  // namespace hkm
