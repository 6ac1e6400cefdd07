#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "hkm/expression.hpp"
#include "hkm/similarity.hpp"

namespace hkm {

// Leaves are node ids 0..n-1; the i-th merge creates node n+i.
struct Merge {
    std::size_t left;   // smaller node id
    std::size_t right;  // larger node id
    double height;
};

struct Dendrogram {
    std::size_t n_leaves = 0;
    std::vector<Merge> merges;  // n_leaves - 1 entries, heights non-decreasing
};

// Agglomerative single linkage. At every step the pair of active clusters with
// the smallest minimum cross distance is merged; ties go to the pair whose
// (smallest leaf of first cluster, smallest leaf of second cluster) is
// lexicographically lowest.
Dendrogram single_linkage(const DistanceMatrix& d);

// How the dendrogram is cut into buckets.
struct CutPolicy {
    enum class Kind { threshold, target_buckets, largest_gap };

    Kind kind = Kind::largest_gap;
    double threshold = 0.0;
    std::size_t buckets = 1;

    // Discard merges higher than theta.
    static CutPolicy at_height(double theta) { return {Kind::threshold, theta, 0}; }
    // Keep the first n - m merges.
    static CutPolicy with_buckets(std::size_t m) { return {Kind::target_buckets, 0.0, m}; }
    // Bucket count from the largest jump between consecutive merge heights.
    static CutPolicy elbow() { return {Kind::largest_gap, 0.0, 0}; }
};

// Partition of leaves into buckets indexed 0..M-1 (ordered by smallest member).
struct BucketTable {
    std::vector<std::vector<std::size_t>> buckets;
    std::vector<std::size_t> outliers;  // members of buckets below min_bucket_size
    double cut_height = 0.0;

    std::size_t size() const { return buckets.size(); }
};

// Bucket count chosen by the largest relative gap between consecutive merge
// heights, (h[t+1] - h[t]) / h[last]. Returns 1 when there is no positive gap.
std::size_t elbow_bucket_count(const Dendrogram& t);

BucketTable cut_dendrogram(const Dendrogram& t, const CutPolicy& policy, std::size_t min_bucket_size = 1);

// Component-wise mean of the rows in each bucket (one centroid per bucket).
Matrix initial_centroids(const Matrix& points, const BucketTable& buckets);
Matrix initial_centroids(const StandardizedMatrix& m, const BucketTable& buckets);

struct KMeansConfig {
    std::size_t max_iter = 100;
    double tol = 1e-9;     // stop once every centroid moves less than this
    unsigned threads = 1;  // assignment pass only
};

inline constexpr int kUnassigned = -1;

struct Clustering {
    std::size_t k = 0;
    std::vector<int> assignment;  // cluster id per point, or kUnassigned
    Matrix centroids;             // k x B
    double objective = 0.0;       // sum of squared distances to assigned centroids
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;  // objective after each iteration

    // Point indices per cluster, ascending.
    std::vector<std::vector<std::size_t>> members() const;
};

// Lloyd iteration under squared Euclidean distance. Nearest-centroid ties go
// to the lowest cluster id. A cluster left empty by an assignment pass is
// reseeded with the point farthest from its current centroid.
Clustering kmeans(const Matrix& points, const Matrix& seed, const KMeansConfig& cfg = {});

double clustering_objective(const Matrix& points, const std::vector<int>& assignment, const Matrix& centroids);

struct HkmConfig {
    CutPolicy cut = CutPolicy::elbow();
    std::size_t min_bucket_size = 1;
    KMeansConfig kmeans;
    unsigned threads = 1;  // distance matrix and assignment passes
};

struct HkmResult {
    // Indexed by input row. Outliers and zero-variance rows are kUnassigned;
    // centroids live in z-scored space.
    Clustering clustering;
    std::vector<std::size_t> outliers;  // input rows excluded by min_bucket_size
    std::vector<std::size_t> dropped;   // input rows with zero variance
    Dendrogram dendrogram;              // over the retained rows
    BucketTable buckets;                // indices into the retained rows
};

// Standardize rows, Pearson distances, single linkage, cut, bucket-mean
// seeds, then Lloyd in z-scored space.
HkmResult hkm(const Matrix& values, const HkmConfig& cfg = {});
HkmResult hkm(const ExpressionMatrix& m, const HkmConfig& cfg = {});

}  // namespace hkm
