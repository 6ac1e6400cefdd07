#include "hkm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hkm/error.hpp"
#include "hkm/parallel.hpp"

namespace hkm {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct DisjointSets {
    std::vector<std::size_t> parent;

    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

double squared_distance(const Matrix& a, Eigen::Index ra, const Matrix& b, Eigen::Index rb) {
    double s = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const double diff = a(ra, c) - b(rb, c);
        s += diff * diff;
    }
    return s;
}

// Member means per cluster, summed in ascending point order.
Matrix cluster_means(const Matrix& points, const std::vector<int>& assignment, std::size_t k) {
    Matrix sums = Matrix::Zero(static_cast<Eigen::Index>(k), points.cols());
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignment[i]);
        sums.row(static_cast<Eigen::Index>(c)) += points.row(static_cast<Eigen::Index>(i));
        ++counts[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        sums.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(counts[c]);
    }
    return sums;
}

}  // namespace

Dendrogram single_linkage(const DistanceMatrix& dm) {
    const std::size_t n = dm.size();
    Dendrogram tree{n, {}};
    if (n <= 1) return tree;
    tree.merges.reserve(n - 1);

    // Slot a holds the active cluster whose smallest leaf is a. nn[a] is the
    // nearest active slot b > a (lowest b on ties).
    Matrix d = dm.d;
    std::vector<char> active(n, 1);
    std::vector<std::size_t> node(n);
    std::iota(node.begin(), node.end(), 0);
    std::vector<std::size_t> nn(n, kNone);
    std::vector<double> nn_dist(n, std::numeric_limits<double>::infinity());

    const auto at = [&](std::size_t i, std::size_t j) -> double& {
        return d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };
    const auto refresh = [&](std::size_t a) {
        nn[a] = kNone;
        nn_dist[a] = std::numeric_limits<double>::infinity();
        for (std::size_t b = a + 1; b < n; ++b) {
            if (active[b] && (nn[a] == kNone || at(a, b) < nn_dist[a])) {
                nn[a] = b;
                nn_dist[a] = at(a, b);
            }
        }
    };
    for (std::size_t a = 0; a + 1 < n; ++a) refresh(a);

    std::size_t next_node = n;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t a = kNone;
        for (std::size_t s = 0; s < n; ++s) {
            if (active[s] && nn[s] != kNone && (a == kNone || nn_dist[s] < nn_dist[a])) a = s;
        }
        const std::size_t b = nn[a];
        tree.merges.push_back({std::min(node[a], node[b]), std::max(node[a], node[b]), nn_dist[a]});
        node[a] = next_node++;
        active[b] = 0;

        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == a) continue;
            const double v = std::min(at(a, k), at(b, k));
            at(a, k) = v;
            at(k, a) = v;
        }
        refresh(a);
        for (std::size_t k = 0; k < b; ++k) {
            if (!active[k] || k == a) continue;
            if (nn[k] == b) {
                refresh(k);
            } else if (k < a) {
                const double v = at(k, a);
                if (v < nn_dist[k] || (v == nn_dist[k] && a < nn[k])) {
                    nn[k] = a;
                    nn_dist[k] = v;
                }
            }
        }
    }
    return tree;
}

std::size_t elbow_bucket_count(const Dendrogram& t) {
    const auto& m = t.merges;
    if (m.size() < 2) return 1;
    const double top = m.back().height;
    if (!(top > 0.0)) return 1;

    std::size_t best = kNone;
    double best_gap = 0.0;
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
        const double gap = (m[i + 1].height - m[i].height) / top;
        if (gap > best_gap) {
            best_gap = gap;
            best = i;
        }
    }
    if (best == kNone) return 1;
    // Keep merges 0..best.
    return t.n_leaves - (best + 1);
}

BucketTable cut_dendrogram(const Dendrogram& t, const CutPolicy& policy, std::size_t min_bucket_size) {
    const std::size_t n = t.n_leaves;
    if (n == 0) throw ValidationError("cannot cut an empty dendrogram");
    if (min_bucket_size < 1) throw ValidationError("min_bucket_size must be at least 1");

    std::size_t keep = 0;
    BucketTable table;
    switch (policy.kind) {
        case CutPolicy::Kind::threshold: {
            if (!(policy.threshold >= 0.0)) throw ValidationError("cut threshold must be >= 0");
            while (keep < t.merges.size() && t.merges[keep].height <= policy.threshold) ++keep;
            table.cut_height = policy.threshold;
            break;
        }
        case CutPolicy::Kind::target_buckets:
        case CutPolicy::Kind::largest_gap: {
            const std::size_t m =
                policy.kind == CutPolicy::Kind::target_buckets ? policy.buckets : elbow_bucket_count(t);
            if (m < 1 || m > n) {
                throw ValidationError("target bucket count " + std::to_string(m) + " outside 1.." +
                                      std::to_string(n));
            }
            keep = n - m;
            table.cut_height = keep == 0 ? 0.0 : t.merges[keep - 1].height;
            break;
        }
    }

    // Map internal nodes back to a representative leaf, then union.
    DisjointSets sets(n);
    std::vector<std::size_t> representative(n + t.merges.size());
    std::iota(representative.begin(), representative.begin() + static_cast<std::ptrdiff_t>(n), 0);
    for (std::size_t i = 0; i < t.merges.size(); ++i) {
        const auto& mg = t.merges[i];
        representative[n + i] = representative[mg.left];
        if (i < keep) sets.unite(representative[mg.left], representative[mg.right]);
    }

    std::vector<std::size_t> bucket_of_root(n, kNone);
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t leaf = 0; leaf < n; ++leaf) {
        const std::size_t root = sets.find(leaf);
        if (bucket_of_root[root] == kNone) {
            bucket_of_root[root] = groups.size();
            groups.emplace_back();
        }
        groups[bucket_of_root[root]].push_back(leaf);
    }
    for (auto& g : groups) {
        if (g.size() < min_bucket_size) {
            table.outliers.insert(table.outliers.end(), g.begin(), g.end());
        } else {
            table.buckets.push_back(std::move(g));
        }
    }
    std::sort(table.outliers.begin(), table.outliers.end());
    if (table.buckets.empty()) {
        throw ValidationError("every bucket is smaller than min_bucket_size " + std::to_string(min_bucket_size));
    }
    return table;
}

Matrix initial_centroids(const Matrix& points, const BucketTable& buckets) {
    if (buckets.buckets.empty()) throw ValidationError("empty bucket table");
    Matrix centroids = Matrix::Zero(static_cast<Eigen::Index>(buckets.size()), points.cols());
    for (std::size_t j = 0; j < buckets.size(); ++j) {
        const auto& members = buckets.buckets[j];
        if (members.empty()) throw ValidationError("bucket " + std::to_string(j) + " is empty");
        for (auto i : members) {
            if (i >= static_cast<std::size_t>(points.rows())) {
                throw ValidationError("bucket member " + std::to_string(i) + " is not a retained row");
            }
            centroids.row(static_cast<Eigen::Index>(j)) += points.row(static_cast<Eigen::Index>(i));
        }
        centroids.row(static_cast<Eigen::Index>(j)) /= static_cast<double>(members.size());
    }
    return centroids;
}

Matrix initial_centroids(const StandardizedMatrix& m, const BucketTable& buckets) {
    return initial_centroids(m.values, buckets);
}

std::vector<std::vector<std::size_t>> Clustering::members() const {
    std::vector<std::vector<std::size_t>> out(k);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != kUnassigned) out[static_cast<std::size_t>(assignment[i])].push_back(i);
    }
    return out;
}

double clustering_objective(const Matrix& points, const std::vector<int>& assignment, const Matrix& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == kUnassigned) continue;
        total += squared_distance(points, static_cast<Eigen::Index>(i), centroids, assignment[i]);
    }
    return total;
}

Clustering kmeans(const Matrix& points, const Matrix& seed, const KMeansConfig& cfg) {
    const auto n = static_cast<std::size_t>(points.rows());
    const auto k = static_cast<std::size_t>(seed.rows());
    if (k < 1) throw ValidationError("k-means needs at least one centroid");
    if (k > n) {
        throw ValidationError("k-means: k = " + std::to_string(k) + " exceeds point count " + std::to_string(n));
    }
    if (seed.cols() != points.cols()) throw ValidationError("k-means: seed dimension mismatch");
    if (!points.allFinite() || !seed.allFinite()) throw ValidationError("k-means: non-finite input");
    if (!(cfg.tol >= 0.0)) throw ValidationError("k-means: tol must be >= 0");

    Clustering out;
    out.k = k;
    out.centroids = seed;
    std::vector<int> next(n, kUnassigned);
    std::vector<double> dist(n, 0.0);

    while (out.iterations < cfg.max_iter) {
        const Matrix& c = out.centroids;
        parallel_for(n, cfg.threads, [&](std::size_t i) {
            int best = 0;
            double best_d = squared_distance(points, static_cast<Eigen::Index>(i), c, 0);
            for (std::size_t j = 1; j < k; ++j) {
                const double dj = squared_distance(points, static_cast<Eigen::Index>(i), c, static_cast<Eigen::Index>(j));
                if (dj < best_d) {
                    best_d = dj;
                    best = static_cast<int>(j);
                }
            }
            next[i] = best;
            dist[i] = best_d;
        });

        // Empty-cluster repair: move the farthest point of a multi-member cluster.
        std::vector<std::size_t> counts(k, 0);
        for (int a : next) ++counts[static_cast<std::size_t>(a)];
        for (std::size_t j = 0; j < k; ++j) {
            if (counts[j] != 0) continue;
            std::size_t far = kNone;
            for (std::size_t i = 0; i < n; ++i) {
                if (counts[static_cast<std::size_t>(next[i])] < 2) continue;
                if (far == kNone || dist[i] > dist[far]) far = i;
            }
            --counts[static_cast<std::size_t>(next[far])];
            next[far] = static_cast<int>(j);
            dist[far] = 0.0;
            counts[j] = 1;
            out.centroids.row(static_cast<Eigen::Index>(j)) = points.row(static_cast<Eigen::Index>(far));
        }

        const bool changed = next != out.assignment;
        out.assignment = next;
        Matrix updated = cluster_means(points, out.assignment, k);
        double shift = 0.0;
        for (Eigen::Index j = 0; j < updated.rows(); ++j) {
            shift = std::max(shift, std::sqrt(squared_distance(updated, j, out.centroids, j)));
        }
        out.centroids = std::move(updated);
        out.objective = clustering_objective(points, out.assignment, out.centroids);
        out.objective_trace.push_back(out.objective);
        ++out.iterations;

        if (!changed || shift < cfg.tol) {
            out.converged = true;
            break;
        }
    }
    if (out.iterations == 0) {
        // max_iter == 0: report the seed as-is with nearest assignment.
        out.assignment.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            double best_d = squared_distance(points, static_cast<Eigen::Index>(i), seed, 0);
            for (std::size_t j = 1; j < k; ++j) {
                const double dj = squared_distance(points, static_cast<Eigen::Index>(i), seed, static_cast<Eigen::Index>(j));
                if (dj < best_d) {
                    best_d = dj;
                    out.assignment[i] = static_cast<int>(j);
                }
            }
        }
        out.objective = clustering_objective(points, out.assignment, out.centroids);
    }
    return out;
}

namespace {

HkmResult hkm_impl(const Matrix& values, std::vector<std::string> labels, const HkmConfig& cfg) {
    const auto n_input = static_cast<std::size_t>(values.rows());
    auto z = standardize_values(values);
    if (z.source_rows.empty()) throw ValidationError("no clusterable genes");

    std::vector<std::string> kept_labels;
    kept_labels.reserve(z.source_rows.size());
    for (auto r : z.source_rows) kept_labels.push_back(labels[r]);

    HkmResult result;
    result.dropped = z.dropped_rows;
    const auto distances = pearson_distance_matrix(z.values, std::move(kept_labels), cfg.threads);
    result.dendrogram = single_linkage(distances);
    result.buckets = cut_dendrogram(result.dendrogram, cfg.cut, cfg.min_bucket_size);
    for (auto r : result.buckets.outliers) result.outliers.push_back(z.source_rows[r]);

    // Points that take part in k-means: all bucket members, ascending.
    std::vector<std::size_t> clustered;
    for (const auto& b : result.buckets.buckets) clustered.insert(clustered.end(), b.begin(), b.end());
    std::sort(clustered.begin(), clustered.end());
    std::vector<std::size_t> position(z.values.rows(), kNone);
    Matrix points(static_cast<Eigen::Index>(clustered.size()), z.values.cols());
    for (std::size_t i = 0; i < clustered.size(); ++i) {
        points.row(static_cast<Eigen::Index>(i)) = z.values.row(static_cast<Eigen::Index>(clustered[i]));
        position[clustered[i]] = i;
    }
    BucketTable local = result.buckets;
    for (auto& b : local.buckets) {
        for (auto& member : b) member = position[member];
    }
    const Matrix seed = initial_centroids(points, local);

    Clustering local_clustering;
    if (points.rows() == 1) {
        local_clustering.k = 1;
        local_clustering.assignment = {0};
        local_clustering.centroids = seed;
        local_clustering.converged = true;
    } else {
        KMeansConfig km = cfg.kmeans;
        km.threads = std::max(km.threads, cfg.threads);
        local_clustering = kmeans(points, seed, km);
    }

    Clustering& c = result.clustering;
    c = local_clustering;
    c.assignment.assign(n_input, kUnassigned);
    for (std::size_t i = 0; i < clustered.size(); ++i) {
        c.assignment[z.source_rows[clustered[i]]] = local_clustering.assignment[i];
    }
    return result;
}

}  // namespace

HkmResult hkm(const Matrix& values, const HkmConfig& cfg) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(values.rows()));
    for (Eigen::Index i = 0; i < values.rows(); ++i) labels.push_back("row " + std::to_string(i));
    return hkm_impl(values, std::move(labels), cfg);
}

HkmResult hkm(const ExpressionMatrix& m, const HkmConfig& cfg) {
    return hkm_impl(m.values(), m.gene_ids(), cfg);
}

}  // namespace hkm
