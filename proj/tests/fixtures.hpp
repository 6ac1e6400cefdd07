#pragma once

// Synthetic data generators shared by the unit and acceptance tests. Every
// generator is seeded, so fixtures are identical on every run.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hkm/expression.hpp"
#include "hkm/sequence.hpp"

namespace fixture {

using Rng = std::mt19937_64;

inline std::vector<std::string> labels(const std::string& prefix, std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
    return out;
}

inline hkm::Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    hkm::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(rng);
    }
    return m;
}

struct Planted {
    hkm::ExpressionMatrix matrix;
    std::vector<int> truth;  // planted group per gene
};

// Genes drawn around `sizes.size()` prototypes plus N(0, sigma) noise. The
// prototypes sit at equal angles on a circle spanned by two orthonormal,
// zero-mean condition vectors, so every pair is equally far apart (both in
// Euclidean and in Pearson distance). `radius` sets the prototype norm;
// pairwise prototype separation is radius * 2 sin(pi / K).
// When `shuffle` is set the gene order is permuted so groups interleave.
inline Planted planted(const std::vector<std::size_t>& sizes, std::size_t conditions, double sigma, double radius,
                       std::uint64_t seed, bool shuffle = false) {
    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    const auto b = static_cast<Eigen::Index>(conditions);

    // u, v: orthonormal and orthogonal to the all-ones vector.
    Eigen::VectorXd u(b), v(b);
    for (Eigen::Index j = 0; j < b; ++j) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(b);
        u(j) = std::cos(t);
        v(j) = std::sin(t);
    }
    u.normalize();
    v.normalize();

    const std::size_t k = sizes.size();
    std::vector<Eigen::VectorXd> prototypes;
    for (std::size_t c = 0; c < k; ++c) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(k);
        prototypes.push_back(radius * (std::cos(a) * u + std::sin(a) * v));
    }

    std::vector<int> truth;
    for (std::size_t c = 0; c < k; ++c) truth.insert(truth.end(), sizes[c], static_cast<int>(c));
    if (shuffle) std::shuffle(truth.begin(), truth.end(), rng);

    hkm::Matrix values(static_cast<Eigen::Index>(truth.size()), b);
    for (std::size_t g = 0; g < truth.size(); ++g) {
        for (Eigen::Index j = 0; j < b; ++j) {
            values(static_cast<Eigen::Index>(g), j) = prototypes[static_cast<std::size_t>(truth[g])](j) + noise(rng);
        }
    }
    return {hkm::ExpressionMatrix(labels("g", truth.size()), labels("c", conditions), values), truth};
}

// The 3-group, 60 x 10 dataset used for clustering and FOM curves: sigma 0.1,
// prototypes 3 * sqrt(3) ~ 5.2 apart, i.e. more than 50 sigma.
inline Planted three_groups(std::uint64_t seed = 7) { return planted({20, 20, 20}, 10, 0.1, 3.0, seed); }

// 21 genes over 12 conditions in groups of 8, 6 and 7, interleaved.
inline Planted twenty_one_genes(std::uint64_t seed = 21) { return planted({8, 6, 7}, 12, 0.1, 3.0, seed, true); }

struct Checkerboard {
    hkm::ExpressionMatrix matrix;
    std::vector<std::vector<std::size_t>> row_blocks;
    std::vector<std::vector<std::size_t>> col_blocks;
};

// Two row blocks x two column blocks of constant levels {{1, 6}, {5, 2}} plus
// N(0, 0.01) noise. The levels make both row profiles and column profiles of
// different blocks anti-correlated.
inline Checkerboard checkerboard(std::size_t rows_per_block = 5, std::size_t cols_per_block = 4,
                                 std::uint64_t seed = 11) {
    Rng rng(seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    const double level[2][2] = {{1.0, 6.0}, {5.0, 2.0}};
    const std::size_t n = 2 * rows_per_block, b = 2 * cols_per_block;
    hkm::Matrix values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(b));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < b; ++j) {
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                level[i / rows_per_block][j / cols_per_block] + noise(rng);
        }
    }
    std::vector<std::vector<std::size_t>> row_blocks(2), col_blocks(2);
    for (std::size_t i = 0; i < n; ++i) row_blocks[i / rows_per_block].push_back(i);
    for (std::size_t j = 0; j < b; ++j) col_blocks[j / cols_per_block].push_back(j);
    return {hkm::ExpressionMatrix(labels("g", n), labels("c", b), values), row_blocks, col_blocks};
}

inline std::string random_residues(Rng& rng, std::size_t length, hkm::SeqMode mode) {
    const auto letters = hkm::alphabet(mode);
    std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
    std::string s;
    for (std::size_t i = 0; i < length; ++i) s += letters[pick(rng)];
    return s;
}

// Substitutes `count` distinct positions of `s` with a different residue.
inline std::string mutate(Rng& rng, std::string s, std::size_t count, hkm::SeqMode mode) {
    const auto letters = hkm::alphabet(mode);
    std::vector<std::size_t> positions(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) positions[i] = i;
    std::shuffle(positions.begin(), positions.end(), rng);
    std::uniform_int_distribution<std::size_t> pick(1, letters.size() - 1);
    for (std::size_t i = 0; i < count && i < positions.size(); ++i) {
        const auto p = positions[i];
        const auto code = static_cast<std::size_t>(hkm::residue_code(mode, s[p]));
        s[p] = letters[(code + pick(rng)) % letters.size()];
    }
    return s;
}

struct PlantedSearch {
    hkm::SequenceRecord query;
    std::vector<hkm::SequenceRecord> db;
    std::size_t target;  // index of the subject carrying the mutated copy
};

// Ten random nucleotide subjects of length 300; subject `target` carries a
// copy of the 60-residue query with two substitutions.
inline PlantedSearch planted_search(std::uint64_t seed = 5) {
    Rng rng(seed);
    const auto mode = hkm::SeqMode::nucleotide;
    PlantedSearch out{hkm::make_sequence("query", random_residues(rng, 60, mode), mode), {}, 6};
    for (std::size_t i = 0; i < 10; ++i) {
        auto body = random_residues(rng, 300, mode);
        if (i == out.target) body.replace(137, 60, mutate(rng, out.query.residues, 2, mode));
        out.db.push_back(hkm::make_sequence("subject" + std::to_string(i + 1), body, mode));
    }
    return out;
}

}  // namespace fixture
