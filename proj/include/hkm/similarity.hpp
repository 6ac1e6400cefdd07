#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hkm/expression.hpp"

namespace hkm {

// Symmetric matrix of Pearson distances (1 - r), zero diagonal, entries in [0, 2].
struct DistanceMatrix {
    std::vector<std::string> labels;
    Matrix d;

    std::size_t size() const { return static_cast<std::size_t>(d.rows()); }
    double operator()(std::size_t i, std::size_t j) const {
        return d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
};

// Pearson's correlation coefficient, clamped to [-1, 1].
// Throws DomainError if either vector has zero variance or p < 2.
double pearson(std::span<const double> x, std::span<const double> y);

double pearson_distance(std::span<const double> x, std::span<const double> y);

// All-pairs 1 - r over the rows of `m`. Each cell is computed independently,
// so the result does not depend on `threads`. Constant rows raise DomainError
// naming the gene.
DistanceMatrix pearson_distance_matrix(const ExpressionMatrix& m, unsigned threads = 1);
DistanceMatrix pearson_distance_matrix(const Matrix& rows, std::vector<std::string> labels,
                                       unsigned threads = 1);

}  // namespace hkm
