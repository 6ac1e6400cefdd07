#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "hkm/clustering.hpp"
#include "hkm/expression.hpp"

namespace hkm {

// Submatrix (I, J) of an expression matrix with its mean squared residue.
struct Bicluster {
    std::vector<std::size_t> rows;  // gene indices, ascending
    std::vector<std::size_t> cols;  // condition indices, ascending
    double residue = 0.0;
};

// H(I, J) = 1/(|I||J|) * sum (a_ij - a_iJ - a_Ij + a_IJ)^2
double mean_squared_residue(const Matrix& values, std::span<const std::size_t> rows,
                            std::span<const std::size_t> cols);
double mean_squared_residue(const ExpressionMatrix& m, std::span<const std::size_t> rows,
                            std::span<const std::size_t> cols);

struct BiclusterConfig {
    double delta = 0.5;  // maximum residue
    std::size_t min_rows = 2;
    std::size_t min_cols = 2;
    HkmConfig rows_hkm;  // clustering of genes
    HkmConfig cols_hkm;  // clustering of conditions (rows of the transpose)
};

struct BiclusterResult {
    std::vector<Bicluster> biclusters;  // ascending residue, then smallest row, then smallest column
    std::vector<std::vector<std::size_t>> row_clusters;
    std::vector<std::vector<std::size_t>> col_clusters;
    std::vector<std::size_t> dropped_rows;  // zero-variance genes
    std::vector<std::size_t> dropped_cols;  // zero-variance conditions
};

// Two-way HKM: cluster genes, cluster conditions, score every (row cluster,
// column cluster) pair and keep those within delta and the size minimums.
// Requires at least 3 conditions.
BiclusterResult hkm_bicluster(const ExpressionMatrix& m, const BiclusterConfig& cfg = {});

}  // namespace hkm
