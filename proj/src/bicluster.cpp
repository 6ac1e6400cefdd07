#include "hkm/bicluster.hpp"

#include <algorithm>
#include <string>
#include <tuple>

#include "hkm/error.hpp"

namespace hkm {

double mean_squared_residue(const Matrix& values, std::span<const std::size_t> rows,
                            std::span<const std::size_t> cols) {
    if (rows.empty() || cols.empty()) throw ValidationError("residue needs at least one row and one column");
    for (auto r : rows) {
        if (r >= static_cast<std::size_t>(values.rows())) {
            throw ValidationError("row index " + std::to_string(r) + " out of range");
        }
    }
    for (auto c : cols) {
        if (c >= static_cast<std::size_t>(values.cols())) {
            throw ValidationError("column index " + std::to_string(c) + " out of range");
        }
    }

    const auto ni = rows.size();
    const auto nj = cols.size();
    Matrix sub(static_cast<Eigen::Index>(ni), static_cast<Eigen::Index>(nj));
    for (std::size_t i = 0; i < ni; ++i) {
        for (std::size_t j = 0; j < nj; ++j) {
            sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                values(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
        }
    }
    const Eigen::VectorXd row_mean = sub.rowwise().mean();
    const Eigen::RowVectorXd col_mean = sub.colwise().mean();
    const double grand = sub.mean();

    double total = 0.0;
    for (Eigen::Index i = 0; i < sub.rows(); ++i) {
        for (Eigen::Index j = 0; j < sub.cols(); ++j) {
            const double r = sub(i, j) - row_mean(i) - col_mean(j) + grand;
            total += r * r;
        }
    }
    return total / static_cast<double>(ni * nj);
}

double mean_squared_residue(const ExpressionMatrix& m, std::span<const std::size_t> rows,
                            std::span<const std::size_t> cols) {
    return mean_squared_residue(m.values(), rows, cols);
}

BiclusterResult hkm_bicluster(const ExpressionMatrix& m, const BiclusterConfig& cfg) {
    if (m.n_conditions() < 3) {
        throw ValidationError("biclustering needs at least 3 conditions, found " + std::to_string(m.n_conditions()));
    }
    if (!(cfg.delta >= 0.0)) throw ValidationError("delta must be >= 0");
    if (cfg.min_rows < 1 || cfg.min_cols < 1) throw ValidationError("minimum bicluster sizes must be >= 1");

    const HkmResult row_side = hkm(m, cfg.rows_hkm);
    const HkmResult col_side = hkm(m.transposed(), cfg.cols_hkm);

    BiclusterResult out;
    out.row_clusters = row_side.clustering.members();
    out.col_clusters = col_side.clustering.members();
    out.dropped_rows = row_side.dropped;
    out.dropped_cols = col_side.dropped;

    for (const auto& rows : out.row_clusters) {
        if (rows.size() < cfg.min_rows) continue;
        for (const auto& cols : out.col_clusters) {
            if (cols.size() < cfg.min_cols) continue;
            const double h = mean_squared_residue(m.values(), rows, cols);
            if (h <= cfg.delta) out.biclusters.push_back({rows, cols, h});
        }
    }
    std::sort(out.biclusters.begin(), out.biclusters.end(), [](const Bicluster& a, const Bicluster& b) {
        return std::tie(a.residue, a.rows.front(), a.cols.front()) < std::tie(b.residue, b.rows.front(), b.cols.front());
    });
    return out;
}

}  // namespace hkm
