#include "hkm/similarity.hpp"

#include <algorithm>
#include <cmath>

#include "hkm/error.hpp"
#include "hkm/parallel.hpp"

namespace hkm {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("pearson: vectors differ in length");
    if (x.size() < 2) throw DomainError("pearson: need at least 2 observations");

    const double mx = mean_of(x);
    const double my = mean_of(y);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double dx = x[d] - mx;
        const double dy = y[d] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DomainError("pearson: zero-variance vector");
    return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

double pearson_distance(std::span<const double> x, std::span<const double> y) {
    return 1.0 - pearson(x, y);
}

DistanceMatrix pearson_distance_matrix(const Matrix& rows, std::vector<std::string> labels,
                                       unsigned threads) {
    const Eigen::Index n = rows.rows();
    const Eigen::Index p = rows.cols();
    if (static_cast<std::size_t>(n) != labels.size()) {
        throw ValidationError("distance matrix: label count does not match row count");
    }
    if (p < 2) throw DomainError("pearson: need at least 2 observations");

    // Centered rows and their norms, hoisted out of the pair loop.
    Matrix centered(n, p);
    std::vector<double> norms(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double mean = rows.row(i).sum() / static_cast<double>(p);
        double ss = 0.0;
        for (Eigen::Index d = 0; d < p; ++d) {
            const double c = rows(i, d) - mean;
            centered(i, d) = c;
            ss += c * c;
        }
        if (!(ss > 0.0)) {
            throw DomainError("pearson: zero-variance profile for gene '" + labels[static_cast<std::size_t>(i)] + "'");
        }
        norms[static_cast<std::size_t>(i)] = std::sqrt(ss);
    }

    DistanceMatrix out{std::move(labels), Matrix::Zero(n, n)};
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t iu) {
        const auto i = static_cast<Eigen::Index>(iu);
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double sxy = 0.0;
            for (Eigen::Index d = 0; d < p; ++d) sxy += centered(i, d) * centered(j, d);
            const double r = std::clamp(sxy / (norms[iu] * norms[static_cast<std::size_t>(j)]), -1.0, 1.0);
            out.d(i, j) = 1.0 - r;
        }
    });
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) out.d(j, i) = out.d(i, j);
    }
    return out;
}

DistanceMatrix pearson_distance_matrix(const ExpressionMatrix& m, unsigned threads) {
    return pearson_distance_matrix(m.values(), m.gene_ids(), threads);
}

}  // namespace hkm
