#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hkm {

// Dense row-major matrix; rows are genes (or generic points), columns conditions.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct LoadOptions {
    // Genes with a larger fraction of "NA" cells than this are dropped.
    double max_missing_fraction = 0.20;
};

// n genes x B conditions of finite expression levels with unique labels.
// Immutable once constructed; the constructor enforces n >= 1, B >= 2,
// unique labels and finite values.
class ExpressionMatrix {
public:
    ExpressionMatrix(std::vector<std::string> gene_ids,
                     std::vector<std::string> condition_ids,
                     Matrix values,
                     std::vector<std::string> warnings = {});

    std::size_t n_genes() const { return static_cast<std::size_t>(values_.rows()); }
    std::size_t n_conditions() const { return static_cast<std::size_t>(values_.cols()); }

    const std::vector<std::string>& gene_ids() const { return gene_ids_; }
    const std::vector<std::string>& condition_ids() const { return condition_ids_; }
    const Matrix& values() const { return values_; }
    double operator()(std::size_t gene, std::size_t condition) const {
        return values_(static_cast<Eigen::Index>(gene), static_cast<Eigen::Index>(condition));
    }

    // Load-time diagnostics (dropped genes, imputed cells).
    const std::vector<std::string>& warnings() const { return warnings_; }

    ExpressionMatrix transposed() const;

private:
    std::vector<std::string> gene_ids_;
    std::vector<std::string> condition_ids_;
    Matrix values_;
    std::vector<std::string> warnings_;
};

struct StandardizedMatrix {
    std::vector<std::string> gene_ids;       // retained genes only
    std::vector<std::string> condition_ids;
    Matrix values;                            // z-scored rows
    std::vector<std::size_t> source_rows;     // retained row -> row in the input matrix
    std::vector<std::string> dropped_genes;   // zero-variance rows
    std::vector<std::size_t> dropped_rows;

    std::size_t n_genes() const { return static_cast<std::size_t>(values.rows()); }
};

// Tab-delimited matrix with a condition header; see README for the format.
ExpressionMatrix load_expression_matrix(std::istream& in, const LoadOptions& options = {});
ExpressionMatrix load_expression_matrix_file(const std::string& path, const LoadOptions& options = {});

// Writes the TSV format read by load_expression_matrix. Values use the
// shortest representation that round-trips exactly.
void write_expression_matrix(std::ostream& out, const ExpressionMatrix& m);

// Z-scores each row with the population (1/B) standard deviation.
// Throws ValidationError("no clusterable genes") if every row is constant.
StandardizedMatrix standardize_rows(const ExpressionMatrix& m);

// Label-free variant used by the clustering core. Rows whose population
// variance is zero are reported in `dropped_rows` and omitted from `values`.
struct StandardizedValues {
    Matrix values;
    std::vector<std::size_t> source_rows;
    std::vector<std::size_t> dropped_rows;
};
StandardizedValues standardize_values(const Matrix& values);

// Copy of `values` with column `column` removed.
Matrix drop_column(const Matrix& values, std::size_t column);

}  // namespace hkm
