#include "hkm/expression.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_set>

#include "hkm/error.hpp"

namespace hkm {

namespace {

constexpr std::string_view kMissing = "NA";

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

std::string_view trim_spaces(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
}

template <typename Labels>
void require_unique(const Labels& labels, const char* what) {
    std::unordered_set<std::string_view> seen;
    for (const auto& label : labels) {
        if (!seen.insert(label).second) {
            throw ValidationError(std::string("duplicate ") + what + " id '" + std::string(label) + "'");
        }
    }
}

double parse_value(std::string_view field, std::size_t line_no) {
    double value = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || field.empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": cannot parse value '" +
                         std::string(field) + "'");
    }
    if (!std::isfinite(value)) {
        throw ParseError("line " + std::to_string(line_no) + ": non-finite value '" +
                         std::string(field) + "'");
    }
    return value;
}

// Population-variance test with a scale-relative floor so that rows which are
// constant up to rounding are not z-scored into noise.
bool is_constant(double mean, double variance) {
    const double scale = std::max(1.0, std::abs(mean));
    return !(std::sqrt(variance) > 1e-12 * scale);
}

}  // namespace

ExpressionMatrix::ExpressionMatrix(std::vector<std::string> gene_ids,
                                   std::vector<std::string> condition_ids,
                                   Matrix values,
                                   std::vector<std::string> warnings)
    : gene_ids_(std::move(gene_ids)),
      condition_ids_(std::move(condition_ids)),
      values_(std::move(values)),
      warnings_(std::move(warnings)) {
    if (gene_ids_.empty()) throw ValidationError("expression matrix has no genes");
    if (condition_ids_.size() < 2) {
        throw ValidationError("expression matrix needs at least 2 conditions, found " +
                              std::to_string(condition_ids_.size()));
    }
    if (static_cast<std::size_t>(values_.rows()) != gene_ids_.size() ||
        static_cast<std::size_t>(values_.cols()) != condition_ids_.size()) {
        throw ValidationError("expression matrix shape does not match its labels");
    }
    require_unique(gene_ids_, "gene");
    require_unique(condition_ids_, "condition");
    if (!values_.allFinite()) throw ValidationError("expression matrix contains non-finite values");
}

ExpressionMatrix ExpressionMatrix::transposed() const {
    return ExpressionMatrix(condition_ids_, gene_ids_, values_.transpose(), {});
}

ExpressionMatrix load_expression_matrix(std::istream& in, const LoadOptions& options) {
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> conditions;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_tabs(line);
        if (fields.front().empty()) fields.erase(fields.begin());
        for (auto f : fields) conditions.emplace_back(trim_spaces(f));
        have_header = true;
        break;
    }
    if (!have_header) throw ValidationError("expression input is empty");
    if (conditions.size() < 2) {
        throw ValidationError("expression matrix needs at least 2 conditions, found " +
                              std::to_string(conditions.size()));
    }
    require_unique(conditions, "condition");

    const std::size_t b = conditions.size();
    const auto max_missing = static_cast<std::size_t>(std::floor(options.max_missing_fraction * static_cast<double>(b) + 1e-9));

    std::vector<std::string> genes;
    std::vector<double> cells;
    std::vector<std::string> warnings;
    std::unordered_set<std::string> seen_genes;
    std::vector<double> row(b);
    std::vector<bool> missing(b);

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_tabs(line);
        if (fields.size() != b + 1) {
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(b + 1) +
                             " fields, found " + std::to_string(fields.size()));
        }
        std::string gene(trim_spaces(fields[0]));
        if (gene.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty gene id");
        if (!seen_genes.insert(gene).second) throw ValidationError("duplicate gene id '" + gene + "'");

        std::size_t n_missing = 0;
        double observed_sum = 0.0;
        for (std::size_t c = 0; c < b; ++c) {
            const auto field = trim_spaces(fields[c + 1]);
            missing[c] = field == kMissing;
            if (missing[c]) {
                ++n_missing;
                row[c] = 0.0;
            } else {
                row[c] = parse_value(field, line_no);
                observed_sum += row[c];
            }
        }
        if (n_missing > max_missing) {
            warnings.push_back("gene '" + gene + "' dropped: " + std::to_string(n_missing) + " of " +
                               std::to_string(b) + " values missing");
            continue;
        }
        if (n_missing > 0) {
            const double mean = observed_sum / static_cast<double>(b - n_missing);
            for (std::size_t c = 0; c < b; ++c) {
                if (missing[c]) row[c] = mean;
            }
            warnings.push_back("gene '" + gene + "': imputed " + std::to_string(n_missing) +
                               " missing value(s) with the row mean");
        }
        genes.push_back(std::move(gene));
        cells.insert(cells.end(), row.begin(), row.end());
    }
    if (genes.empty()) throw ValidationError("expression input has no usable genes");

    Matrix values = Eigen::Map<const Matrix>(cells.data(), static_cast<Eigen::Index>(genes.size()),
                                             static_cast<Eigen::Index>(b));
    return ExpressionMatrix(std::move(genes), std::move(conditions), std::move(values), std::move(warnings));
}

ExpressionMatrix load_expression_matrix_file(const std::string& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open expression file '" + path + "'");
    return load_expression_matrix(in, options);
}

void write_expression_matrix(std::ostream& out, const ExpressionMatrix& m) {
    for (const auto& c : m.condition_ids()) out << '\t' << c;
    out << '\n';
    std::array<char, 64> buf{};
    for (std::size_t g = 0; g < m.n_genes(); ++g) {
        out << m.gene_ids()[g];
        for (std::size_t c = 0; c < m.n_conditions(); ++c) {
            const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), m(g, c));
            out << '\t' << std::string_view(buf.data(), static_cast<std::size_t>(ptr - buf.data()));
        }
        out << '\n';
    }
}

StandardizedValues standardize_values(const Matrix& values) {
    StandardizedValues out;
    const Eigen::Index b = values.cols();
    std::vector<Eigen::Index> keep;
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        const auto row = values.row(r);
        const double mean = row.sum() / static_cast<double>(b);
        const double variance = (row.array() - mean).square().sum() / static_cast<double>(b);
        if (is_constant(mean, variance)) {
            out.dropped_rows.push_back(static_cast<std::size_t>(r));
        } else {
            keep.push_back(r);
        }
    }
    out.values.resize(static_cast<Eigen::Index>(keep.size()), b);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const auto row = values.row(keep[i]);
        const double mean = row.sum() / static_cast<double>(b);
        const double sd = std::sqrt((row.array() - mean).square().sum() / static_cast<double>(b));
        out.values.row(static_cast<Eigen::Index>(i)) = (row.array() - mean) / sd;
        out.source_rows.push_back(static_cast<std::size_t>(keep[i]));
    }
    return out;
}

StandardizedMatrix standardize_rows(const ExpressionMatrix& m) {
    auto z = standardize_values(m.values());
    if (z.source_rows.empty()) throw ValidationError("no clusterable genes");

    StandardizedMatrix out;
    out.condition_ids = m.condition_ids();
    out.values = std::move(z.values);
    out.source_rows = std::move(z.source_rows);
    out.dropped_rows = std::move(z.dropped_rows);
    for (auto r : out.source_rows) out.gene_ids.push_back(m.gene_ids()[r]);
    for (auto r : out.dropped_rows) out.dropped_genes.push_back(m.gene_ids()[r]);
    return out;
}

Matrix drop_column(const Matrix& values, std::size_t column) {
    const auto col = static_cast<Eigen::Index>(column);
    if (col >= values.cols()) throw ValidationError("column index out of range");
    Matrix out(values.rows(), values.cols() - 1);
    out.leftCols(col) = values.leftCols(col);
    out.rightCols(values.cols() - col - 1) = values.rightCols(values.cols() - col - 1);
    return out;
}

}  // namespace hkm
