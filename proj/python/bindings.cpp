#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "hkm/alignment.hpp"
#include "hkm/bicluster.hpp"
#include "hkm/clustering.hpp"
#include "hkm/error.hpp"
#include "hkm/expression.hpp"
#include "hkm/fom.hpp"
#include "hkm/search.hpp"
#include "hkm/similarity.hpp"

namespace py = pybind11;
using namespace hkm;

namespace {

HkmConfig make_config(std::optional<std::size_t> buckets, std::optional<double> threshold,
                      std::size_t min_bucket_size, unsigned threads) {
    if (buckets && threshold) throw ValidationError("give at most one of buckets and threshold");
    HkmConfig cfg;
    if (buckets) cfg.cut = CutPolicy::with_buckets(*buckets);
    if (threshold) cfg.cut = CutPolicy::at_height(*threshold);
    cfg.min_bucket_size = min_bucket_size;
    cfg.threads = threads;
    cfg.kmeans.threads = threads;
    return cfg;
}

SeqMode mode_from(const std::string& name) {
    if (name == "nt") return SeqMode::nucleotide;
    if (name == "aa") return SeqMode::protein;
    throw ValidationError("mode must be 'nt' or 'aa', got '" + name + "'");
}

ScoringScheme scheme_for(SeqMode mode) {
    return mode == SeqMode::nucleotide ? ScoringScheme::nucleotide() : ScoringScheme::protein();
}

}  // namespace

PYBIND11_MODULE(_hkm, m) {
    m.doc() = "Hierarchical k-means gene expression clustering, validation and sequence search";

    auto base = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<ExpressionMatrix>(m, "ExpressionMatrix")
        .def(py::init<std::vector<std::string>, std::vector<std::string>, Matrix>(), py::arg("gene_ids"),
             py::arg("condition_ids"), py::arg("values"))
        .def_property_readonly("gene_ids", &ExpressionMatrix::gene_ids)
        .def_property_readonly("condition_ids", &ExpressionMatrix::condition_ids)
        .def_property_readonly("values", &ExpressionMatrix::values)
        .def_property_readonly("warnings", &ExpressionMatrix::warnings)
        .def_property_readonly("shape", [](const ExpressionMatrix& x) {
            return py::make_tuple(x.n_genes(), x.n_conditions());
        });

    m.def(
        "load_expression_matrix",
        [](const std::string& path, double max_missing_fraction) {
            return load_expression_matrix_file(path, LoadOptions{max_missing_fraction});
        },
        py::arg("path"), py::arg("max_missing_fraction") = 0.20);

    m.def(
        "pearson", [](std::vector<double> x, std::vector<double> y) { return pearson(x, y); }, py::arg("x"),
        py::arg("y"));

    py::class_<HkmResult>(m, "HkmResult")
        .def_property_readonly("k", [](const HkmResult& r) { return r.clustering.k; })
        .def_property_readonly("assignment", [](const HkmResult& r) { return r.clustering.assignment; })
        .def_property_readonly("centroids", [](const HkmResult& r) { return r.clustering.centroids; })
        .def_property_readonly("objective", [](const HkmResult& r) { return r.clustering.objective; })
        .def_property_readonly("iterations", [](const HkmResult& r) { return r.clustering.iterations; })
        .def_property_readonly("objective_trace", [](const HkmResult& r) { return r.clustering.objective_trace; })
        .def_readonly("outliers", &HkmResult::outliers)
        .def_readonly("dropped", &HkmResult::dropped);

    m.def(
        "cluster",
        [](const ExpressionMatrix& x, std::optional<std::size_t> buckets, std::optional<double> threshold,
           std::size_t min_bucket_size, unsigned threads) {
            return hkm::hkm(x, make_config(buckets, threshold, min_bucket_size, threads));
        },
        py::arg("matrix"), py::kw_only(), py::arg("buckets") = py::none(), py::arg("threshold") = py::none(),
        py::arg("min_bucket_size") = 1, py::arg("threads") = 1);

    m.def(
        "fom_curve",
        [](const ExpressionMatrix& x, std::vector<std::size_t> ks, bool adjusted, std::size_t min_bucket_size,
           unsigned threads) {
            const auto alg = hkm_algorithm(make_config(std::nullopt, std::nullopt, min_bucket_size, 1));
            const auto curve = fom_curve(x, alg, std::move(ks), adjusted ? FomMode::adjusted : FomMode::raw, threads);
            std::vector<std::pair<std::size_t, double>> out;
            for (const auto& p : curve.points) out.emplace_back(p.k, p.fom);
            return out;
        },
        py::arg("matrix"), py::arg("ks"), py::kw_only(), py::arg("adjusted") = false,
        py::arg("min_bucket_size") = 1, py::arg("threads") = 1);

    m.def(
        "mean_squared_residue",
        [](const Matrix& values, std::vector<std::size_t> rows, std::vector<std::size_t> cols) {
            return mean_squared_residue(values, rows, cols);
        },
        py::arg("values"), py::arg("rows"), py::arg("cols"));

    py::class_<Bicluster>(m, "Bicluster")
        .def_readonly("rows", &Bicluster::rows)
        .def_readonly("cols", &Bicluster::cols)
        .def_readonly("residue", &Bicluster::residue);

    m.def(
        "bicluster",
        [](const ExpressionMatrix& x, double delta, std::size_t min_rows, std::size_t min_cols, unsigned threads) {
            BiclusterConfig cfg;
            cfg.delta = delta;
            cfg.min_rows = min_rows;
            cfg.min_cols = min_cols;
            cfg.rows_hkm = make_config(std::nullopt, std::nullopt, 1, threads);
            cfg.cols_hkm = cfg.rows_hkm;
            return hkm_bicluster(x, cfg).biclusters;
        },
        py::arg("matrix"), py::kw_only(), py::arg("delta") = 0.5, py::arg("min_rows") = 2, py::arg("min_cols") = 2,
        py::arg("threads") = 1);

    py::class_<Alignment>(m, "Alignment")
        .def_readonly("score", &Alignment::score)
        .def_readonly("aligned_query", &Alignment::aligned_query)
        .def_readonly("aligned_subject", &Alignment::aligned_subject)
        .def_readonly("query_start", &Alignment::query_start)
        .def_readonly("query_end", &Alignment::query_end)
        .def_readonly("subject_start", &Alignment::subject_start)
        .def_readonly("subject_end", &Alignment::subject_end)
        .def_property_readonly("midline", &Alignment::midline);

    m.def(
        "smith_waterman",
        [](const std::string& q, const std::string& s, const std::string& mode) {
            const auto md = mode_from(mode);
            return smith_waterman(make_sequence("q", q, md).residues, make_sequence("s", s, md).residues,
                                  scheme_for(md));
        },
        py::arg("query"), py::arg("subject"), py::arg("mode") = "nt");

    py::class_<Hit>(m, "Hit")
        .def_readonly("query_id", &Hit::query_id)
        .def_readonly("subject_id", &Hit::subject_id)
        .def_readonly("score", &Hit::score)
        .def_readonly("evalue", &Hit::evalue)
        .def_readonly("alignment", &Hit::alignment);

    m.def(
        "search",
        [](const std::pair<std::string, std::string>& query,
           const std::vector<std::pair<std::string, std::string>>& db, const std::string& mode,
           std::optional<std::size_t> word_size, double evalue_threshold, bool mask, unsigned threads) {
            const auto md = mode_from(mode);
            auto params = SearchParams::defaults(md);
            if (word_size) params.word_size = *word_size;
            params.e_threshold = evalue_threshold;
            params.mask = mask;
            params.threads = threads;
            std::vector<SequenceRecord> records;
            for (const auto& [id, residues] : db) records.push_back(make_sequence(id, residues, md));
            return search(make_sequence(query.first, query.second, md), records, params, scheme_for(md));
        },
        py::arg("query"), py::arg("db"), py::kw_only(), py::arg("mode") = "nt", py::arg("word_size") = py::none(),
        py::arg("evalue") = 10.0, py::arg("mask") = true, py::arg("threads") = 1);
}
