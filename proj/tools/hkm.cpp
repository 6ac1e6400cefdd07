// hkm: hierarchical k-means clustering, FOM validation, biclustering and
// seeded sequence search for gene-expression data.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hkm/cli.hpp"

namespace {

void add_cut_flags(CLI::App* cmd, hkm::cli::CutOptions& cut, bool allow_policy) {
    if (allow_policy) {
        auto* threshold = cmd->add_option("--cut-threshold", cut.cut_threshold,
                                          "Cut the dendrogram at this Pearson distance (default: largest height gap)");
        auto* buckets = cmd->add_option("--buckets", cut.buckets, "Cut the dendrogram into exactly this many buckets");
        threshold->excludes(buckets);
    }
    cmd->add_option("--min-bucket-size", cut.min_bucket_size, "Buckets smaller than this become outliers")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", cut.threads, "Worker threads (output does not depend on this)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

void add_search_flags(CLI::App* cmd, hkm::cli::SearchOptions& s, std::string& mode) {
    cmd->add_option("--db", s.db, "Database FASTA")->required();
    cmd->add_option("--mode", mode, "Sequence alphabet")
        ->capture_default_str()
        ->check(CLI::IsMember({"nt", "aa"}));
    cmd->add_option("--word-size", s.word_size, "Seed word length (default: 11 nt, 3 aa)");
    cmd->add_option("--neighborhood-t", s.neighborhood_t, "Neighborhood word score threshold, aa only (default: 11)");
    cmd->add_option("--x-drop", s.x_drop, "Ungapped extension X-drop (default: 20 nt, 16 aa)");
    cmd->add_option("--score-cutoff", s.score_cutoff, "Minimum HSP score (default: 20 nt, 30 aa)");
    cmd->add_option("--evalue", s.evalue, "Report hits with E below this")->capture_default_str();
    cmd->add_option("--karlin-lambda", s.karlin_lambda, "Karlin-Altschul lambda (default: 0.318)");
    cmd->add_option("--karlin-k", s.karlin_k, "Karlin-Altschul K (default: 0.13)");
    cmd->add_flag("--no-mask", s.no_mask, "Disable low-complexity masking of queries");
    cmd->add_option("--threads", s.threads, "Worker threads (output does not depend on this)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical k-means clustering and knowledge discovery for gene-expression matrices"};
    app.require_subcommand(1);

    hkm::cli::ClusterOptions cluster;
    auto* cluster_cmd = app.add_subcommand("cluster", "Cluster genes with HKM and write geneId<TAB>cluster");
    cluster_cmd->add_option("--input", cluster.input, "Expression matrix TSV")->required();
    cluster_cmd->add_option("--output", cluster.output, "Cluster TSV to write")->required();
    add_cut_flags(cluster_cmd, cluster.cut, true);

    hkm::cli::ValidateOptions validate;
    auto* validate_cmd = app.add_subcommand("validate", "Leave-one-condition-out FOM curve, written as k,fom CSV");
    validate_cmd->add_option("--input", validate.input, "Expression matrix TSV")->required();
    validate_cmd->add_option("--output", validate.output, "FOM CSV to write")->required();
    validate_cmd->add_option("--k-range", validate.k_range, "Cluster counts, 'a..b' or 'a,b,c'")->capture_default_str();
    validate_cmd->add_flag("--adjusted-fom", validate.adjusted_fom, "Divide each term by sqrt((n-k)/n)");
    add_cut_flags(validate_cmd, validate.cut, false);

    hkm::cli::BiclusterOptions bicluster;
    auto* bicluster_cmd = app.add_subcommand("bicluster", "Two-way HKM biclustering, written as JSON");
    bicluster_cmd->add_option("--input", bicluster.input, "Expression matrix TSV")->required();
    bicluster_cmd->add_option("--output", bicluster.output, "Bicluster JSON to write")->required();
    bicluster_cmd->add_option("--delta", bicluster.delta, "Maximum mean squared residue")->capture_default_str();
    bicluster_cmd->add_option("--min-rows", bicluster.min_rows, "Minimum genes per bicluster")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    bicluster_cmd->add_option("--min-cols", bicluster.min_cols, "Minimum conditions per bicluster")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    add_cut_flags(bicluster_cmd, bicluster.cut, true);

    hkm::cli::SearchOptions search;
    std::string search_mode = "nt";
    auto* search_cmd = app.add_subcommand("search", "Seeded local alignment search, written as a hit TSV");
    search_cmd->add_option("--query", search.query, "Query FASTA")->required();
    search_cmd->add_option("--output", search.output, "Hit TSV to write")->required();
    search_cmd->add_flag("--show-alignment", search.show_alignment, "Append the alignment under each hit");
    add_search_flags(search_cmd, search, search_mode);

    hkm::cli::ReportOptions report;
    std::string report_mode = "nt";
    auto* report_cmd = app.add_subcommand("report", "Top database hit for every gene, grouped by cluster");
    report_cmd->add_option("--clusters", report.clusters, "Cluster TSV from 'cluster'")->required();
    report_cmd->add_option("--sequences", report.sequences, "FASTA of gene sequences keyed by gene id")->required();
    report_cmd->add_option("--output", report.search.output, "Report to write")->required();
    add_search_flags(report_cmd, report.search, report_mode);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (*cluster_cmd) return hkm::cli::run_cluster(cluster, std::cerr);
    if (*validate_cmd) return hkm::cli::run_validate(validate, std::cerr);
    if (*bicluster_cmd) return hkm::cli::run_bicluster(bicluster, std::cerr);
    if (*search_cmd) {
        search.mode = hkm::cli::parse_mode(search_mode);
        return hkm::cli::run_search(search, std::cerr);
    }
    report.search.mode = hkm::cli::parse_mode(report_mode);
    return hkm::cli::run_report(report, std::cerr);
}
