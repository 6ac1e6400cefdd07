#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hkm/bicluster.hpp"
#include "hkm/clustering.hpp"
#include "hkm/search.hpp"

// Subcommand implementations behind tools/hkm. Each run_* returns the process
// exit status, writes machine output only to its output path and logs to `log`.
namespace hkm::cli {

struct CutOptions {
    std::optional<double> cut_threshold;
    std::optional<std::size_t> buckets;
    std::size_t min_bucket_size = 1;
    unsigned threads = 1;

    HkmConfig to_config() const;
};

struct ClusterOptions {
    std::string input;
    std::string output;
    CutOptions cut;
};

struct ValidateOptions {
    std::string input;
    std::string output;
    std::string k_range = "1..6";
    bool adjusted_fom = false;
    CutOptions cut;  // only min_bucket_size and threads apply; k is forced
};

struct BiclusterOptions {
    std::string input;
    std::string output;
    double delta = 0.5;
    std::size_t min_rows = 2;
    std::size_t min_cols = 2;
    CutOptions cut;
};

struct SearchOptions {
    std::string query;
    std::string db;
    std::string output;
    SeqMode mode = SeqMode::nucleotide;
    std::optional<std::size_t> word_size;
    std::optional<int> neighborhood_t;
    std::optional<int> x_drop;
    std::optional<int> score_cutoff;
    double evalue = 10.0;
    std::optional<double> karlin_lambda;
    std::optional<double> karlin_k;
    bool show_alignment = false;
    bool no_mask = false;
    unsigned threads = 1;

    SearchParams params() const;
    ScoringScheme scheme() const;
};

struct ReportOptions {
    std::string clusters;
    std::string sequences;
    SearchOptions search;  // db, output, mode and search parameters
};

// "a..b", "a,b,c" or a single integer. Every k must be >= 1.
std::vector<std::size_t> parse_k_range(const std::string& text);

SeqMode parse_mode(const std::string& text);

int run_cluster(const ClusterOptions& opt, std::ostream& log);
int run_validate(const ValidateOptions& opt, std::ostream& log);
int run_bicluster(const BiclusterOptions& opt, std::ostream& log);
int run_search(const SearchOptions& opt, std::ostream& log);
int run_report(const ReportOptions& opt, std::ostream& log);

}  // namespace hkm::cli
