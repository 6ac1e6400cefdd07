#include "hkm/cli.hpp"

#include <charconv>
#include <exception>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "hkm/error.hpp"
#include "hkm/fom.hpp"
#include "hkm/io.hpp"

namespace hkm::cli {

namespace {

void warn(std::ostream& log, const std::string& msg) { log << "[warn] " << msg << '\n'; }
void info(std::ostream& log, const std::string& msg) { log << "[info] " << msg << '\n'; }

std::size_t parse_count(const std::string& s) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError("invalid k-range element '" + s + "'");
    }
    return v;
}

// Converts exceptions into exit status 1 with a logged message.
template <typename Fn>
int guarded(std::ostream& log, Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const std::exception& e) {
        log << "[error] " << e.what() << '\n';
        return 1;
    }
}

ExpressionMatrix load_logged(const std::string& path, std::ostream& log) {
    auto m = load_expression_matrix_file(path);
    for (const auto& w : m.warnings()) warn(log, w);
    info(log, "loaded " + std::to_string(m.n_genes()) + " genes x " + std::to_string(m.n_conditions()) +
                  " conditions from " + path);
    return m;
}

}  // namespace

HkmConfig CutOptions::to_config() const {
    if (cut_threshold && buckets) throw ValidationError("--cut-threshold and --buckets are mutually exclusive");
    HkmConfig cfg;
    if (cut_threshold) {
        if (!(*cut_threshold >= 0.0)) throw ValidationError("--cut-threshold must be >= 0");
        cfg.cut = CutPolicy::at_height(*cut_threshold);
    } else if (buckets) {
        if (*buckets < 1) throw ValidationError("--buckets must be >= 1");
        cfg.cut = CutPolicy::with_buckets(*buckets);
    }
    if (min_bucket_size < 1) throw ValidationError("--min-bucket-size must be >= 1");
    cfg.min_bucket_size = min_bucket_size;
    cfg.threads = threads;
    cfg.kmeans.threads = threads;
    return cfg;
}

SearchParams SearchOptions::params() const {
    SearchParams p = SearchParams::defaults(mode);
    if (word_size) p.word_size = *word_size;
    if (neighborhood_t) p.neighborhood_t = *neighborhood_t;
    if (x_drop) p.x_drop = *x_drop;
    if (score_cutoff) p.score_cutoff = *score_cutoff;
    if (!(evalue > 0.0)) throw ValidationError("--evalue must be positive");
    if (p.x_drop < 0) throw ValidationError("--x-drop must be >= 0");
    p.e_threshold = evalue;
    p.mask = !no_mask;
    p.threads = threads;
    return p;
}

ScoringScheme SearchOptions::scheme() const {
    ScoringScheme s = mode == SeqMode::nucleotide ? ScoringScheme::nucleotide() : ScoringScheme::protein();
    if (karlin_lambda) s.karlin_lambda = *karlin_lambda;
    if (karlin_k) s.karlin_k = *karlin_k;
    s.validate();
    return s;
}

std::vector<std::size_t> parse_k_range(const std::string& text) {
    std::vector<std::size_t> ks;
    const auto dots = text.find("..");
    if (dots != std::string::npos) {
        const auto lo = parse_count(text.substr(0, dots));
        const auto hi = parse_count(text.substr(dots + 2));
        if (lo > hi) throw ValidationError("k-range '" + text + "' is decreasing");
        for (auto k = lo; k <= hi; ++k) ks.push_back(k);
    } else {
        std::stringstream in(text);
        std::string item;
        while (std::getline(in, item, ',')) ks.push_back(parse_count(item));
    }
    if (ks.empty()) throw ValidationError("k-range is empty");
    for (auto k : ks) {
        if (k < 1) throw ValidationError("k-range '" + text + "': every k must be >= 1");
    }
    return ks;
}

SeqMode parse_mode(const std::string& text) {
    if (text == "nt") return SeqMode::nucleotide;
    if (text == "aa") return SeqMode::protein;
    throw ValidationError("--mode must be 'nt' or 'aa'");
}

int run_cluster(const ClusterOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto cfg = opt.cut.to_config();
        const auto m = load_logged(opt.input, log);
        const auto result = hkm(m, cfg);
        for (auto r : result.dropped) warn(log, "gene '" + m.gene_ids()[r] + "' has zero variance; not clustered");
        for (auto r : result.outliers) info(log, "gene '" + m.gene_ids()[r] + "' is an outlier");
        info(log, "k = " + std::to_string(result.clustering.k) + ", k-means iterations = " +
                      std::to_string(result.clustering.iterations));
        std::ostringstream out;
        write_cluster_tsv(out, m.gene_ids(), result.clustering);
        write_file_atomically(opt.output, out.str());
    });
}

int run_validate(const ValidateOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto ks = parse_k_range(opt.k_range);
        auto cfg = opt.cut.to_config();
        const auto m = load_logged(opt.input, log);
        const unsigned outer = cfg.threads;
        cfg.threads = 1;
        cfg.kmeans.threads = 1;
        const auto curve = fom_curve(m, hkm_algorithm(cfg), ks, opt.adjusted_fom ? FomMode::adjusted : FomMode::raw,
                                     outer);
        for (const auto& p : curve.points) info(log, "k = " + std::to_string(p.k) + ": FOM " + format_double(p.fom));
        std::ostringstream out;
        write_fom_csv(out, curve);
        write_file_atomically(opt.output, out.str());
    });
}

int run_bicluster(const BiclusterOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        BiclusterConfig cfg;
        cfg.delta = opt.delta;
        cfg.min_rows = opt.min_rows;
        cfg.min_cols = opt.min_cols;
        cfg.rows_hkm = opt.cut.to_config();
        cfg.cols_hkm = cfg.rows_hkm;
        const auto m = load_logged(opt.input, log);
        const auto result = hkm_bicluster(m, cfg);
        for (auto r : result.dropped_rows) warn(log, "gene '" + m.gene_ids()[r] + "' has zero variance; not clustered");
        for (auto c : result.dropped_cols) {
            warn(log, "condition '" + m.condition_ids()[c] + "' is constant across genes; not clustered");
        }
        info(log, std::to_string(result.row_clusters.size()) + " row clusters x " +
                      std::to_string(result.col_clusters.size()) + " column clusters, " +
                      std::to_string(result.biclusters.size()) + " biclusters within delta");
        std::ostringstream out;
        write_bicluster_json(out, m, result.biclusters);
        write_file_atomically(opt.output, out.str());
    });
}

int run_search(const SearchOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto params = opt.params();
        const auto scheme = opt.scheme();
        const auto queries = parse_fasta_file(opt.query, opt.mode);
        const auto db = parse_fasta_file(opt.db, opt.mode);
        const WordIndex index(db, params.word_size, opt.mode);
        std::ostringstream out;
        for (const auto& q : queries) {
            const auto hits = search(q, db, index, params, scheme);
            info(log, "query '" + q.id + "': " + std::to_string(hits.size()) + " hit(s)");
            write_hits_tsv(out, hits, opt.show_alignment);
        }
        write_file_atomically(opt.output, out.str());
    });
}

int run_report(const ReportOptions& opt, std::ostream& log) {
    return guarded(log, [&] {
        const auto params = opt.search.params();
        const auto scheme = opt.search.scheme();

        std::ifstream cluster_in(opt.clusters);
        if (!cluster_in) throw ValidationError("cannot open cluster file '" + opt.clusters + "'");
        const auto rows = read_cluster_tsv(cluster_in);

        const auto sequences = parse_fasta_file(opt.sequences, opt.search.mode);
        std::unordered_map<std::string, const SequenceRecord*> by_id;
        for (const auto& s : sequences) by_id.emplace(s.id, &s);

        // An empty database file means every gene reports "no hits".
        std::vector<SequenceRecord> db;
        {
            std::ifstream probe(opt.search.db);
            if (!probe) throw ValidationError("cannot open FASTA file '" + opt.search.db + "'");
            const std::string text((std::istreambuf_iterator<char>(probe)), std::istreambuf_iterator<char>());
            if (text.find('>') != std::string::npos) {
                std::istringstream in(text);
                db = parse_fasta(in, opt.search.mode);
            } else {
                warn(log, "database '" + opt.search.db + "' has no records");
            }
        }
        std::optional<WordIndex> index;
        if (!db.empty()) index.emplace(db, params.word_size, opt.search.mode);

        std::map<int, std::vector<const ClusterRow*>> members;
        std::unordered_map<std::string, bool> in_clusters;
        for (const auto& r : rows) {
            members[r.cluster].push_back(&r);
            in_clusters[r.gene_id] = true;
        }
        for (const auto& s : sequences) {
            if (!in_clusters.count(s.id)) warn(log, "sequence '" + s.id + "' does not match any clustered gene");
        }

        std::ostringstream out;
        const auto emit_section = [&](int cluster, const std::vector<const ClusterRow*>& genes) {
            if (cluster == 0) {
                out << "# unclustered (" << genes.size() << " genes)\n";
            } else {
                out << "# cluster " << cluster << " (" << genes.size() << " genes)\n";
            }
            for (const auto* g : genes) {
                const auto it = by_id.find(g->gene_id);
                if (it == by_id.end()) {
                    warn(log, "gene '" + g->gene_id + "' has no sequence");
                    out << g->gene_id << "\tno sequence\n";
                    continue;
                }
                std::vector<Hit> hits;
                if (index) hits = search(*it->second, db, *index, params, scheme);
                if (hits.empty()) {
                    out << g->gene_id << "\tno hits\n";
                    continue;
                }
                const auto& top = hits.front();
                out << g->gene_id << '\t' << top.subject_id << '\t' << top.score << '\t'
                    << format_evalue(top.evalue) << '\n';
            }
        };
        for (const auto& [cluster, genes] : members) {
            if (cluster != 0) emit_section(cluster, genes);
        }
        if (const auto it = members.find(0); it != members.end()) emit_section(0, it->second);
        write_file_atomically(opt.search.output, out.str());
    });
}

}  // namespace hkm::cli
