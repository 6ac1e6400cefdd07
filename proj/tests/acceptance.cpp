// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "hkm/alignment.hpp"
#include "hkm/bicluster.hpp"
#include "hkm/clustering.hpp"
#include "hkm/expression.hpp"
#include "hkm/fom.hpp"
#include "hkm/search.hpp"
#include "hkm/similarity.hpp"
#include "oracles.hpp"

using namespace hkm;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
};

using Clock = std::chrono::steady_clock;

// Runs `body`, then applies the runtime limit (seconds; <= 0 means none).
bool criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (limit_s > 0 && secs >= limit_s) {
        std::ostringstream why;
        why << "runtime " << secs << " s exceeds " << limit_s << " s";
        out.fail(why.str());
    }
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.3f s", secs);
    std::cout << (out.ok ? "PASS" : "FAIL") << "  [" << id << "] " << name << " (" << timing;
    if (limit_s > 0) std::cout << ", limit " << limit_s << " s";
    std::cout << ")";
    if (!out.detail.empty()) std::cout << ": " << out.detail;
    std::cout << std::endl;
    return out.ok;
}

std::string str(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

std::vector<double> row(const Matrix& m, Eigen::Index r) {
    return {m.row(r).data(), m.row(r).data() + m.cols()};
}

// 1. Pearson distance equals squared z-score distance over 2B.
Outcome pearson_euclidean() {
    Outcome out;
    fixture::Rng rng(101);
    std::uniform_int_distribution<int> dim(3, 50);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto b = dim(rng);
        const Matrix m = fixture::random_matrix(rng, 2, static_cast<std::size_t>(b), -10, 10);
        const auto z = standardize_values(m);
        if (!z.dropped_rows.empty()) {
            out.fail("unexpected constant row");
            continue;
        }
        const double sq = (z.values.row(0) - z.values.row(1)).squaredNorm();
        const double err = std::abs((1.0 - pearson(row(m, 0), row(m, 1))) - sq / (2.0 * b));
        worst = std::max(worst, err);
        if (!(err < 1e-9)) out.fail("trial " + std::to_string(trial) + " error " + str(err));
    }
    if (out.ok) out.detail = "max error " + str(worst);
    return out;
}

// 2. Single linkage merges and every cut match the naive oracle exactly.
Outcome linkage_oracle() {
    Outcome out;
    fixture::Rng rng(202);
    std::uniform_int_distribution<std::size_t> size(1, 12);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::uniform_int_distribution<int> small(1, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto n = size(rng);
        const bool integers = trial % 2 == 1;  // integer distances force ties
        Matrix d = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (Eigen::Index i = 0; i < d.rows(); ++i) {
            for (Eigen::Index j = i + 1; j < d.cols(); ++j) d(i, j) = d(j, i) = integers ? small(rng) : u(rng);
        }
        const auto t = single_linkage({fixture::labels("x", n), d});
        const auto want = oracle::single_linkage(d);
        const std::string at = "trial " + std::to_string(trial) + ": ";
        if (t.merges.size() != want.merges.size()) {
            out.fail(at + "merge count");
            continue;
        }
        for (std::size_t i = 0; i < t.merges.size(); ++i) {
            const auto& a = t.merges[i];
            const auto& b = want.merges[i];
            if (a.left != b.left || a.right != b.right || a.height != b.height) out.fail(at + "merge " + std::to_string(i));
        }
        for (std::size_t m = 1; m <= n; ++m) {
            if (cut_dendrogram(t, CutPolicy::with_buckets(m)).buckets != want.partitions[n - m]) {
                out.fail(at + "partition at " + std::to_string(m) + " buckets");
            }
        }
    }
    return out;
}

// 3. Lloyd's objective never increases and stops within 100 iterations.
Outcome lloyd_monotone() {
    Outcome out;
    fixture::Rng rng(303);
    std::size_t max_iter = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto n = 2 + static_cast<std::size_t>(rng() % 199);
        const auto b = 2 + static_cast<std::size_t>(rng() % 19);
        const auto k = 1 + static_cast<std::size_t>(rng() % std::min<std::size_t>(n, 10));
        const Matrix values = fixture::random_matrix(rng, n, b, -3, 3);
        HkmConfig cfg;
        cfg.cut = CutPolicy::with_buckets(k);
        const auto r = hkm::hkm(values, cfg);
        const auto& c = r.clustering;
        const std::string at = "trial " + std::to_string(trial) + ": ";
        if (c.iterations > 100) out.fail(at + std::to_string(c.iterations) + " iterations");
        if (c.objective_trace.size() != c.iterations) out.fail(at + "trace length");
        for (std::size_t i = 1; i < c.objective_trace.size(); ++i) {
            if (c.objective_trace[i] > c.objective_trace[i - 1]) {
                out.fail(at + "objective rose at iteration " + std::to_string(i + 1) + " by " +
                         str(c.objective_trace[i] - c.objective_trace[i - 1]));
            }
        }
        max_iter = std::max(max_iter, c.iterations);
    }
    if (out.ok) out.detail = "max iterations " + std::to_string(max_iter);
    return out;
}

// 4. Per-condition FOM against the flat oracle, and zero at k = n.
Outcome fom_correctness() {
    Outcome out;
    fixture::Rng rng(404);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const Matrix v = fixture::random_matrix(rng, 8, 4, -5, 5);
        const std::size_t k = 1 + rng() % 8;
        std::vector<int> a(8);
        for (std::size_t i = 0; i < 8; ++i) a[i] = static_cast<int>(i < k ? i : rng() % k);
        std::shuffle(a.begin(), a.end(), rng);
        for (std::size_t e = 0; e < 4; ++e) {
            const double err = std::abs(fom_condition(v, a, k, e) - oracle::fom_condition(v, a, e));
            worst = std::max(worst, err);
            if (!(err < 1e-12)) out.fail("trial " + std::to_string(trial) + " error " + str(err));
        }
    }
    for (std::size_t n : {2, 5, 8, 13}) {
        const ExpressionMatrix m(fixture::labels("g", n), fixture::labels("c", 6), fixture::random_matrix(rng, n, 6));
        const double f = fom_aggregate(m, hkm_algorithm(), n);
        if (f != 0.0) out.fail("fom at k = n = " + std::to_string(n) + " is " + str(f));
    }
    const auto planted = fixture::three_groups();
    const auto end = fom_curve(planted.matrix, hkm_algorithm(), {60});
    if (end.points.at(0).fom != 0.0) out.fail("planted fom at k = 60 is " + str(end.points[0].fom));
    if (out.ok) out.detail = "max error " + str(worst);
    return out;
}

// 5. FOM falls steeply to the planted k and flattens after it.
Outcome steep_decline() {
    Outcome out;
    const auto p = fixture::three_groups();
    const auto curve = fom_curve(p.matrix, hkm_algorithm(), {1, 2, 3, 4, 5, 6});
    std::vector<double> f;
    for (const auto& pt : curve.points) f.push_back(pt.fom);
    std::ostringstream d;
    d.precision(4);
    d << "fom(1..6) =";
    for (double v : f) d << ' ' << v;
    out.detail = d.str();
    if (f.size() != 6) {
        out.fail("curve has " + std::to_string(f.size()) + " points");
        return out;
    }
    if (!(f[2] <= 0.5 * f[0])) out.fail(d.str() + "; fom(3) > 0.5 fom(1)");
    if (!(std::abs(f[3] - f[2]) <= 0.2 * std::abs(f[1] - f[0]))) out.fail(d.str() + "; |fom4-fom3| > 0.2 |fom2-fom1|");
    return out;
}

// Temporary directory removed on scope exit.
struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("hkm_acceptance_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void save_matrix(const std::string& path, const ExpressionMatrix& m) {
    std::ofstream out(path, std::ios::binary);
    write_expression_matrix(out, m);
}

int run_cli(const std::string& args, const TempDir& dir) {
    const std::string cmd = std::string(HKM_CLI_PATH) + " " + args + " > " + (dir / "cli.log") + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

// 6. The 21-gene fixture yields three clusters of sizes {8, 6, 7} as TSV.
Outcome table_shape() {
    Outcome out;
    TempDir dir;
    const auto p = fixture::twenty_one_genes();
    save_matrix(dir / "genes.tsv", p.matrix);
    if (run_cli("cluster --input " + (dir / "genes.tsv") + " --output " + (dir / "clusters.tsv"), dir) != 0) {
        out.fail("cluster exited non-zero: " + slurp(dir / "cli.log"));
        return out;
    }
    std::istringstream in(slurp(dir / "clusters.tsv"));
    std::string line;
    std::size_t i = 0;
    std::map<int, std::size_t> sizes;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            out.fail("malformed line '" + line + "'");
            continue;
        }
        if (i >= p.matrix.n_genes() || line.substr(0, tab) != p.matrix.gene_ids()[i]) {
            out.fail("row " + std::to_string(i) + " is not the matrix gene order");
        }
        const std::string id = line.substr(tab + 1);
        if (id.empty() || !std::all_of(id.begin(), id.end(), ::isdigit) || std::stoi(id) < 1) {
            out.fail("bad cluster number '" + id + "'");
            continue;
        }
        ++sizes[std::stoi(id)];
        ++i;
    }
    if (i != 21) out.fail(std::to_string(i) + " rows");
    std::multiset<std::size_t> got;
    std::ostringstream d;
    d << "sizes";
    for (const auto& [id, n] : sizes) {
        got.insert(n);
        d << ' ' << n;
    }
    if (sizes.size() != 3 || got != std::multiset<std::size_t>{6, 7, 8}) out.fail(d.str());
    if (out.ok) out.detail = d.str();
    return out;
}

std::vector<std::size_t> pick(fixture::Rng& rng, std::size_t n, std::size_t count) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(count);
    std::sort(v.begin(), v.end());
    return v;
}

// 7. Residue vanishes on additive blocks, matches the oracle, and the
// checkerboard yields exactly its four blocks.
Outcome bicluster_residue() {
    Outcome out;
    fixture::Rng rng(707);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix a = fixture::random_matrix(rng, 12, 9, -10, 10);
        const auto rows = pick(rng, 12, 2 + rng() % 10);
        const auto cols = pick(rng, 9, 2 + rng() % 7);
        const Matrix r = fixture::random_matrix(rng, rows.size(), 1, -10, 10);
        const Matrix c = fixture::random_matrix(rng, 1, cols.size(), -10, 10);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                a(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j])) =
                    r(static_cast<Eigen::Index>(i), 0) + c(0, static_cast<Eigen::Index>(j));
            }
        }
        const double h = mean_squared_residue(a, rows, cols);
        if (!(std::abs(h) < 1e-12)) out.fail("additive trial " + std::to_string(trial) + " H = " + str(h));
    }
    const std::vector<std::size_t> all_rows{0, 1, 2, 3, 4}, all_cols{0, 1, 2, 3};
    for (int trial = 0; trial < 500; ++trial) {
        const Matrix a = fixture::random_matrix(rng, 5, 4, -5, 5);
        const double err = std::abs(mean_squared_residue(a, all_rows, all_cols) - oracle::residue(a, all_rows, all_cols));
        if (!(err < 1e-12)) out.fail("5x4 trial " + std::to_string(trial) + " error " + str(err));
    }
    const auto cb = fixture::checkerboard();
    BiclusterConfig cfg;
    cfg.delta = 0.1;
    const auto result = hkm_bicluster(cb.matrix, cfg);
    std::set<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> got, want;
    for (const auto& b : result.biclusters) got.insert({b.rows, b.cols});
    for (const auto& rows : cb.row_blocks) {
        for (const auto& cols : cb.col_blocks) want.insert({rows, cols});
    }
    if (result.biclusters.size() != 4 || got != want) {
        out.fail("checkerboard gave " + std::to_string(result.biclusters.size()) + " biclusters, not the 4 planted blocks");
    }
    return out;
}

std::vector<Seed> exact_seeds(std::string_view q, std::string_view s, std::size_t w) {
    std::vector<Seed> seeds;
    for (std::size_t i = 0; i + w <= q.size(); ++i) {
        for (std::size_t j = 0; j + w <= s.size(); ++j) {
            if (q.substr(i, w) == s.substr(j, w)) seeds.push_back({i, j});
        }
    }
    return seeds;
}

// 8. Smith-Waterman equals the reference DP; find_hsps misses no qualifying
// ungapped segment.
Outcome alignment_oracles() {
    Outcome out;
    fixture::Rng rng(808);
    const ScoringScheme schemes[] = {ScoringScheme::nucleotide(), ScoringScheme::nucleotide(2, -1, -3, -1),
                                     ScoringScheme::protein()};
    std::uniform_int_distribution<std::size_t> short_len(1, 40);
    for (int trial = 0; trial < 500; ++trial) {
        const auto& scheme = schemes[trial % 3];
        const auto q = fixture::random_residues(rng, short_len(rng), scheme.mode);
        auto s = fixture::random_residues(rng, short_len(rng), scheme.mode);
        if (trial % 3 == 0) s = fixture::mutate(rng, q, q.size() / 5, scheme.mode) + s.substr(0, s.size() / 2);
        const int got = smith_waterman(q, s, scheme).score;
        const int want = oracle::local_alignment_score(q, s, scheme);
        if (got != want) out.fail("sw trial " + std::to_string(trial) + ": " + std::to_string(got) + " vs " + std::to_string(want));
    }

    // X-drop is a truncating heuristic, so completeness is checked with an
    // unbounded drop.
    const auto nt = SeqMode::nucleotide;
    const ScoringScheme hsp_schemes[] = {ScoringScheme::nucleotide(), ScoringScheme::nucleotide(1, -1, -5, -2)};
    std::uniform_int_distribution<std::size_t> long_len(1, 200);
    constexpr int unlimited = 1 << 24;
    std::size_t segments = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto& scheme = hsp_schemes[trial % 2];
        const auto q = fixture::random_residues(rng, long_len(rng), nt);
        auto s = fixture::random_residues(rng, long_len(rng), nt);
        if (trial % 2 == 0) s = fixture::mutate(rng, q, q.size() / 10, nt);
        const std::size_t w = 4 + static_cast<std::size_t>(trial % 8);
        const int cutoff = trial % 2 == 0 ? 10 : 6;
        const auto hsps = find_hsps(q, s, exact_seeds(q, s, w), w, scheme, unlimited, cutoff);
        std::set<std::tuple<std::ptrdiff_t, std::size_t, std::size_t, int>> got;
        for (const auto& h : hsps) got.insert({h.diagonal(), h.query_start, h.query_end, h.score});
        for (const auto& seg : oracle::ungapped_segments(q, s, w, scheme, cutoff)) {
            ++segments;
            if (!got.count({seg.diagonal, seg.query_start, seg.query_end, seg.score})) {
                out.fail("hsp trial " + std::to_string(trial) + ": missing segment on diagonal " + std::to_string(seg.diagonal));
            }
        }
    }
    if (out.ok) out.detail = std::to_string(segments) + " oracle segments all reported";
    return out;
}

// 9. Every subcommand gives byte-identical output across repeated runs and
// thread counts.
Outcome determinism() {
    Outcome out;
    TempDir dir;
    save_matrix(dir / "planted.tsv", fixture::three_groups().matrix);
    save_matrix(dir / "checker.tsv", fixture::checkerboard().matrix);
    const auto ps = fixture::planted_search();
    {
        std::ofstream db(dir / "db.fa"), q(dir / "q.fa");
        for (const auto& s : ps.db) db << '>' << s.id << '\n' << s.residues << '\n';
        q << ">" << ps.query.id << '\n' << ps.query.residues << '\n';
    }
    const std::vector<std::pair<std::string, std::string>> commands{
        {"cluster", "cluster --input " + (dir / "planted.tsv") + " --output "},
        {"validate", "validate --input " + (dir / "planted.tsv") + " --k-range 1..6 --output "},
        {"bicluster", "bicluster --input " + (dir / "checker.tsv") + " --delta 0.1 --output "},
        {"search", "search --query " + (dir / "q.fa") + " --db " + (dir / "db.fa") + " --show-alignment --output "},
    };
    for (const auto& [name, base] : commands) {
        std::vector<std::string> outputs;
        for (int threads : {1, 1, 4, 4}) {
            const std::string path = dir / (name + "_" + std::to_string(outputs.size()));
            if (run_cli(base + path + " --threads " + std::to_string(threads), dir) != 0) {
                out.fail(name + " exited non-zero: " + slurp(dir / "cli.log"));
                break;
            }
            outputs.push_back(slurp(path));
        }
        if (outputs.size() != 4) continue;
        if (outputs[0].empty()) out.fail(name + " produced empty output");
        for (std::size_t i = 1; i < outputs.size(); ++i) {
            if (outputs[i] != outputs[0]) out.fail(name + " run " + std::to_string(i + 1) + " differs");
        }
    }
    return out;
}

}  // namespace

int main() {
    bool all = true;
    all &= criterion(1, "Pearson / z-score Euclidean equivalence", 1.0, pearson_euclidean);
    all &= criterion(2, "single linkage matches the naive oracle", 5.0, linkage_oracle);
    all &= criterion(3, "Lloyd monotonicity and termination", 10.0, lloyd_monotone);
    all &= criterion(4, "FOM correctness", 0.0, fom_correctness);
    all &= criterion(5, "steep FOM decline on planted 3-cluster data", 30.0, steep_decline);
    all &= criterion(6, "21-gene fixture cluster shape and TSV format", 0.0, table_shape);
    all &= criterion(7, "bicluster residue and checkerboard recovery", 0.0, bicluster_residue);
    all &= criterion(8, "alignment oracles", 30.0, alignment_oracles);
    all &= criterion(9, "end-to-end determinism", 0.0, determinism);
    std::cout << (all ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
    return all ? 0 : 1;
}
