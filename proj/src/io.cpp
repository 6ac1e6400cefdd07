#include "hkm/io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "hkm/error.hpp"

namespace hkm {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

std::string format_evalue(double v) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 6);
    return std::string(buf.data(), ptr);
}

void write_cluster_tsv(std::ostream& out, const std::vector<std::string>& gene_ids, const Clustering& clustering) {
    if (gene_ids.size() != clustering.assignment.size()) {
        throw ValidationError("cluster output: gene count does not match the assignment");
    }
    for (std::size_t g = 0; g < gene_ids.size(); ++g) {
        const int c = clustering.assignment[g];
        out << gene_ids[g] << '\t' << (c == kUnassigned ? 0 : c + 1) << '\n';
    }
}

std::vector<ClusterRow> read_cluster_tsv(std::istream& in) {
    std::vector<ClusterRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
            throw ParseError("cluster file line " + std::to_string(line_no) + ": expected geneId<TAB>cluster");
        }
        ClusterRow row;
        row.gene_id = line.substr(0, tab);
        const char* first = line.data() + tab + 1;
        const char* last = line.data() + line.size();
        const auto [ptr, ec] = std::from_chars(first, last, row.cluster);
        if (ec != std::errc() || ptr != last || row.cluster < 0) {
            throw ParseError("cluster file line " + std::to_string(line_no) + ": bad cluster number");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_fom_csv(std::ostream& out, const FomCurve& curve) {
    out << "k,fom\n";
    for (const auto& p : curve.points) out << p.k << ',' << format_double(p.fom) << '\n';
}

void write_bicluster_json(std::ostream& out, const ExpressionMatrix& m, const std::vector<Bicluster>& biclusters) {
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
    for (const auto& b : biclusters) {
        nlohmann::ordered_json rec;
        auto& rows = rec["rows"] = nlohmann::ordered_json::array();
        for (auto r : b.rows) rows.push_back(m.gene_ids()[r]);
        auto& cols = rec["cols"] = nlohmann::ordered_json::array();
        for (auto c : b.cols) cols.push_back(m.condition_ids()[c]);
        rec["residue"] = b.residue;
        records.push_back(std::move(rec));
    }
    out << records.dump(2) << '\n';
}

void write_hits_tsv(std::ostream& out, const std::vector<Hit>& hits, bool show_alignment) {
    for (const auto& h : hits) {
        const auto& a = h.alignment;
        out << h.query_id << '\t' << h.subject_id << '\t' << h.score << '\t' << format_evalue(h.evalue) << '\t'
            << a.query_start << '\t' << a.query_end << '\t' << a.subject_start << '\t' << a.subject_end << '\n';
        if (show_alignment) {
            out << "# Query  " << a.aligned_query << '\n';
            out << "#        " << a.midline() << '\n';
            out << "# Sbjct  " << a.aligned_subject << '\n';
        }
    }
}

void write_file_atomically(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write output file '" + path + "'");
        out << content;
        out.flush();
        if (!out) {
            out.close();
            std::error_code ignored;
            fs::remove(tmp, ignored);
            throw ValidationError("failed writing output file '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ignored;
        fs::remove(tmp, ignored);
        throw ValidationError("cannot move output into place at '" + path + "': " + ec.message());
    }
}

}  // namespace hkm
