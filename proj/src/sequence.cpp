#include "hkm/sequence.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>

#include "hkm/error.hpp"

namespace hkm {

namespace {

std::array<std::int8_t, 256> make_code_table(std::string_view letters) {
    std::array<std::int8_t, 256> table{};
    table.fill(-1);
    for (std::size_t i = 0; i < letters.size(); ++i) {
        table[static_cast<unsigned char>(letters[i])] = static_cast<std::int8_t>(i);
    }
    return table;
}

const std::array<std::int8_t, 256>& code_table(SeqMode mode) {
    static const auto nt = make_code_table(kNucleotides);
    static const auto aa = make_code_table(kAminoAcids);
    return mode == SeqMode::nucleotide ? nt : aa;
}

}  // namespace

std::string_view alphabet(SeqMode mode) {
    return mode == SeqMode::nucleotide ? kNucleotides : kAminoAcids;
}

const char* mode_name(SeqMode mode) {
    return mode == SeqMode::nucleotide ? "nt" : "aa";
}

int residue_code(SeqMode mode, char c) {
    return code_table(mode)[static_cast<unsigned char>(c)];
}

SequenceRecord make_sequence(std::string id, std::string residues, SeqMode mode) {
    if (residues.empty()) throw ValidationError("sequence '" + id + "' is empty");
    for (std::size_t i = 0; i < residues.size(); ++i) {
        residues[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(residues[i])));
        if (residue_code(mode, residues[i]) < 0) {
            throw ParseError("sequence '" + id + "': invalid " + mode_name(mode) + " residue '" +
                             std::string(1, residues[i]) + "' at position " + std::to_string(i));
        }
    }
    SequenceRecord rec;
    rec.mask.assign(residues.size(), false);
    rec.id = std::move(id);
    rec.residues = std::move(residues);
    rec.mode = mode;
    return rec;
}

std::vector<SequenceRecord> parse_fasta(std::istream& in, SeqMode mode) {
    std::vector<SequenceRecord> records;
    std::string line;
    std::string id;
    std::string body;
    bool open = false;
    std::size_t line_no = 0;

    const auto flush = [&] {
        if (open) records.push_back(make_sequence(std::move(id), std::move(body), mode));
        id.clear();
        body.clear();
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '>') {
            flush();
            const auto start = line.find_first_not_of(" \t", 1);
            if (start == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": empty FASTA header");
            const auto end = line.find_first_of(" \t", start);
            id = line.substr(start, end == std::string::npos ? std::string::npos : end - start);
            open = true;
            continue;
        }
        if (!open) throw ParseError("line " + std::to_string(line_no) + ": residues before the first '>' header");
        for (char c : line) {
            if (c != ' ' && c != '\t') body.push_back(c);
        }
    }
    flush();
    if (records.empty()) throw ValidationError("FASTA input contains no records");
    return records;
}

std::vector<SequenceRecord> parse_fasta_file(const std::string& path, SeqMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open FASTA file '" + path + "'");
    return parse_fasta(in, mode);
}

double window_entropy(std::string_view window) {
    std::array<std::size_t, 256> counts{};
    for (char c : window) ++counts[static_cast<unsigned char>(c)];
    const double n = static_cast<double>(window.size());
    double h = 0.0;
    for (auto count : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / n;
        h -= p * std::log2(p);
    }
    return h;
}

SequenceRecord mask_low_complexity(SequenceRecord s, std::size_t window, double threshold) {
    if (window < 2) throw ValidationError("masking window must be at least 2");
    s.mask.assign(s.residues.size(), false);
    if (s.residues.size() < window) return s;
    const std::string_view r = s.residues;
    for (std::size_t start = 0; start + window <= r.size(); ++start) {
        if (window_entropy(r.substr(start, window)) < threshold) {
            for (std::size_t i = start; i < start + window; ++i) s.mask[i] = true;
        }
    }
    return s;
}

}  // namespace hkm
