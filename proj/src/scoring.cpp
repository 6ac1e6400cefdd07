#include "hkm/scoring.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

#include "hkm/error.hpp"

namespace hkm {

const std::vector<int>& blosum62() {
    // clang-format off
    static const std::vector<int> matrix = {
    //   A   R   N   D   C   Q   E   G   H   I   L   K   M   F   P   S   T   W   Y   V
         4, -1, -2, -2,  0, -1, -1,  0, -2, -1, -1, -1, -1, -2, -1,  1,  0, -3, -2,  0,  // A
        -1,  5,  0, -2, -3,  1,  0, -2,  0, -3, -2,  2, -1, -3, -2, -1, -1, -3, -2, -3,  // R
        -2,  0,  6,  1, -3,  0,  0,  0,  1, -3, -3,  0, -2, -3, -2,  1,  0, -4, -2, -3,  // N
        -2, -2,  1,  6, -3,  0,  2, -1, -1, -3, -4, -1, -3, -3, -1,  0, -1, -4, -3, -3,  // D
         0, -3, -3, -3,  9, -3, -4, -3, -3, -1, -1, -3, -1, -2, -3, -1, -1, -2, -2, -1,  // C
        -1,  1,  0,  0, -3,  5,  2, -2,  0, -3, -2,  1,  0, -3, -1,  0, -1, -2, -1, -2,  // Q
        -1,  0,  0,  2, -4,  2,  5, -2,  0, -3, -3,  1, -2, -3, -1,  0, -1, -3, -2, -2,  // E
         0, -2,  0, -1, -3, -2, -2,  6, -2, -4, -4, -2, -3, -3, -2,  0, -2, -2, -3, -3,  // G
        -2,  0,  1, -1, -3,  0,  0, -2,  8, -3, -3, -1, -2, -1, -2, -1, -2, -2,  2, -3,  // H
        -1, -3, -3, -3, -1, -3, -3, -4, -3,  4,  2, -3,  1,  0, -3, -2, -1, -3, -1,  3,  // I
        -1, -2, -3, -4, -1, -2, -3, -4, -3,  2,  4, -2,  2,  0, -3, -2, -1, -2, -1,  1,  // L
        -1,  2,  0, -1, -3,  1,  1, -2, -1, -3, -2,  5, -1, -3, -1,  0, -1, -3, -2, -2,  // K
        -1, -1, -2, -3, -1,  0, -2, -3, -2,  1,  2, -1,  5,  0, -2, -1, -1, -1, -1,  1,  // M
        -2, -3, -3, -3, -2, -3, -3, -3, -1,  0,  0, -3,  0,  6, -4, -2, -2,  1,  3, -1,  // F
        -1, -2, -2, -1, -3, -1, -1, -2, -2, -3, -3, -1, -2, -4,  7, -1, -1, -4, -3, -2,  // P
         1, -1,  1,  0, -1,  0,  0,  0, -1, -2, -2,  0, -1, -2, -1,  4,  1, -3, -2, -2,  // S
         0, -1,  0, -1, -1, -1, -1, -2, -2, -1, -1, -1, -1, -2, -1,  1,  5, -2, -2,  0,  // T
        -3, -3, -4, -4, -2, -2, -3, -2, -2, -3, -2, -3, -1,  1, -4, -3, -2, 11,  2, -3,  // W
        -2, -2, -2, -3, -2, -1, -2, -3,  2, -1, -1, -2, -1,  3, -3, -2, -2,  2,  7, -1,  // Y
         0, -3, -3, -3, -1, -2, -2, -3, -3,  3,  1, -2,  1, -1, -2, -2,  0, -3, -1,  4,  // V
    };
    // clang-format on
    return matrix;
}

int ScoringScheme::row_max(int a) const {
    const auto size = alphabet_size();
    const auto begin = substitution.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(a) * size);
    return *std::max_element(begin, begin + static_cast<std::ptrdiff_t>(size));
}

void ScoringScheme::validate() const {
    const auto size = alphabet_size();
    if (substitution.size() != size * size) throw ValidationError("substitution matrix has the wrong size");
    for (std::size_t i = 0; i < size; ++i) {
        for (std::size_t j = 0; j < size; ++j) {
            if (substitution[i * size + j] != substitution[j * size + i]) {
                throw ValidationError("substitution matrix is not symmetric");
            }
        }
    }
    if (mode == SeqMode::nucleotide) {
        for (std::size_t i = 0; i < size; ++i) {
            for (std::size_t j = 0; j < size; ++j) {
                const int s = substitution[i * size + j];
                if ((i == j && s <= 0) || (i != j && s >= 0)) {
                    throw ValidationError("nucleotide scores need match > 0 > mismatch");
                }
            }
        }
    }
    if (gap_extend > 0 || gap_open > gap_extend) {
        throw ValidationError("gap penalties need gap_open <= gap_extend <= 0");
    }
    if (!(karlin_lambda > 0.0) || !(karlin_k > 0.0)) throw ValidationError("Karlin-Altschul constants must be positive");
}

ScoringScheme ScoringScheme::nucleotide(int match, int mismatch, int gap_open, int gap_extend) {
    ScoringScheme s;
    s.mode = SeqMode::nucleotide;
    s.substitution.assign(16, mismatch);
    for (std::size_t i = 0; i < 4; ++i) s.substitution[i * 4 + i] = match;
    s.gap_open = gap_open;
    s.gap_extend = gap_extend;
    s.validate();
    return s;
}

ScoringScheme ScoringScheme::protein(int gap_open, int gap_extend) {
    return protein(blosum62(), gap_open, gap_extend);
}

ScoringScheme ScoringScheme::protein(std::vector<int> matrix, int gap_open, int gap_extend) {
    ScoringScheme s;
    s.mode = SeqMode::protein;
    s.substitution = std::move(matrix);
    s.gap_open = gap_open;
    s.gap_extend = gap_extend;
    s.validate();
    return s;
}

std::vector<int> read_substitution_matrix(std::istream& in) {
    const std::size_t size = kAminoAcids.size();
    std::vector<int> out(size * size, 0);
    std::vector<bool> seen(size * size, false);
    std::vector<int> column_code;
    bool have_header = false;
    std::string line;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        std::string token;
        if (!have_header) {
            while (fields >> token) {
                if (token.size() != 1) throw ParseError("substitution matrix header token '" + token + "'");
                column_code.push_back(residue_code(SeqMode::protein, token[0]));
            }
            have_header = true;
            continue;
        }
        fields >> token;
        if (token.size() != 1) throw ParseError("substitution matrix row label '" + token + "'");
        const int row = residue_code(SeqMode::protein, token[0]);
        for (std::size_t c = 0; c < column_code.size(); ++c) {
            int value = 0;
            if (!(fields >> value)) throw ParseError("substitution matrix row '" + token + "' is short");
            if (row < 0 || column_code[c] < 0) continue;
            const auto idx = static_cast<std::size_t>(row) * size + static_cast<std::size_t>(column_code[c]);
            out[idx] = value;
            seen[idx] = true;
        }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
        throw ParseError("substitution matrix does not cover every amino-acid pair");
    }
    return out;
}

std::vector<int> read_substitution_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open substitution matrix '" + path + "'");
    return read_substitution_matrix(in);
}

}  // namespace hkm
