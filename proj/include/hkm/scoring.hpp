#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hkm/sequence.hpp"

namespace hkm {

// Substitution scores, affine gap penalties and Karlin-Altschul constants.
// A gap of length L scores gap_open + (L - 1) * gap_extend.
struct ScoringScheme {
    SeqMode mode = SeqMode::nucleotide;
    std::vector<int> substitution;  // row-major, alphabet size squared
    int gap_open = -5;
    int gap_extend = -2;
    double karlin_lambda = 0.318;
    double karlin_k = 0.13;

    std::size_t alphabet_size() const { return alphabet(mode).size(); }

    int score_codes(int a, int b) const {
        return substitution[static_cast<std::size_t>(a) * alphabet_size() + static_cast<std::size_t>(b)];
    }
    int score(char a, char b) const { return score_codes(residue_code(mode, a), residue_code(mode, b)); }

    // Best achievable substitution score in a row (used to bound neighborhoods).
    int row_max(int a) const;

    // Throws ValidationError if the scheme is inconsistent.
    void validate() const;

    static ScoringScheme nucleotide(int match = 1, int mismatch = -3, int gap_open = -5, int gap_extend = -2);
    static ScoringScheme protein(int gap_open = -11, int gap_extend = -1);
    static ScoringScheme protein(std::vector<int> matrix, int gap_open = -11, int gap_extend = -1);
};

// Built-in BLOSUM62 in kAminoAcids order.
const std::vector<int>& blosum62();

// Reads an NCBI-style matrix (comment lines '#', a header row of residue
// letters, then one labelled row per residue). Columns for letters outside
// the amino-acid alphabet (B, Z, X, *) are ignored. Returns scores in
// kAminoAcids order.
std::vector<int> read_substitution_matrix(std::istream& in);
std::vector<int> read_substitution_matrix_file(const std::string& path);

}  // namespace hkm
