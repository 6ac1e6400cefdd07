#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hkm {

enum class SeqMode { nucleotide, protein };

inline constexpr std::string_view kNucleotides = "ACGT";
inline constexpr std::string_view kAminoAcids = "ARNDCQEGHILKMFPSTWYV";

std::string_view alphabet(SeqMode mode);
const char* mode_name(SeqMode mode);

// Residue code 0..alphabet size-1, or -1 for a character outside the alphabet.
// Expects uppercase input.
int residue_code(SeqMode mode, char c);

struct SequenceRecord {
    std::string id;
    std::string residues;    // uppercase, every character in the mode's alphabet
    std::vector<bool> mask;  // true = low complexity, may not seed
    SeqMode mode = SeqMode::nucleotide;

    std::size_t size() const { return residues.size(); }
};

// Uppercases and validates; throws ParseError naming the offending position.
SequenceRecord make_sequence(std::string id, std::string residues, SeqMode mode);

// Records in file order. Ids are the header text up to the first whitespace.
// Throws ParseError for residues outside the alphabet (with record id and
// 0-based position) and ValidationError for an empty input.
std::vector<SequenceRecord> parse_fasta(std::istream& in, SeqMode mode);
std::vector<SequenceRecord> parse_fasta_file(const std::string& path, SeqMode mode);

// Flags every position covered by a window whose base-2 Shannon entropy is
// below `threshold`. Sequences shorter than the window are left unmasked.
SequenceRecord mask_low_complexity(SequenceRecord s, std::size_t window, double threshold);

double window_entropy(std::string_view window);

}  // namespace hkm
