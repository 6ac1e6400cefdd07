#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hkm/alignment.hpp"
#include "hkm/scoring.hpp"
#include "hkm/sequence.hpp"

namespace hkm {

struct Posting {
    std::uint32_t sequence;
    std::uint32_t offset;
};

// Exact w-mer index over a sequence database. Immutable after construction.
class WordIndex {
public:
    // Throws ValidationError("no indexable words") if no sequence has length >= w.
    WordIndex(std::span<const SequenceRecord> db, std::size_t word_size, SeqMode mode);

    std::size_t word_size() const { return word_size_; }
    SeqMode mode() const { return mode_; }
    std::size_t key_count() const { return postings_.size(); }

    std::span<const Posting> lookup(std::string_view word) const;

    // Indexed words, sorted.
    std::vector<std::string> words() const;

    // Packs a word into an integer key; the word must be valid for `mode`.
    static std::uint64_t encode(std::string_view word, SeqMode mode);
    static std::size_t max_word_size(SeqMode mode);

private:
    std::size_t word_size_;
    SeqMode mode_;
    std::unordered_map<std::uint64_t, std::vector<Posting>> postings_;
};

WordIndex build_word_index(std::span<const SequenceRecord> db, std::size_t word_size, SeqMode mode);

// Every word of the same length scoring >= threshold against `word`, in
// lexicographic alphabet-code order.
std::vector<std::string> neighborhood(std::string_view word, int threshold, const ScoringScheme& scheme);

struct Seed {
    std::size_t query_offset;
    std::size_t subject_offset;

    friend bool operator==(const Seed&, const Seed&) = default;
    friend auto operator<=>(const Seed&, const Seed&) = default;
};

// Ungapped high-scoring segment pair; coordinates are 0-based half-open.
struct Hsp {
    std::size_t query_start = 0;
    std::size_t query_end = 0;
    std::size_t subject_start = 0;
    std::size_t subject_end = 0;
    int score = 0;
    double evalue = 0.0;

    std::ptrdiff_t diagonal() const {
        return static_cast<std::ptrdiff_t>(subject_start) - static_cast<std::ptrdiff_t>(query_start);
    }
    std::size_t length() const { return query_end - query_start; }
};

// Extends each seed without gaps in both directions, stopping a direction
// once the running score falls more than x_drop below its best; the
// best-scoring extension (shortest on ties) is kept. Returns HSPs scoring at
// least s_cutoff, deduplicated by (diagonal, query_start, query_end), ordered
// by descending score then query_start then subject_start. E-values are
// computed against the single subject.
std::vector<Hsp> find_hsps(std::string_view query, std::string_view subject, std::span<const Seed> seeds,
                           std::size_t word_size, const ScoringScheme& scheme, int x_drop, int s_cutoff);

// K * m * n * exp(-lambda * score).
double evalue(int score, std::size_t query_length, std::size_t db_length, const ScoringScheme& scheme);

// Greedy best-score-first chain: starting from the top HSP, add each HSP that
// lies strictly before or after every chained HSP in both sequences. Returned
// in query order.
std::vector<Hsp> chain_hsps(std::vector<Hsp> hsps);

struct SearchParams {
    std::size_t word_size = 11;
    int neighborhood_t = 11;  // protein mode only
    int x_drop = 20;
    int score_cutoff = 20;
    double e_threshold = 10.0;
    bool mask = true;
    std::size_t mask_window = 12;
    double mask_threshold = 1.0;
    unsigned threads = 1;

    static SearchParams defaults(SeqMode mode);
};

struct Hit {
    std::string query_id;
    std::string subject_id;
    std::size_t subject_index = 0;
    int score = 0;  // gapped local alignment score
    double evalue = 0.0;
    Alignment alignment;     // coordinates into the full query and subject
    std::vector<Hsp> chain;  // ungapped segments the alignment was built from
};

// Seeded search: mask the query, look up (neighborhood) words, extend to
// HSPs, chain them, align the chained region with Smith-Waterman, and report
// hits with E below the threshold sorted by E, then subject id.
std::vector<Hit> search(const SequenceRecord& query, std::span<const SequenceRecord> db, const WordIndex& index,
                        const SearchParams& params, const ScoringScheme& scheme);
std::vector<Hit> search(const SequenceRecord& query, std::span<const SequenceRecord> db, const SearchParams& params,
                        const ScoringScheme& scheme);

}  // namespace hkm
