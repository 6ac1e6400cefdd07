#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "hkm/scoring.hpp"

namespace hkm {

// Local alignment; coordinates are 0-based half-open into the aligned inputs.
struct Alignment {
    std::string aligned_query;
    std::string aligned_subject;
    int score = 0;
    std::size_t query_start = 0;
    std::size_t query_end = 0;
    std::size_t subject_start = 0;
    std::size_t subject_end = 0;

    bool empty() const { return aligned_query.empty(); }
    // '|' on identical columns, ' ' elsewhere.
    std::string midline() const;
};

// Optimal local alignment with affine gaps (Gotoh). The first maximal cell in
// row-major order ends the alignment; traceback prefers diagonal, then up
// (gap in subject), then left (gap in query). Score 0 yields an empty alignment.
Alignment smith_waterman(std::string_view query, std::string_view subject, const ScoringScheme& scheme);

// Score of an alignment under `scheme`, treating each maximal run of '-' in
// one row as a single gap.
int rescore_alignment(const Alignment& a, const ScoringScheme& scheme);

}  // namespace hkm
