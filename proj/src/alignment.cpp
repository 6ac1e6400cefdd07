#include "hkm/alignment.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "hkm/error.hpp"

namespace hkm {

namespace {

constexpr int kNegInf = std::numeric_limits<int>::min() / 4;

struct Grid {
    std::size_t cols;
    std::vector<int> cells;

    Grid(std::size_t rows, std::size_t c, int fill) : cols(c), cells(rows * c, fill) {}
    int& operator()(std::size_t i, std::size_t j) { return cells[i * cols + j]; }
    int operator()(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
};

}  // namespace

std::string Alignment::midline() const {
    std::string line(aligned_query.size(), ' ');
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (aligned_query[i] != '-' && aligned_query[i] == aligned_subject[i]) line[i] = '|';
    }
    return line;
}

Alignment smith_waterman(std::string_view query, std::string_view subject, const ScoringScheme& scheme) {
    if (query.empty() || subject.empty()) throw ValidationError("smith_waterman needs non-empty sequences");
    const std::size_t m = query.size();
    const std::size_t n = subject.size();
    const int open = scheme.gap_open;
    const int extend = scheme.gap_extend;

    std::vector<int> qc(m);
    std::vector<int> sc(n);
    for (std::size_t i = 0; i < m; ++i) qc[i] = residue_code(scheme.mode, query[i]);
    for (std::size_t j = 0; j < n; ++j) sc[j] = residue_code(scheme.mode, subject[j]);

    // h: best ending at (i, j); up: ending with a gap in the subject;
    // left: ending with a gap in the query.
    Grid h(m + 1, n + 1, 0);
    Grid up(m + 1, n + 1, kNegInf);
    Grid left(m + 1, n + 1, kNegInf);
    int best = 0;
    std::size_t bi = 0;
    std::size_t bj = 0;
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            left(i, j) = std::max(h(i, j - 1) + open, left(i, j - 1) + extend);
            up(i, j) = std::max(h(i - 1, j) + open, up(i - 1, j) + extend);
            const int diag = h(i - 1, j - 1) + scheme.score_codes(qc[i - 1], sc[j - 1]);
            const int v = std::max({0, diag, up(i, j), left(i, j)});
            h(i, j) = v;
            if (v > best) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }

    Alignment out;
    out.score = best;
    if (best == 0) return out;

    enum class State { match, up, left };
    State state = State::match;
    std::size_t i = bi;
    std::size_t j = bj;
    std::string aq;
    std::string as;
    while (true) {
        if (state == State::match) {
            const int v = h(i, j);
            if (v == 0) break;
            if (v == h(i - 1, j - 1) + scheme.score_codes(qc[i - 1], sc[j - 1])) {
                aq.push_back(query[i - 1]);
                as.push_back(subject[j - 1]);
                --i;
                --j;
            } else if (v == up(i, j)) {
                state = State::up;
            } else {
                state = State::left;
            }
        } else if (state == State::up) {
            aq.push_back(query[i - 1]);
            as.push_back('-');
            if (up(i, j) == h(i - 1, j) + open) state = State::match;
            --i;
        } else {
            aq.push_back('-');
            as.push_back(subject[j - 1]);
            if (left(i, j) == h(i, j - 1) + open) state = State::match;
            --j;
        }
    }
    std::reverse(aq.begin(), aq.end());
    std::reverse(as.begin(), as.end());
    out.aligned_query = std::move(aq);
    out.aligned_subject = std::move(as);
    out.query_start = i;
    out.query_end = bi;
    out.subject_start = j;
    out.subject_end = bj;
    return out;
}

int rescore_alignment(const Alignment& a, const ScoringScheme& scheme) {
    if (a.aligned_query.size() != a.aligned_subject.size()) {
        throw ValidationError("alignment rows differ in length");
    }
    int total = 0;
    char previous_gap = 0;  // 'q', 's' or 0
    for (std::size_t c = 0; c < a.aligned_query.size(); ++c) {
        const char q = a.aligned_query[c];
        const char s = a.aligned_subject[c];
        if (q == '-' && s == '-') throw ValidationError("alignment column with two gaps");
        if (q == '-') {
            total += previous_gap == 'q' ? scheme.gap_extend : scheme.gap_open;
            previous_gap = 'q';
        } else if (s == '-') {
            total += previous_gap == 's' ? scheme.gap_extend : scheme.gap_open;
            previous_gap = 's';
        } else {
            total += scheme.score(q, s);
            previous_gap = 0;
        }
    }
    return total;
}

}  // namespace hkm
