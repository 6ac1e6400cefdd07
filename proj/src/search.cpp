#include "hkm/search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "hkm/error.hpp"
#include "hkm/parallel.hpp"

namespace hkm {

namespace {

struct Extension {
    int score = 0;
    std::size_t length = 0;
};

// Walks away from the seed one column at a time via `step(t)`; returns the
// best prefix (shortest among equals).
template <typename Step>
Extension extend(std::size_t limit, int x_drop, Step&& step) {
    Extension best;
    int running = 0;
    for (std::size_t t = 0; t < limit; ++t) {
        running += step(t);
        if (running > best.score) {
            best.score = running;
            best.length = t + 1;
        } else if (best.score - running > x_drop) {
            break;
        }
    }
    return best;
}

}  // namespace

WordIndex::WordIndex(std::span<const SequenceRecord> db, std::size_t word_size, SeqMode mode)
    : word_size_(word_size), mode_(mode) {
    if (word_size < 1 || word_size > max_word_size(mode)) {
        throw ValidationError("word size must be in 1.." + std::to_string(max_word_size(mode)));
    }
    for (std::size_t s = 0; s < db.size(); ++s) {
        const auto& rec = db[s];
        if (rec.mode != mode) throw ValidationError("database sequence '" + rec.id + "' has the wrong mode");
        if (rec.size() < word_size) continue;
        const std::string_view r = rec.residues;
        for (std::size_t off = 0; off + word_size <= r.size(); ++off) {
            postings_[encode(r.substr(off, word_size), mode)].push_back(
                {static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(off)});
        }
    }
    if (postings_.empty()) throw ValidationError("no indexable words");
}

std::span<const Posting> WordIndex::lookup(std::string_view word) const {
    if (word.size() != word_size_) return {};
    const auto it = postings_.find(encode(word, mode_));
    if (it == postings_.end()) return {};
    return it->second;
}

std::vector<std::string> WordIndex::words() const {
    std::vector<std::string> out;
    out.reserve(postings_.size());
    const auto letters = alphabet(mode_);
    for (const auto& [key, _] : postings_) {
        std::string word(word_size_, ' ');
        auto k = key;
        for (std::size_t i = word_size_; i-- > 0;) {
            word[i] = letters[k % letters.size()];
            k /= letters.size();
        }
        out.push_back(std::move(word));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t WordIndex::encode(std::string_view word, SeqMode mode) {
    const auto base = static_cast<std::uint64_t>(alphabet(mode).size());
    std::uint64_t key = 0;
    for (char c : word) {
        const int code = residue_code(mode, c);
        if (code < 0) throw ValidationError("word contains a residue outside the alphabet");
        key = key * base + static_cast<std::uint64_t>(code);
    }
    return key;
}

std::size_t WordIndex::max_word_size(SeqMode mode) {
    return mode == SeqMode::nucleotide ? 31 : 14;
}

WordIndex build_word_index(std::span<const SequenceRecord> db, std::size_t word_size, SeqMode mode) {
    return WordIndex(db, word_size, mode);
}

std::vector<std::string> neighborhood(std::string_view word, int threshold, const ScoringScheme& scheme) {
    const std::size_t w = word.size();
    const auto letters = alphabet(scheme.mode);
    std::vector<int> codes(w);
    for (std::size_t i = 0; i < w; ++i) {
        codes[i] = residue_code(scheme.mode, word[i]);
        if (codes[i] < 0) throw ValidationError("neighborhood word contains an invalid residue");
    }
    // best_rest[i]: highest score attainable over positions i..w-1.
    std::vector<int> best_rest(w + 1, 0);
    for (std::size_t i = w; i-- > 0;) best_rest[i] = best_rest[i + 1] + scheme.row_max(codes[i]);

    std::vector<std::string> out;
    std::string current(w, ' ');
    const auto recurse = [&](auto&& self, std::size_t pos, int score) -> void {
        if (score + best_rest[pos] < threshold) return;
        if (pos == w) {
            out.push_back(current);
            return;
        }
        for (std::size_t c = 0; c < letters.size(); ++c) {
            current[pos] = letters[c];
            self(self, pos + 1, score + scheme.score_codes(codes[pos], static_cast<int>(c)));
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

std::vector<Hsp> find_hsps(std::string_view query, std::string_view subject, std::span<const Seed> seeds,
                           std::size_t word_size, const ScoringScheme& scheme, int x_drop, int s_cutoff) {
    std::vector<Hsp> out;
    for (const auto& seed : seeds) {
        const std::size_t qo = seed.query_offset;
        const std::size_t so = seed.subject_offset;
        if (qo + word_size > query.size() || so + word_size > subject.size()) {
            throw ValidationError("seed extends past the end of a sequence");
        }
        int seed_score = 0;
        for (std::size_t t = 0; t < word_size; ++t) seed_score += scheme.score(query[qo + t], subject[so + t]);

        const std::size_t qe = qo + word_size;
        const std::size_t se = so + word_size;
        const auto right = extend(std::min(query.size() - qe, subject.size() - se), x_drop,
                                  [&](std::size_t t) { return scheme.score(query[qe + t], subject[se + t]); });
        const auto left = extend(std::min(qo, so), x_drop,
                                 [&](std::size_t t) { return scheme.score(query[qo - 1 - t], subject[so - 1 - t]); });

        Hsp h;
        h.query_start = qo - left.length;
        h.query_end = qe + right.length;
        h.subject_start = so - left.length;
        h.subject_end = se + right.length;
        h.score = seed_score + left.score + right.score;
        if (h.score < s_cutoff) continue;
        h.evalue = evalue(h.score, query.size(), subject.size(), scheme);
        out.push_back(h);
    }

    std::sort(out.begin(), out.end(), [](const Hsp& a, const Hsp& b) {
        return std::make_tuple(a.diagonal(), a.query_start, a.query_end) <
               std::make_tuple(b.diagonal(), b.query_start, b.query_end);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Hsp& a, const Hsp& b) {
                              return a.diagonal() == b.diagonal() && a.query_start == b.query_start &&
                                     a.query_end == b.query_end;
                          }),
              out.end());
    std::sort(out.begin(), out.end(), [](const Hsp& a, const Hsp& b) {
        return std::make_tuple(-a.score, a.query_start, a.subject_start) <
               std::make_tuple(-b.score, b.query_start, b.subject_start);
    });
    return out;
}

double evalue(int score, std::size_t query_length, std::size_t db_length, const ScoringScheme& scheme) {
    return scheme.karlin_k * static_cast<double>(query_length) * static_cast<double>(db_length) *
           std::exp(-scheme.karlin_lambda * static_cast<double>(score));
}

std::vector<Hsp> chain_hsps(std::vector<Hsp> hsps) {
    std::stable_sort(hsps.begin(), hsps.end(), [](const Hsp& a, const Hsp& b) {
        return std::make_tuple(-a.score, a.query_start, a.subject_start) <
               std::make_tuple(-b.score, b.query_start, b.subject_start);
    });
    std::vector<Hsp> chain;
    for (const auto& h : hsps) {
        const bool fits = std::all_of(chain.begin(), chain.end(), [&](const Hsp& c) {
            const bool before = h.query_end <= c.query_start && h.subject_end <= c.subject_start;
            const bool after = c.query_end <= h.query_start && c.subject_end <= h.subject_start;
            return before || after;
        });
        if (fits) chain.push_back(h);
    }
    std::sort(chain.begin(), chain.end(), [](const Hsp& a, const Hsp& b) { return a.query_start < b.query_start; });
    return chain;
}

SearchParams SearchParams::defaults(SeqMode mode) {
    SearchParams p;
    if (mode == SeqMode::protein) {
        p.word_size = 3;
        p.neighborhood_t = 11;
        p.x_drop = 16;
        p.score_cutoff = 30;
        p.mask_threshold = 2.2;
    }
    return p;
}

std::vector<Hit> search(const SequenceRecord& query, std::span<const SequenceRecord> db, const WordIndex& index,
                        const SearchParams& params, const ScoringScheme& scheme) {
    if (query.mode != scheme.mode || index.mode() != scheme.mode) {
        throw ValidationError("query, database and scoring scheme must use the same sequence mode");
    }
    for (const auto& rec : db) {
        if (rec.mode != scheme.mode) throw ValidationError("database sequence '" + rec.id + "' has the wrong mode");
    }
    if (!(params.e_threshold > 0.0)) throw ValidationError("E-value threshold must be positive");
    const std::size_t w = index.word_size();
    if (db.empty() || query.size() < w) return {};

    const SequenceRecord q =
        params.mask ? mask_low_complexity(query, params.mask_window, params.mask_threshold) : query;
    const std::string_view qr = q.residues;

    // Seeds grouped by subject.
    std::vector<std::vector<Seed>> seeds(db.size());
    for (std::size_t qo = 0; qo + w <= qr.size(); ++qo) {
        const auto masked_begin = q.mask.begin() + static_cast<std::ptrdiff_t>(qo);
        if (std::find(masked_begin, masked_begin + static_cast<std::ptrdiff_t>(w), true) !=
            masked_begin + static_cast<std::ptrdiff_t>(w)) {
            continue;
        }
        const auto word = qr.substr(qo, w);
        const auto lookup = [&](std::string_view candidate) {
            for (const auto& p : index.lookup(candidate)) seeds[p.sequence].push_back({qo, p.offset});
        };
        if (scheme.mode == SeqMode::protein) {
            for (const auto& nb : neighborhood(word, params.neighborhood_t, scheme)) lookup(nb);
        } else {
            lookup(word);
        }
    }

    std::size_t db_length = 0;
    for (const auto& rec : db) db_length += rec.size();

    std::vector<std::optional<Hit>> per_subject(db.size());
    parallel_for(db.size(), params.threads, [&](std::size_t s) {
        auto& subject_seeds = seeds[s];
        if (subject_seeds.empty()) return;
        std::sort(subject_seeds.begin(), subject_seeds.end());
        subject_seeds.erase(std::unique(subject_seeds.begin(), subject_seeds.end()), subject_seeds.end());

        const std::string_view sr = db[s].residues;
        auto hsps = find_hsps(qr, sr, subject_seeds, w, scheme, params.x_drop, params.score_cutoff);
        if (hsps.empty()) return;
        auto chain = chain_hsps(std::move(hsps));

        // Gapped alignment over the whole query against the chained subject
        // region, padded so flanking query residues can still align.
        std::size_t q_lo = chain.front().query_start;
        std::size_t q_hi = 0;
        std::size_t s_lo = sr.size();
        std::size_t s_hi = 0;
        for (const auto& h : chain) {
            q_lo = std::min(q_lo, h.query_start);
            q_hi = std::max(q_hi, h.query_end);
            s_lo = std::min(s_lo, h.subject_start);
            s_hi = std::max(s_hi, h.subject_end);
        }
        const std::size_t pad = qr.size();
        const std::size_t left_pad = q_lo + pad;
        const std::size_t right_pad = (qr.size() - q_hi) + pad;
        const std::size_t window_lo = s_lo > left_pad ? s_lo - left_pad : 0;
        const std::size_t window_hi = std::min(sr.size(), s_hi + right_pad);

        Alignment aln = smith_waterman(qr, sr.substr(window_lo, window_hi - window_lo), scheme);
        if (aln.score <= 0) return;
        aln.subject_start += window_lo;
        aln.subject_end += window_lo;

        Hit hit;
        hit.query_id = query.id;
        hit.subject_id = db[s].id;
        hit.subject_index = s;
        hit.score = aln.score;
        hit.evalue = evalue(aln.score, qr.size(), db_length, scheme);
        hit.alignment = std::move(aln);
        hit.chain = std::move(chain);
        for (auto& h : hit.chain) h.evalue = evalue(h.score, qr.size(), db_length, scheme);
        per_subject[s] = std::move(hit);
    });

    std::vector<Hit> hits;
    for (auto& h : per_subject) {
        if (h && h->evalue < params.e_threshold) hits.push_back(std::move(*h));
    }
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        return std::tie(a.evalue, a.subject_id, a.subject_index) < std::tie(b.evalue, b.subject_id, b.subject_index);
    });
    return hits;
}

std::vector<Hit> search(const SequenceRecord& query, std::span<const SequenceRecord> db, const SearchParams& params,
                        const ScoringScheme& scheme) {
    if (query.mode != scheme.mode) {
        throw ValidationError("query, database and scoring scheme must use the same sequence mode");
    }
    if (db.empty()) return {};
    const WordIndex index(db, params.word_size, scheme.mode);
    return search(query, db, index, params, scheme);
}

}  // namespace hkm
