#include "btkit/metrics.hpp"
#include "btkit/error.hpp"
#include "btkit/util.hpp"

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace btkit::metrics {

namespace {

void check_corpus(const std::vector<std::string> &hyp, const std::vector<std::string> &ref) {
    if (hyp.size() != ref.size())
        throw Error("metrics: hypothesis/reference length mismatch (" + std::to_string(hyp.size()) +
                    " vs " + std::to_string(ref.size()) + ")");
    if (hyp.empty()) throw Error("metrics: empty corpus");
}

std::string nfc(const std::string &text) {
    UErrorCode status = U_ZERO_ERROR;
    const UNormalizer2 *norm = unorm2_getNFCInstance(&status);
    if (U_FAILURE(status)) throw Error("unicode: NFC normalizer unavailable");

    // UTF-8 -> UTF-16
    std::vector<UChar> u16(text.size() + 1);
    int32_t u16_len = 0;
    status = U_ZERO_ERROR;
    u_strFromUTF8(u16.data(), static_cast<int32_t>(u16.size()), &u16_len, text.data(),
                  static_cast<int32_t>(text.size()), &status);
    if (U_FAILURE(status)) throw Error("unicode: invalid UTF-8 in metric input");

    std::vector<UChar> out(static_cast<size_t>(u16_len) * 3 + 16);
    status = U_ZERO_ERROR;
    const int32_t out_len = unorm2_normalize(norm, u16.data(), u16_len, out.data(),
                                             static_cast<int32_t>(out.size()), &status);
    if (U_FAILURE(status)) throw Error("unicode: NFC normalization failed");

    std::string result(static_cast<size_t>(out_len) * 4 + 4, '\0');
    int32_t u8_len = 0;
    status = U_ZERO_ERROR;
    u_strToUTF8(result.data(), static_cast<int32_t>(result.size()), &u8_len, out.data(), out_len,
                &status);
    if (U_FAILURE(status)) throw Error("unicode: UTF-8 conversion failed");
    result.resize(static_cast<size_t>(u8_len));
    return result;
}

// n-gram counting over token sequences; keys join tokens with a separator no
// token can contain (tokens are whitespace-free)
std::map<std::string, long> ngram_counts(const std::vector<std::string> &tokens, int n) {
    std::map<std::string, long> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (int k = 0; k < n; ++k) {
            if (k) key += '\x1f';
            key += tokens[i + static_cast<size_t>(k)];
        }
        ++counts[key];
    }
    return counts;
}

std::map<std::u32string, long> char_ngram_counts(const std::u32string &chars, int n) {
    std::map<std::u32string, long> counts;
    if (static_cast<int>(chars.size()) < n) return counts;
    for (size_t i = 0; i + n <= chars.size(); ++i) ++counts[chars.substr(i, static_cast<size_t>(n))];
    return counts;
}

std::u32string strip_whitespace_chars(const std::string &text) {
    std::u32string out;
    size_t i = 0;
    while (i < text.size()) {
        const char32_t cp = util::utf8_next(text, i);
        if (!u_isspace(static_cast<UChar32>(cp))) out.push_back(cp);
    }
    return out;
}

// ---- word-level edit distance with itemized backtrace ----------------------

long levenshtein(const std::vector<std::string> &hyp, const std::vector<std::string> &ref) {
    const size_t n = hyp.size(), m = ref.size();
    std::vector<long> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<long>(j);
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<long>(i);
        for (size_t j = 1; j <= m; ++j) {
            const long sub = prev[j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
            cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// Backtrace preference: match/substitution, then deletion, then insertion.
TerEdits itemized_edits(const std::vector<std::string> &hyp, const std::vector<std::string> &ref) {
    const size_t n = hyp.size(), m = ref.size();
    std::vector<std::vector<long>> d(n + 1, std::vector<long>(m + 1));
    for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<long>(i);
    for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<long>(j);
    for (size_t i = 1; i <= n; ++i)
        for (size_t j = 1; j <= m; ++j) {
            const long sub = d[i - 1][j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1);
            d[i][j] = std::min({sub, d[i - 1][j] + 1, d[i][j - 1] + 1});
        }
    TerEdits edits;
    size_t i = n, j = m;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 &&
            d[i][j] == d[i - 1][j - 1] + (hyp[i - 1] == ref[j - 1] ? 0 : 1)) {
            if (hyp[i - 1] != ref[j - 1]) ++edits.substitutions;
            --i;
            --j;
        } else if (i > 0 && d[i][j] == d[i - 1][j] + 1) {
            ++edits.deletions;
            --i;
        } else {
            ++edits.insertions;
            --j;
        }
    }
    return edits;
}

constexpr size_t kMaxShiftBlock = 10; // standard TER block-size cap

// One greedy shift pass; returns true and applies the best
// distance-reducing admissible shift, if any.
bool apply_best_shift(std::vector<std::string> &hyp, const std::vector<std::string> &ref,
                      long &cur_dist,
                      const std::map<std::vector<std::string>, std::vector<size_t>> &ref_spans) {
    long best_gain = 0;
    size_t best_len = 0, best_src = 0, best_dst = 0;
    std::vector<std::string> best_cand;

    const size_t n = hyp.size();
    for (size_t len = 1; len <= std::min(n, kMaxShiftBlock); ++len) {
        for (size_t i = 0; i + len <= n; ++i) {
            const std::vector<std::string> block(hyp.begin() + static_cast<long>(i),
                                                 hyp.begin() + static_cast<long>(i + len));
            const auto spans = ref_spans.find(block);
            if (spans == ref_spans.end()) continue;
            for (size_t j : spans->second) {
                // land the block at index j of the shifted hypothesis
                const size_t p = std::min(j, n - len);
                if (p == i) continue;
                std::vector<std::string> cand;
                cand.reserve(n);
                for (size_t k = 0; k < n; ++k)
                    if (k < i || k >= i + len) cand.push_back(hyp[k]);
                cand.insert(cand.begin() + static_cast<long>(p), block.begin(), block.end());
                const long gain = cur_dist - levenshtein(cand, ref);
                // ties: smaller block, then leftmost source, then leftmost destination
                const bool better =
                    gain > best_gain ||
                    (gain == best_gain && gain > 0 &&
                     (len < best_len || (len == best_len && (i < best_src || (i == best_src && p < best_dst)))));
                if (better) {
                    best_gain = gain;
                    best_len = len;
                    best_src = i;
                    best_dst = p;
                    best_cand = std::move(cand);
                }
            }
        }
    }
    if (best_gain <= 0) return false;
    hyp = std::move(best_cand);
    cur_dist -= best_gain;
    return true;
}

struct SegmentTer {
    TerEdits edits;
    long ref_len = 0;
};

SegmentTer segment_ter(const std::string &hyp_text, const std::string &ref_text) {
    std::vector<std::string> hyp = util::split_whitespace(hyp_text);
    const std::vector<std::string> ref = util::split_whitespace(ref_text);
    if (ref.empty()) throw Error("ter: empty reference segment");

    std::map<std::vector<std::string>, std::vector<size_t>> ref_spans;
    for (size_t len = 1; len <= std::min(ref.size(), kMaxShiftBlock); ++len)
        for (size_t j = 0; j + len <= ref.size(); ++j)
            ref_spans[{ref.begin() + static_cast<long>(j), ref.begin() + static_cast<long>(j + len)}]
                .push_back(j);

    SegmentTer result;
    result.ref_len = static_cast<long>(ref.size());
    long dist = levenshtein(hyp, ref);
    while (dist > 0 && apply_best_shift(hyp, ref, dist, ref_spans)) ++result.edits.shifts;
    const TerEdits rest = itemized_edits(hyp, ref);
    result.edits.insertions = rest.insertions;
    result.edits.deletions = rest.deletions;
    result.edits.substitutions = rest.substitutions;
    return result;
}

} // namespace

const TokenizerProfile &TokenizerProfile::default_profile() {
    static const TokenizerProfile p{"default", false, false, false};
    return p;
}

const TokenizerProfile &TokenizerProfile::standard_profile() {
    static const TokenizerProfile p{"standard", true, true, false};
    return p;
}

const TokenizerProfile &TokenizerProfile::by_name(const std::string &name) {
    if (name == "default") return default_profile();
    if (name == "standard") return standard_profile();
    throw Error("unknown tokenizer profile '" + name + "'");
}

std::vector<std::string> TokenizerProfile::tokenize(const std::string &text) const {
    std::string cur = nfc_normalize ? nfc(text) : text;
    if (case_fold || split_punctuation) {
        std::string rewritten;
        rewritten.reserve(cur.size() + 8);
        size_t i = 0;
        while (i < cur.size()) {
            char32_t cp = util::utf8_next(cur, i);
            if (case_fold) cp = static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp)));
            if (split_punctuation && u_ispunct(static_cast<UChar32>(cp))) {
                rewritten.push_back(' ');
                util::utf8_append(rewritten, cp);
                rewritten.push_back(' ');
            } else {
                util::utf8_append(rewritten, cp);
            }
        }
        cur = std::move(rewritten);
    }
    return util::split_whitespace(cur);
}

std::string TokenizerProfile::signature(int max_n) const {
    return name + "+ngram:" + std::to_string(max_n) + "+v1";
}

BleuResult bleu(const std::vector<std::string> &hypotheses,
                const std::vector<std::string> &references, const TokenizerProfile &profile,
                int max_n) {
    check_corpus(hypotheses, references);
    if (max_n < 1) throw Error("bleu: max_n must be at least 1");

    std::vector<long> matches(static_cast<size_t>(max_n), 0);
    std::vector<long> totals(static_cast<size_t>(max_n), 0);
    long hyp_len = 0, ref_len = 0;

    for (size_t s = 0; s < hypotheses.size(); ++s) {
        const auto hyp = profile.tokenize(hypotheses[s]);
        const auto ref = profile.tokenize(references[s]);
        hyp_len += static_cast<long>(hyp.size());
        ref_len += static_cast<long>(ref.size());
        for (int n = 1; n <= max_n; ++n) {
            const auto h = ngram_counts(hyp, n);
            const auto r = ngram_counts(ref, n);
            long total = 0, match = 0;
            for (const auto &[key, count] : h) {
                total += count;
                const auto it = r.find(key);
                if (it != r.end()) match += std::min(count, it->second);
            }
            totals[static_cast<size_t>(n - 1)] += total;
            matches[static_cast<size_t>(n - 1)] += match;
        }
    }

    BleuResult result;
    result.profile = profile.name;
    result.signature = profile.signature(max_n);
    result.hypothesis_length = hyp_len;
    result.reference_length = ref_len;
    result.precisions.resize(static_cast<size_t>(max_n), 0.0);
    bool any_zero = false;
    for (int n = 0; n < max_n; ++n) {
        const auto i = static_cast<size_t>(n);
        result.precisions[i] =
            totals[i] > 0 ? static_cast<double>(matches[i]) / static_cast<double>(totals[i]) : 0.0;
        if (result.precisions[i] <= 0.0) any_zero = true;
    }
    if (hyp_len == 0) {
        result.empty_hypothesis = true;
        result.brevity_penalty = 0.0;
        result.score = 0.0;
        return result;
    }
    result.brevity_penalty =
        hyp_len > ref_len
            ? 1.0
            : std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));
    if (any_zero) {
        result.score = 0.0;
    } else {
        double log_sum = 0.0;
        for (double p : result.precisions) log_sum += std::log(p);
        result.score = 100.0 * result.brevity_penalty * std::exp(log_sum / max_n);
    }
    return result;
}

BleuResult sacrebleu(const std::vector<std::string> &hypotheses,
                     const std::vector<std::string> &references) {
    return bleu(hypotheses, references, TokenizerProfile::standard_profile(), 4);
}

ChrfResult chrf(const std::vector<std::string> &hypotheses,
                const std::vector<std::string> &references, double beta, int char_order,
                bool count_empty_orders) {
    check_corpus(hypotheses, references);
    if (char_order < 1) throw Error("chrf: char_order must be at least 1");

    ChrfResult result;
    result.beta = beta;
    result.char_order = char_order;

    double score_sum = 0.0, prec_sum = 0.0, rec_sum = 0.0;
    for (size_t s = 0; s < hypotheses.size(); ++s) {
        const std::u32string hyp = strip_whitespace_chars(hypotheses[s]);
        const std::u32string ref = strip_whitespace_chars(references[s]);

        double p_total = 0.0, r_total = 0.0;
        int included = 0;
        for (int n = 1; n <= char_order; ++n) {
            const long ref_total = std::max<long>(0, static_cast<long>(ref.size()) - n + 1);
            if (ref_total == 0 && !count_empty_orders) continue;
            const auto h = char_ngram_counts(hyp, n);
            const auto r = char_ngram_counts(ref, n);
            long hyp_total = 0, match = 0;
            for (const auto &[key, count] : h) {
                hyp_total += count;
                const auto it = r.find(key);
                if (it != r.end()) match += std::min(count, it->second);
            }
            const double p = hyp_total > 0 ? static_cast<double>(match) / hyp_total : 0.0;
            const double q = ref_total > 0 ? static_cast<double>(match) / ref_total : 0.0;
            p_total += p;
            r_total += q;
            ++included;
        }

        double seg_score, seg_p = 0.0, seg_r = 0.0;
        if (included == 0) {
            seg_score = hyp == ref ? 100.0 : 0.0; // both empty counts as identical
        } else {
            seg_p = p_total / included;
            seg_r = r_total / included;
            const double denom = beta * beta * seg_p + seg_r;
            seg_score = denom > 0 ? 100.0 * (1.0 + beta * beta) * seg_p * seg_r / denom : 0.0;
        }
        score_sum += seg_score;
        prec_sum += seg_p;
        rec_sum += seg_r;
    }

    const auto count = static_cast<double>(hypotheses.size());
    result.score = score_sum / count;
    result.avg_precision = prec_sum / count;
    result.avg_recall = rec_sum / count;
    return result;
}

TerResult ter(const std::vector<std::string> &hypotheses,
              const std::vector<std::string> &references) {
    check_corpus(hypotheses, references);
    TerResult result;
    for (size_t s = 0; s < hypotheses.size(); ++s) {
        const SegmentTer seg = segment_ter(hypotheses[s], references[s]);
        result.edits.insertions += seg.edits.insertions;
        result.edits.deletions += seg.edits.deletions;
        result.edits.substitutions += seg.edits.substitutions;
        result.edits.shifts += seg.edits.shifts;
        result.reference_length += seg.ref_len;
    }
    result.score =
        100.0 * static_cast<double>(result.edits.total()) / static_cast<double>(result.reference_length);
    return result;
}

EvalResult evaluate_all(const std::vector<std::string> &hypotheses,
                        const std::vector<std::string> &references,
                        const std::optional<BleuResult> &baseline, const TokenizerProfile &profile) {
    EvalResult result;
    result.bleu = bleu(hypotheses, references, profile);
    result.sacrebleu = sacrebleu(hypotheses, references);
    result.chrf2 = chrf(hypotheses, references);
    result.ter = ter(hypotheses, references);
    if (baseline) result.gain = result.bleu.score - baseline->score;
    return result;
}

} // namespace btkit::metrics
