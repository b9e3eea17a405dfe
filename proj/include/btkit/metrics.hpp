#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace btkit::metrics {

// Named tokenization profiles are frozen: the same name always produces the
// same token stream for the same input.
struct TokenizerProfile {
    std::string name = "default";
    bool nfc_normalize = false;
    bool split_punctuation = false;
    bool case_fold = false;

    static const TokenizerProfile &default_profile();
    // "standard": NFC normalization plus punctuation split into separate
    // tokens, no case folding. Backs the standardized BLEU score.
    static const TokenizerProfile &standard_profile();
    static const TokenizerProfile &by_name(const std::string &name);

    std::vector<std::string> tokenize(const std::string &text) const;
    std::string signature(int max_n) const; // name+ngram:N+vV
};

struct BleuResult {
    double score = 0.0; // 0..100
    std::vector<double> precisions;
    double brevity_penalty = 1.0;
    long hypothesis_length = 0;
    long reference_length = 0;
    std::string profile;
    std::string signature;
    bool empty_hypothesis = false;
};

// Corpus BLEU: clipped n-gram matches and totals are summed over all segments
// before division; unsmoothed (any zero precision gives score 0).
BleuResult bleu(const std::vector<std::string> &hypotheses,
                const std::vector<std::string> &references,
                const TokenizerProfile &profile = TokenizerProfile::default_profile(), int max_n = 4);

// BLEU under the frozen "standard" profile, with its signature embedded.
BleuResult sacrebleu(const std::vector<std::string> &hypotheses,
                     const std::vector<std::string> &references);

struct ChrfResult {
    double score = 0.0; // 0..100
    double beta = 2.0;
    int char_order = 6;
    double avg_precision = 0.0;
    double avg_recall = 0.0;
};

// Character n-gram F-score on whitespace-stripped text; orders missing from
// the reference are skipped from the average unless count_empty_orders is set.
ChrfResult chrf(const std::vector<std::string> &hypotheses,
                const std::vector<std::string> &references, double beta = 2.0, int char_order = 6,
                bool count_empty_orders = false);

struct TerEdits {
    long insertions = 0;
    long deletions = 0;
    long substitutions = 0;
    long shifts = 0;
    long total() const { return insertions + deletions + substitutions + shifts; }
};

struct TerResult {
    double score = 0.0; // 100 * edits / reference length; may exceed 100
    TerEdits edits;
    long reference_length = 0;
};

// Translation edit rate with a greedy block-shift search: the admissible
// shift reducing word edit distance the most is applied first (ties: smaller
// block, then leftmost), then the remaining edit distance is added.
TerResult ter(const std::vector<std::string> &hypotheses,
              const std::vector<std::string> &references);

struct EvalResult {
    BleuResult bleu;
    BleuResult sacrebleu;
    ChrfResult chrf2;
    TerResult ter;
    std::optional<double> gain;
};

EvalResult evaluate_all(const std::vector<std::string> &hypotheses,
                        const std::vector<std::string> &references,
                        const std::optional<BleuResult> &baseline = std::nullopt,
                        const TokenizerProfile &profile = TokenizerProfile::default_profile());

} // namespace btkit::metrics
