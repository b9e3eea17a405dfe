#pragma once

#include "btkit/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

namespace btkit::subword {

// Word-boundary symbol appended to every word during learning and
// segmentation. U+2581 byte-sorts after ASCII, so pair tie-breaking prefers
// letter pairs over boundary pairs.
inline const std::string kEndOfWordMarker = "\xE2\x96\x81"; // "▁"

struct MergeRule {
    std::string left;
    std::string right;
    bool operator==(const MergeRule &) const = default;
};

struct BpeModel {
    std::vector<MergeRule> merges; // in learned order
    std::set<std::string> vocab;   // base symbols plus one entry per merge
    std::string end_of_word_marker = kEndOfWordMarker;
    int target_vocab_size = 0;

    // Hash of marker + merge list; identifies segmentation behaviour.
    uint64_t fingerprint() const;
};

struct TokenSeq {
    std::vector<std::string> tokens;
};

// Greedy frequency BPE: repeatedly merge the most frequent adjacent symbol
// pair (ties: lexicographically smallest pair) until the vocabulary reaches
// target_vocab_size or no pair occurs at least twice.
BpeModel learn_bpe(const std::vector<std::string> &sentences, int target_vocab_size);

// Convenience overloads collecting sentences from corpora; for bilingual
// corpora both sides participate (one joint code per run).
std::vector<std::string> gather_text(const corpus::MonolingualCorpus &c);
std::vector<std::string> gather_text(const corpus::BilingualCorpus &c);

TokenSeq apply_bpe(const BpeModel &model, const std::string &sentence);
std::string decode_bpe(const BpeModel &model, const TokenSeq &tokens);

void save_bpe(const BpeModel &model, const std::filesystem::path &path);
BpeModel load_bpe(const std::filesystem::path &path);

} // namespace btkit::subword
