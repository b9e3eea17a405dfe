#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace btkit::corpus {

struct LanguageTag {
    std::string code;
    bool operator==(const LanguageTag &) const = default;
};

struct MonolingualCorpus {
    std::string id;
    LanguageTag language;
    std::string source_tag;
    std::vector<std::string> sentences;
};

struct SentencePair {
    std::string source;
    std::string target;
    std::string source_tag;
    bool operator==(const SentencePair &) const = default;
};

struct BilingualCorpus {
    std::string id;
    LanguageTag source_language;
    LanguageTag target_language;
    std::vector<SentencePair> pairs;
};

// Cleaning rules, applied in a fixed order:
//   strip hyperlinks -> strip special characters -> collapse whitespace /
//   drop empty -> drop code-mixed -> drop exact duplicates (first kept).
struct CleanRuleSet {
    bool strip_hyperlinks = false;
    bool strip_special_characters = false;
    bool collapse_whitespace = false; // also drops sentences left empty
    bool drop_code_mixed = false;
    bool drop_repetitive = false;

    // Punctuation kept by the special-character rule, in addition to letters,
    // digits and whitespace.
    std::string allowed_punctuation = ".,;:'\"?!-()";

    // A sentence is code-mixed when at least this fraction of its alphabetic
    // tokens appears in another language's word list.
    double code_mixed_threshold = 0.3;
    // language code -> lowercase word set; a sentence in language X is checked
    // against the union of all lists whose key differs from X.
    std::map<std::string, std::unordered_set<std::string>> word_lists;

    bool any_enabled() const {
        return strip_hyperlinks || strip_special_characters || collapse_whitespace ||
               drop_code_mixed || drop_repetitive;
    }
};

struct RuleCounts {
    long dropped = 0;
    long modified = 0;
};

struct CleanReport {
    // keyed by rule name: hyperlinks, special_characters, whitespace,
    // code_mixed, repetitive
    std::map<std::string, RuleCounts> rules;
    long input_size = 0;
    long output_size = 0;

    long total_dropped() const;
    // line-oriented: rule <TAB> dropped <TAB> modified
    std::string to_tsv() const;
};

enum class SplitVariant { default_tv, newtest };

struct SplitRatios {
    double train = 0.8;
    double valid = 0.1;
    double test = 0.1;
};

struct DataSplit {
    BilingualCorpus train;
    BilingualCorpus valid;
    BilingualCorpus test;
    uint64_t split_seed = 0;
    SplitVariant variant = SplitVariant::default_tv;
};

// ---- loading & saving -------------------------------------------------------

MonolingualCorpus load_monolingual(const std::filesystem::path &path, const LanguageTag &language,
                                   const std::string &id, const std::string &source_tag);

// Tab-separated source<TAB>target file; every pair gets source_tag.
BilingualCorpus load_bilingual(const std::filesystem::path &path, const LanguageTag &src,
                               const LanguageTag &tgt, const std::string &id,
                               const std::string &source_tag);

// Two aligned one-sentence-per-line files of equal length.
BilingualCorpus load_bilingual_aligned(const std::filesystem::path &src_path,
                                       const std::filesystem::path &tgt_path,
                                       const LanguageTag &src, const LanguageTag &tgt,
                                       const std::string &id, const std::string &source_tag);

void save_monolingual(const MonolingualCorpus &corpus, const std::filesystem::path &path);

// Internal tagged format: header line plus source<TAB>target<TAB>source_tag
// rows; preserves per-pair provenance across run-directory round trips.
void save_bilingual(const BilingualCorpus &corpus, const std::filesystem::path &path,
                    const std::vector<std::string> &extra_header = {});
BilingualCorpus load_bilingual_tagged(const std::filesystem::path &path);

// ---- operations --------------------------------------------------------------

BilingualCorpus concat_bilingual(const std::vector<const BilingualCorpus *> &corpora,
                                 const std::string &id);

std::pair<MonolingualCorpus, CleanReport> clean(const MonolingualCorpus &corpus,
                                                const CleanRuleSet &rules);
std::pair<BilingualCorpus, CleanReport> clean(const BilingualCorpus &corpus,
                                              const CleanRuleSet &rules);

BilingualCorpus filter_by_source(const BilingualCorpus &corpus,
                                 const std::set<std::string> &exclude_tags);

DataSplit make_splits(const BilingualCorpus &corpus, const SplitRatios &ratios, uint64_t seed);

DataSplit expand_eval_sets(DataSplit split, const BilingualCorpus &extra);

BilingualCorpus shuffle(const BilingualCorpus &corpus, uint64_t seed);
MonolingualCorpus shuffle(const MonolingualCorpus &corpus, uint64_t seed);

BilingualCorpus reverse_direction(const BilingualCorpus &corpus);

std::unordered_set<std::string> load_word_list(const std::filesystem::path &path);

// ---- manifests ----------------------------------------------------------------

// One record per line: id <TAB> language <TAB> source_tag <TAB> path.
// A language of the form "src-tgt" marks a bilingual TSV entry.
struct ManifestEntry {
    std::string id;
    std::string language;
    std::string source_tag;
    std::string path;
    bool is_bilingual() const { return language.find('-') != std::string::npos; }
};

std::vector<ManifestEntry> load_manifest(const std::filesystem::path &path);

} // namespace btkit::corpus
