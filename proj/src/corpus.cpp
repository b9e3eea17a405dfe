#include "btkit/corpus.hpp"
#include "btkit/error.hpp"
#include "btkit/util.hpp"

#include <unicode/uchar.h>

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace btkit::corpus {

namespace {

bool is_link_token(const std::string &token) {
    if (util::starts_with(token, "www.")) return true;
    // scheme://... with scheme = alpha followed by alnum/+/-/.
    const size_t pos = token.find("://");
    if (pos == std::string::npos || pos == 0) return false;
    if (!std::isalpha(static_cast<unsigned char>(token[0]))) return false;
    for (size_t i = 1; i < pos; ++i) {
        const unsigned char c = static_cast<unsigned char>(token[i]);
        if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
    }
    return true;
}

std::string strip_hyperlinks_rule(const std::string &s, bool &changed) {
    const std::vector<std::string> tokens = util::split_whitespace(s);
    std::vector<std::string> kept;
    kept.reserve(tokens.size());
    for (const auto &t : tokens) {
        if (is_link_token(t)) changed = true;
        else kept.push_back(t);
    }
    const std::string out = util::join(kept, " ");
    if (out != s) changed = true;
    return out;
}

bool is_allowed_cp(char32_t cp, const std::unordered_set<char32_t> &allowed_punct) {
    if (cp < 0x80) {
        const auto c = static_cast<unsigned char>(cp);
        return std::isalnum(c) || std::isspace(c) || allowed_punct.count(cp) > 0;
    }
    const auto u = static_cast<UChar32>(cp);
    return u_isalpha(u) || u_isdigit(u) || u_isspace(u) || allowed_punct.count(cp) > 0;
}

std::string strip_special_rule(const std::string &s, const std::unordered_set<char32_t> &allowed,
                               bool &changed) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        const char32_t cp = util::utf8_next(s, i);
        if (is_allowed_cp(cp, allowed)) util::utf8_append(out, cp);
        else changed = true;
    }
    return out;
}

std::string collapse_ws_rule(const std::string &s, bool &changed) {
    const std::string out = util::join(util::split_whitespace(s), " ");
    if (out != s) changed = true;
    return out;
}

std::string ascii_fold_lower(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        const char32_t cp = util::utf8_next(s, i);
        util::utf8_append(out, static_cast<char32_t>(u_tolower(static_cast<UChar32>(cp))));
    }
    return out;
}

bool token_is_alphabetic(const std::string &token) {
    size_t i = 0;
    while (i < token.size()) {
        const char32_t cp = util::utf8_next(token, i);
        if (!u_isalpha(static_cast<UChar32>(cp))) return false;
    }
    return !token.empty();
}

// true when >= threshold of the alphabetic tokens appear in any word list of
// another language
bool is_code_mixed(const std::string &s, const std::string &own_language,
                   const CleanRuleSet &rules) {
    long alpha = 0, hits = 0;
    for (const auto &token : util::split_whitespace(s)) {
        if (!token_is_alphabetic(token)) continue;
        ++alpha;
        const std::string low = ascii_fold_lower(token);
        for (const auto &[lang, words] : rules.word_lists) {
            if (lang == own_language) continue;
            if (words.count(low)) {
                ++hits;
                break;
            }
        }
    }
    if (alpha == 0) return false;
    return static_cast<double>(hits) / static_cast<double>(alpha) >= rules.code_mixed_threshold;
}

struct SentenceCleaner {
    const CleanRuleSet &rules;
    std::unordered_set<char32_t> allowed_punct;

    explicit SentenceCleaner(const CleanRuleSet &r) : rules(r) {
        size_t i = 0;
        while (i < r.allowed_punctuation.size())
            allowed_punct.insert(util::utf8_next(r.allowed_punctuation, i));
    }

    // Applies the text-rewriting rules; per-rule change flags accumulate into
    // the report by the caller.
    std::string rewrite(const std::string &s, bool &hyperlink_changed, bool &special_changed,
                        bool &ws_changed) const {
        std::string cur = s;
        if (rules.strip_hyperlinks) cur = strip_hyperlinks_rule(cur, hyperlink_changed);
        if (rules.strip_special_characters) cur = strip_special_rule(cur, allowed_punct, special_changed);
        if (rules.collapse_whitespace) cur = collapse_ws_rule(cur, ws_changed);
        return cur;
    }
};

void ensure_rules_enabled(const CleanRuleSet &rules) {
    if (!rules.any_enabled()) throw Error("clean: no rule enabled in the rule set");
}

const char *const kRuleNames[] = {"hyperlinks", "special_characters", "whitespace", "code_mixed",
                                  "repetitive"};

CleanReport fresh_report(long input_size) {
    CleanReport report;
    report.input_size = input_size;
    for (const char *name : kRuleNames) report.rules[name];
    return report;
}

} // namespace

long CleanReport::total_dropped() const {
    long total = 0;
    for (const auto &[name, counts] : rules) total += counts.dropped;
    return total;
}

std::string CleanReport::to_tsv() const {
    std::string out;
    for (const auto &[name, counts] : rules)
        out += name + "\t" + std::to_string(counts.dropped) + "\t" + std::to_string(counts.modified) +
               "\n";
    return out;
}

MonolingualCorpus load_monolingual(const std::filesystem::path &path, const LanguageTag &language,
                                   const std::string &id, const std::string &source_tag) {
    MonolingualCorpus corpus;
    corpus.id = id;
    corpus.language = language;
    corpus.source_tag = source_tag;
    for (auto &line : util::read_lines(path)) {
        if (util::trim(line).empty()) continue;
        corpus.sentences.push_back(std::move(line));
    }
    return corpus;
}

BilingualCorpus load_bilingual(const std::filesystem::path &path, const LanguageTag &src,
                               const LanguageTag &tgt, const std::string &id,
                               const std::string &source_tag) {
    BilingualCorpus corpus;
    corpus.id = id;
    corpus.source_language = src;
    corpus.target_language = tgt;
    size_t lineno = 0;
    for (const auto &line : util::read_lines(path)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cols = util::split(line, '\t');
        if (cols.size() != 2)
            throw Error("bilingual file " + path.string() + " line " + std::to_string(lineno) +
                        ": expected 2 tab-separated columns, got " + std::to_string(cols.size()));
        corpus.pairs.push_back({cols[0], cols[1], source_tag});
    }
    return corpus;
}

BilingualCorpus load_bilingual_aligned(const std::filesystem::path &src_path,
                                       const std::filesystem::path &tgt_path,
                                       const LanguageTag &src, const LanguageTag &tgt,
                                       const std::string &id, const std::string &source_tag) {
    const auto src_lines = util::read_lines(src_path);
    const auto tgt_lines = util::read_lines(tgt_path);
    if (src_lines.size() != tgt_lines.size())
        throw Error("aligned files differ in length: " + src_path.string() + " has " +
                    std::to_string(src_lines.size()) + " lines, " + tgt_path.string() + " has " +
                    std::to_string(tgt_lines.size()));
    BilingualCorpus corpus;
    corpus.id = id;
    corpus.source_language = src;
    corpus.target_language = tgt;
    for (size_t i = 0; i < src_lines.size(); ++i)
        corpus.pairs.push_back({src_lines[i], tgt_lines[i], source_tag});
    return corpus;
}

void save_monolingual(const MonolingualCorpus &corpus, const std::filesystem::path &path) {
    std::string out;
    for (const auto &s : corpus.sentences) {
        out += s;
        out += '\n';
    }
    util::write_file(path, out);
}

void save_bilingual(const BilingualCorpus &corpus, const std::filesystem::path &path,
                    const std::vector<std::string> &extra_header) {
    std::string out = "#btkit-bilingual\tid=" + corpus.id + "\tsrc=" + corpus.source_language.code +
                      "\ttgt=" + corpus.target_language.code + "\n";
    for (const auto &h : extra_header) out += "# " + h + "\n";
    for (const auto &p : corpus.pairs) out += p.source + "\t" + p.target + "\t" + p.source_tag + "\n";
    util::write_file(path, out);
}

BilingualCorpus load_bilingual_tagged(const std::filesystem::path &path) {
    const auto lines = util::read_lines(path);
    if (lines.empty() || !util::starts_with(lines[0], "#btkit-bilingual"))
        throw Error("not a tagged bilingual file: " + path.string());
    BilingualCorpus corpus;
    for (const auto &field : util::split(lines[0], '\t')) {
        if (util::starts_with(field, "id=")) corpus.id = field.substr(3);
        else if (util::starts_with(field, "src=")) corpus.source_language.code = field.substr(4);
        else if (util::starts_with(field, "tgt=")) corpus.target_language.code = field.substr(4);
    }
    for (size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty() || lines[i][0] == '#') continue;
        const auto cols = util::split(lines[i], '\t');
        if (cols.size() != 3)
            throw Error("tagged bilingual file " + path.string() + " line " + std::to_string(i + 1) +
                        ": expected 3 columns");
        corpus.pairs.push_back({cols[0], cols[1], cols[2]});
    }
    return corpus;
}

BilingualCorpus concat_bilingual(const std::vector<const BilingualCorpus *> &corpora,
                                 const std::string &id) {
    if (corpora.empty()) throw Error("concat_bilingual: no corpora given");
    BilingualCorpus out;
    out.id = id;
    out.source_language = corpora.front()->source_language;
    out.target_language = corpora.front()->target_language;
    for (const BilingualCorpus *c : corpora) {
        if (!(c->source_language == out.source_language) ||
            !(c->target_language == out.target_language))
            throw Error("concat_bilingual: language pair mismatch in corpus '" + c->id + "'");
        out.pairs.insert(out.pairs.end(), c->pairs.begin(), c->pairs.end());
    }
    return out;
}

std::pair<MonolingualCorpus, CleanReport> clean(const MonolingualCorpus &corpus,
                                                const CleanRuleSet &rules) {
    ensure_rules_enabled(rules);
    SentenceCleaner cleaner(rules);
    CleanReport report = fresh_report(static_cast<long>(corpus.sentences.size()));

    MonolingualCorpus out = corpus;
    out.sentences.clear();
    std::unordered_set<std::string> seen;
    for (const auto &sentence : corpus.sentences) {
        bool link = false, special = false, ws = false;
        const std::string cur = cleaner.rewrite(sentence, link, special, ws);
        if (link) ++report.rules["hyperlinks"].modified;
        if (special) ++report.rules["special_characters"].modified;
        if (ws) ++report.rules["whitespace"].modified;
        if (rules.collapse_whitespace && cur.empty()) {
            ++report.rules["whitespace"].dropped;
            continue;
        }
        if (rules.drop_code_mixed && is_code_mixed(cur, corpus.language.code, rules)) {
            ++report.rules["code_mixed"].dropped;
            continue;
        }
        if (rules.drop_repetitive && !seen.insert(cur).second) {
            ++report.rules["repetitive"].dropped;
            continue;
        }
        out.sentences.push_back(cur);
    }
    report.output_size = static_cast<long>(out.sentences.size());
    return {std::move(out), std::move(report)};
}

std::pair<BilingualCorpus, CleanReport> clean(const BilingualCorpus &corpus,
                                              const CleanRuleSet &rules) {
    ensure_rules_enabled(rules);
    SentenceCleaner cleaner(rules);
    CleanReport report = fresh_report(static_cast<long>(corpus.pairs.size()));

    BilingualCorpus out = corpus;
    out.pairs.clear();
    std::unordered_set<std::string> seen;
    for (const auto &pair : corpus.pairs) {
        bool link = false, special = false, ws = false;
        const std::string src = cleaner.rewrite(pair.source, link, special, ws);
        const std::string tgt = cleaner.rewrite(pair.target, link, special, ws);
        if (link) ++report.rules["hyperlinks"].modified;
        if (special) ++report.rules["special_characters"].modified;
        if (ws) ++report.rules["whitespace"].modified;
        if (rules.collapse_whitespace && (src.empty() || tgt.empty())) {
            ++report.rules["whitespace"].dropped;
            continue;
        }
        if (rules.drop_code_mixed &&
            (is_code_mixed(src, corpus.source_language.code, rules) ||
             is_code_mixed(tgt, corpus.target_language.code, rules))) {
            ++report.rules["code_mixed"].dropped;
            continue;
        }
        if (rules.drop_repetitive && !seen.insert(src + "\t" + tgt).second) {
            ++report.rules["repetitive"].dropped;
            continue;
        }
        out.pairs.push_back({src, tgt, pair.source_tag});
    }
    report.output_size = static_cast<long>(out.pairs.size());
    return {std::move(out), std::move(report)};
}

BilingualCorpus filter_by_source(const BilingualCorpus &corpus,
                                 const std::set<std::string> &exclude_tags) {
    BilingualCorpus out = corpus;
    if (exclude_tags.empty()) return out;
    out.pairs.clear();
    for (const auto &pair : corpus.pairs)
        if (!exclude_tags.count(pair.source_tag)) out.pairs.push_back(pair);
    return out;
}

DataSplit make_splits(const BilingualCorpus &corpus, const SplitRatios &ratios, uint64_t seed) {
    if (corpus.pairs.size() < 3)
        throw Error("make_splits: corpus '" + corpus.id + "' has fewer than 3 pairs");
    if (ratios.train <= 0 || ratios.valid <= 0 || ratios.test <= 0)
        throw Error("make_splits: ratios must be positive");
    if (std::abs(ratios.train + ratios.valid + ratios.test - 1.0) > 1e-9)
        throw Error("make_splits: ratios must sum to 1");

    const size_t n = corpus.pairs.size();
    const auto perm = util::shuffled_indices(n, seed);
    const auto shuffled = util::apply_permutation(corpus.pairs, perm);

    const auto n_valid = static_cast<size_t>(std::floor(ratios.valid * static_cast<double>(n)));
    const auto n_test = static_cast<size_t>(std::floor(ratios.test * static_cast<double>(n)));
    const size_t n_train = n - n_valid - n_test; // remainder goes to train

    DataSplit split;
    split.split_seed = seed;
    split.variant = SplitVariant::default_tv;
    auto part = [&](const std::string &suffix, size_t begin, size_t count) {
        BilingualCorpus c;
        c.id = corpus.id + "-" + suffix;
        c.source_language = corpus.source_language;
        c.target_language = corpus.target_language;
        c.pairs.assign(shuffled.begin() + static_cast<long>(begin),
                       shuffled.begin() + static_cast<long>(begin + count));
        return c;
    };
    split.train = part("train", 0, n_train);
    split.valid = part("valid", n_train, n_valid);
    split.test = part("test", n_train + n_valid, n_test);
    return split;
}

DataSplit expand_eval_sets(DataSplit split, const BilingualCorpus &extra) {
    std::unordered_set<std::string> train_keys;
    train_keys.reserve(split.train.pairs.size());
    for (const auto &p : split.train.pairs) train_keys.insert(p.source + "\t" + p.target);

    std::vector<std::string> overlaps;
    for (const auto &p : extra.pairs)
        if (train_keys.count(p.source + "\t" + p.target))
            overlaps.push_back(p.source + " ||| " + p.target);
    if (!overlaps.empty()) {
        std::string msg = "expand_eval_sets: " + std::to_string(overlaps.size()) +
                          " extra pair(s) overlap the training split:";
        for (size_t i = 0; i < overlaps.size() && i < 5; ++i) msg += " [" + overlaps[i] + "]";
        throw Error(msg);
    }

    const size_t half = extra.pairs.size() / 2; // odd remainder goes to test
    for (size_t i = 0; i < extra.pairs.size(); ++i) {
        if (i < half) split.valid.pairs.push_back(extra.pairs[i]);
        else split.test.pairs.push_back(extra.pairs[i]);
    }
    split.variant = SplitVariant::newtest;
    return split;
}

BilingualCorpus shuffle(const BilingualCorpus &corpus, uint64_t seed) {
    BilingualCorpus out = corpus;
    out.pairs = util::apply_permutation(corpus.pairs, util::shuffled_indices(corpus.pairs.size(), seed));
    return out;
}

MonolingualCorpus shuffle(const MonolingualCorpus &corpus, uint64_t seed) {
    MonolingualCorpus out = corpus;
    out.sentences =
        util::apply_permutation(corpus.sentences, util::shuffled_indices(corpus.sentences.size(), seed));
    return out;
}

BilingualCorpus reverse_direction(const BilingualCorpus &corpus) {
    BilingualCorpus out;
    out.id = corpus.id + "-rev";
    out.source_language = corpus.target_language;
    out.target_language = corpus.source_language;
    out.pairs.reserve(corpus.pairs.size());
    for (const auto &p : corpus.pairs) out.pairs.push_back({p.target, p.source, p.source_tag});
    return out;
}

std::unordered_set<std::string> load_word_list(const std::filesystem::path &path) {
    std::unordered_set<std::string> words;
    for (const auto &line : util::read_lines(path)) {
        const std::string w = util::trim(line);
        if (!w.empty()) words.insert(ascii_fold_lower(w));
    }
    return words;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path &path) {
    std::vector<ManifestEntry> entries;
    size_t lineno = 0;
    for (const auto &line : util::read_lines(path)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto cols = util::split(line, '\t');
        if (cols.size() != 4)
            throw Error("manifest " + path.string() + " line " + std::to_string(lineno) +
                        ": expected 4 tab-separated columns");
        entries.push_back({cols[0], cols[1], cols[2], cols[3]});
    }
    return entries;
}

} // namespace btkit::corpus
