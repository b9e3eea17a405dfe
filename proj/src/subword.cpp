#include "btkit/subword.hpp"
#include "btkit/error.hpp"
#include "btkit/util.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace btkit::subword {

namespace {

using Symbols = std::vector<std::string>;

Symbols word_to_symbols(const std::string &word, const std::string &marker) {
    Symbols symbols;
    size_t i = 0;
    while (i < word.size()) {
        const size_t start = i;
        util::utf8_next(word, i);
        symbols.push_back(word.substr(start, i - start));
    }
    symbols.push_back(marker);
    return symbols;
}

void merge_in_place(Symbols &symbols, const MergeRule &rule) {
    Symbols out;
    out.reserve(symbols.size());
    size_t i = 0;
    while (i < symbols.size()) {
        if (i + 1 < symbols.size() && symbols[i] == rule.left && symbols[i + 1] == rule.right) {
            out.push_back(rule.left + rule.right);
            i += 2;
        } else {
            out.push_back(symbols[i]);
            ++i;
        }
    }
    symbols = std::move(out);
}

void check_marker_absent(const std::string &text, const std::string &marker) {
    if (text.find(marker) != std::string::npos)
        throw Error("input contains the reserved end-of-word marker '" + marker + "'");
}

} // namespace

uint64_t BpeModel::fingerprint() const {
    std::string bytes = end_of_word_marker + "\n";
    for (const auto &m : merges) bytes += m.left + " " + m.right + "\n";
    return util::fnv1a64(bytes);
}

BpeModel learn_bpe(const std::vector<std::string> &sentences, int target_vocab_size) {
    if (sentences.empty()) throw Error("learn_bpe: empty corpus");

    BpeModel model;
    model.target_vocab_size = target_vocab_size;

    // word frequency map, deterministic order
    std::map<std::string, long> word_freq;
    bool any_word = false;
    for (const auto &sentence : sentences) {
        check_marker_absent(sentence, model.end_of_word_marker);
        for (auto &w : util::split_whitespace(sentence)) {
            ++word_freq[w];
            any_word = true;
        }
    }
    if (!any_word) throw Error("learn_bpe: corpus contains no words");

    std::vector<Symbols> words;
    std::vector<long> freqs;
    words.reserve(word_freq.size());
    for (const auto &[word, freq] : word_freq) {
        words.push_back(word_to_symbols(word, model.end_of_word_marker));
        freqs.push_back(freq);
    }

    for (const auto &symbols : words)
        for (const auto &s : symbols) model.vocab.insert(s);

    if (target_vocab_size <= static_cast<int>(model.vocab.size()))
        throw Error("learn_bpe: target_vocab_size " + std::to_string(target_vocab_size) +
                    " must exceed the base symbol count " + std::to_string(model.vocab.size()));

    // pair counts plus the words each pair occurs in, updated incrementally
    using Pair = std::pair<std::string, std::string>;
    std::map<Pair, long> pair_counts;
    std::map<Pair, std::set<size_t>> pair_words;
    auto count_word = [&](size_t wi, long sign) {
        const Symbols &symbols = words[wi];
        for (size_t i = 0; i + 1 < symbols.size(); ++i) {
            const Pair p{symbols[i], symbols[i + 1]};
            pair_counts[p] += sign * freqs[wi];
            if (sign > 0) pair_words[p].insert(wi);
        }
    };
    for (size_t wi = 0; wi < words.size(); ++wi) count_word(wi, +1);

    while (static_cast<int>(model.vocab.size()) < target_vocab_size) {
        // highest count; ties resolved by smallest pair (map iteration order)
        const Pair *best = nullptr;
        long best_count = 0;
        for (const auto &[pair, count] : pair_counts) {
            if (count > best_count) {
                best = &pair;
                best_count = count;
            }
        }
        if (!best || best_count < 2) break;

        const MergeRule rule{best->first, best->second};
        const std::set<size_t> affected = pair_words[*best];
        for (size_t wi : affected) {
            count_word(wi, -1);
            merge_in_place(words[wi], rule);
            count_word(wi, +1);
        }
        // drop exhausted entries so the scan stays small
        for (auto it = pair_counts.begin(); it != pair_counts.end();) {
            if (it->second <= 0) {
                pair_words.erase(it->first);
                it = pair_counts.erase(it);
            } else {
                ++it;
            }
        }
        model.merges.push_back(rule);
        model.vocab.insert(rule.left + rule.right);
    }
    return model;
}

std::vector<std::string> gather_text(const corpus::MonolingualCorpus &c) { return c.sentences; }

std::vector<std::string> gather_text(const corpus::BilingualCorpus &c) {
    std::vector<std::string> out;
    out.reserve(c.pairs.size() * 2);
    for (const auto &p : c.pairs) {
        out.push_back(p.source);
        out.push_back(p.target);
    }
    return out;
}

TokenSeq apply_bpe(const BpeModel &model, const std::string &sentence) {
    check_marker_absent(sentence, model.end_of_word_marker);
    TokenSeq seq;
    for (const auto &word : util::split_whitespace(sentence)) {
        Symbols symbols = word_to_symbols(word, model.end_of_word_marker);
        for (const auto &rule : model.merges) {
            if (symbols.size() < 2) break;
            merge_in_place(symbols, rule);
        }
        for (auto &s : symbols) seq.tokens.push_back(std::move(s));
    }
    return seq;
}

std::string decode_bpe(const BpeModel &model, const TokenSeq &tokens) {
    std::string glued;
    for (const auto &t : tokens.tokens) glued += t;

    const std::string &marker = model.end_of_word_marker;
    std::vector<std::string> words;
    size_t start = 0;
    while (start < glued.size()) {
        const size_t pos = glued.find(marker, start);
        if (pos == std::string::npos)
            throw Error("decode_bpe: token stream does not end on a word boundary");
        words.push_back(glued.substr(start, pos - start));
        start = pos + marker.size();
    }
    for (const auto &w : words)
        if (w.empty()) throw Error("decode_bpe: marker in illegal position");
    return util::join(words, " ");
}

void save_bpe(const BpeModel &model, const std::filesystem::path &path) {
    std::string out = "#btkit-bpe v1 fingerprint=" + util::hex64(model.fingerprint()) +
                      " target_vocab_size=" + std::to_string(model.target_vocab_size) + " marker=" +
                      model.end_of_word_marker + "\n";
    for (const auto &m : model.merges) out += m.left + " " + m.right + "\n";
    for (const auto &v : model.vocab) out += "#vocab " + v + "\n";
    util::write_file(path, out);
}

BpeModel load_bpe(const std::filesystem::path &path) {
    const auto lines = util::read_lines(path);
    if (lines.empty() || !util::starts_with(lines[0], "#btkit-bpe v1"))
        throw Error("not a bpe model file: " + path.string());

    BpeModel model;
    uint64_t declared_fp = 0;
    for (const auto &field : util::split_whitespace(lines[0])) {
        if (util::starts_with(field, "fingerprint=")) declared_fp = util::parse_hex64(field.substr(12));
        else if (util::starts_with(field, "target_vocab_size="))
            model.target_vocab_size = static_cast<int>(util::parse_long(field.substr(18)));
        else if (util::starts_with(field, "marker=")) model.end_of_word_marker = field.substr(7);
    }
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::string &line = lines[i];
        if (line.empty()) continue;
        if (util::starts_with(line, "#vocab ")) {
            model.vocab.insert(line.substr(7));
            continue;
        }
        if (line[0] == '#') continue;
        const size_t sp = line.find(' ');
        if (sp == std::string::npos || sp == 0 || sp + 1 >= line.size())
            throw Error("bpe model " + path.string() + " line " + std::to_string(i + 1) +
                        ": malformed merge rule");
        model.merges.push_back({line.substr(0, sp), line.substr(sp + 1)});
    }
    if (model.fingerprint() != declared_fp)
        throw Error("bpe model " + path.string() + ": fingerprint mismatch (file corrupt?)");
    return model;
}

} // namespace btkit::subword
