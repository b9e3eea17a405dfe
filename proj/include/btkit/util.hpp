#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace btkit::util {

// ---- UTF-8 ----------------------------------------------------------------

// Returns the byte offset of the first invalid UTF-8 sequence, or -1 if the
// whole string is valid. Overlong encodings and surrogates are rejected.
long utf8_invalid_at(std::string_view s);

// Decodes the codepoint starting at byte offset i and advances i past it.
// The input must be valid UTF-8.
char32_t utf8_next(std::string_view s, size_t &i);

std::vector<char32_t> utf8_decode(std::string_view s);
void utf8_append(std::string &out, char32_t cp);
std::string utf8_encode(const std::vector<char32_t> &cps);

// ---- hashing ---------------------------------------------------------------

// 64-bit FNV-1a; used for fingerprints and artifact content hashes.
uint64_t fnv1a64(std::string_view bytes, uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(uint64_t v);
uint64_t parse_hex64(std::string_view s);

// ---- deterministic shuffling ----------------------------------------------

// Fisher-Yates driven by mt19937_64 with explicit modulo draws, so the
// permutation is identical on every platform for a given (seed, n).
std::vector<size_t> shuffled_indices(size_t n, uint64_t seed);

template <typename T>
std::vector<T> apply_permutation(const std::vector<T> &items, const std::vector<size_t> &perm) {
    std::vector<T> out;
    out.reserve(items.size());
    for (size_t i : perm) out.push_back(items[i]);
    return out;
}

// ---- strings ----------------------------------------------------------------

std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string> &parts, std::string_view sep);
std::string trim(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Round-trip-exact double formatting ("%.17g") for model and state files.
std::string format_g17(double v);
// Fixed-point display rounding for reports.
std::string format_fixed(double v, int decimals);
double parse_double(std::string_view s);
long parse_long(std::string_view s);

// ---- files -----------------------------------------------------------------

// Reads a whole file; throws btkit::Error when missing or unreadable.
std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::string_view content);

// Splits file content into lines on LF, validating UTF-8 first (the error
// names the byte offset). A trailing CR per line is stripped.
std::vector<std::string> read_lines(const std::filesystem::path &path);

uint64_t file_hash(const std::filesystem::path &path);

std::string iso_timestamp_utc();

} // namespace btkit::util
