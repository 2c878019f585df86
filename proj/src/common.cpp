#include "dae/common.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace dae {

std::string to_hex(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::string collapse_spaces(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool in_space = false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

std::vector<std::string> word_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            tokens.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(cur);
    return tokens;
}

bool is_english_stopword(const std::string& t) {
    static const std::unordered_set<std::string> kStop = {
        "a",    "an",   "and",  "are",  "as",   "at",   "be",    "but",  "by",
        "for",  "from", "had",  "has",  "have", "he",   "her",   "his",  "i",
        "if",   "in",   "into", "is",   "it",   "its",  "me",    "my",   "no",
        "not",  "of",   "on",   "or",   "our",  "she",  "so",    "such", "that",
        "the",  "their","them", "then", "there","these","they",  "this", "those",
        "to",   "up",   "was",  "we",   "were", "what", "when",  "which","who",
        "will", "with", "you",  "your", "about","after","before","been", "am",
        "do",   "does", "did",  "just", "out",  "over", "than",  "too",  "very",
    };
    return kStop.count(t) > 0;
}

}  // namespace dae
