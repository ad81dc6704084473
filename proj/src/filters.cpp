#include "corpusqual/filters.hpp"

#include <algorithm>
#include <unordered_set>

namespace corpusqual {

const char* filter_name(std::size_t id) {
    static const std::array<const char*, kFilterCount> names = {
        "has_first_letter_caps",
        "no_all_caps",
        "word_repetition_ratio",
        "digit_punctuation_ratio",
        "no_special_characters",
        "terminal_punctuation",
        "stop_word_match_2",
        "javascript_flag",
        "token_count_ge_3",
        "word_count_3_256",
        "has_object",
        "has_noun",
        "has_determiner",
        "text_complexity_c1",
    };
    return names.at(id);
}

std::string FilterConfig::fingerprint() const {
    std::string s = "rep=" + std::to_string(word_repetition_max) +
                    ";dp=" + std::to_string(digit_punct_ratio_max) +
                    ";tc=" + std::to_string(min_token_count) +
                    ";wc=" + std::to_string(word_count_min_exclusive) + ".." +
                    std::to_string(word_count_max_exclusive) + ";sw=";
    for (const auto& w : stop_words) {
        s += w;
        s += ',';
    }
    return s;
}

// case-insensitive substring search over raw bytes (phrases are ASCII)
static bool contains_ci(const std::string& haystack, const std::string& needle) {
    auto lower = [](char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c + 32) : c;
    };
    if (needle.empty() || haystack.size() < needle.size()) return false;
    for (std::size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < needle.size(); ++j) {
            if (lower(haystack[i + j]) != lower(needle[j])) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

IndicatorVector evaluate(const std::string& line_text, const Annotation& annotation,
                         const FilterConfig& config) {
    IndicatorVector bits;
    const std::vector<uint32_t> cps = decode_utf8(line_text);

    // 0: first alphabetic character is uppercase
    for (uint32_t cp : cps) {
        if (cp_is_alpha(cp)) {
            bits[kHasFirstLetterCaps] = cp_is_upper(cp);
            break;
        }
    }

    // 1: not all alphabetic characters uppercase (no letters counts as pass)
    {
        bool any_lower = false, any_alpha = false;
        for (uint32_t cp : cps) {
            if (!cp_is_alpha(cp)) continue;
            any_alpha = true;
            if (!cp_is_upper(cp)) any_lower = true;
        }
        bits[kNoAllCaps] = !any_alpha || any_lower;
    }

    // 2: word repetition ratio = (words - distinct case-folded words) / words
    {
        std::unordered_set<std::string> distinct;
        std::size_t words = 0;
        for (const Token& t : annotation.tokens) {
            if (t.kind != TokenKind::Word) continue;
            ++words;
            distinct.insert(fold_case(t.text));
        }
        double ratio = words == 0
                           ? 0.0
                           : static_cast<double>(words - distinct.size()) / words;
        bits[kWordRepetitionRatio] = ratio <= config.word_repetition_max;
    }

    // 3: (digit + punctuation tokens) / max(word_count, 1)
    {
        std::size_t dp = 0;
        for (const Token& t : annotation.tokens)
            if (t.kind == TokenKind::Digit || t.kind == TokenKind::Punctuation) ++dp;
        double denom = static_cast<double>(std::max<std::size_t>(annotation.word_count, 1));
        bits[kDigitPunctuationRatio] = dp / denom <= config.digit_punct_ratio_max;
    }

    // 4: no "{" anywhere
    bits[kNoSpecialCharacters] = line_text.find('{') == std::string::npos;

    // 5: terminal punctuation
    {
        for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
            if (cp_is_space(*it)) continue;
            bits[kTerminalPunctuation] =
                *it == '.' || *it == '!' || *it == '?' || *it == '"';
            break;
        }
    }

    // 6: at least two stop-word token occurrences, case-folded
    {
        std::size_t hits = 0;
        for (const Token& t : annotation.tokens) {
            if (t.kind != TokenKind::Word) continue;
            std::string folded = fold_case(t.text);
            if (std::find(config.stop_words.begin(), config.stop_words.end(), folded) !=
                config.stop_words.end())
                ++hits;
        }
        bits[kStopWordMatch2] = hits >= 2;
    }

    // 7: does not contain "javascript" / "lorem ipsum"
    bits[kJavascriptFlag] = !contains_ci(line_text, "javascript") &&
                            !contains_ci(line_text, "lorem ipsum");

    // 8, 9: length filters
    bits[kTokenCountGe3] = annotation.token_count >= config.min_token_count;
    bits[kWordCount3To256] = annotation.word_count > config.word_count_min_exclusive &&
                             annotation.word_count < config.word_count_max_exclusive;

    // 10-13: syntax-aware filters
    bits[kHasObject] = !annotation.objects.empty();
    for (const Token& t : annotation.tokens) {
        if (t.tag == Tag::NOUN) bits[kHasNoun] = true;
        if (t.tag == Tag::DET) bits[kHasDeterminer] = true;
    }
    for (const ObjectSpan& span : annotation.objects) {
        if (!span.dependents.empty()) {
            bits[kTextComplexityC1] = true;
            break;
        }
    }
    return bits;
}

}  // namespace corpusqual
