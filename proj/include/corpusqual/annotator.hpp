#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace corpusqual {

enum class TokenKind { Word, Digit, Punctuation, Other };

enum class Tag { NOUN, VERB, DET, ADP, PRON, ADJ, ADV, OTHER };

const char* tag_name(Tag t);

struct Token {
    std::string text;
    TokenKind kind = TokenKind::Other;
    Tag tag = Tag::OTHER;
    std::size_t position = 0;
};

/// An object head plus the determiner/adjective run attached to it.
struct ObjectSpan {
    std::size_t head = 0;
    std::vector<std::size_t> dependents;
};

struct Annotation {
    std::vector<Token> tokens;
    std::vector<ObjectSpan> objects;
    std::size_t word_count = 0;
    std::size_t token_count = 0;
};

/// Closed-class lexicon plus suffix rules, loaded once and immutable.
/// Entry format is "word<TAB>TAG" (lexicon) and "suffix<TAB>TAG" (rules).
class Annotator {
public:
    static Annotator from_files(const std::string& lexicon_path,
                                const std::string& suffix_rules_path);

    std::vector<Token> tokenize(const std::string& text) const;
    void tag(std::vector<Token>& tokens) const;
    std::vector<ObjectSpan> detect_objects(const std::vector<Token>& tokens) const;

    Annotation annotate(const std::string& text) const;

    /// Token count only, for line splitting.
    std::size_t count_tokens(const std::string& text) const;

private:
    std::unordered_map<std::string, Tag> lexicon_;
    // sorted longest-first so the first match wins
    std::vector<std::pair<std::string, Tag>> suffix_rules_;
};

// Codepoint-level helpers shared with the filters.
std::vector<uint32_t> decode_utf8(const std::string& s);
bool cp_is_alpha(uint32_t cp);
bool cp_is_digit(uint32_t cp);
bool cp_is_punct(uint32_t cp);
bool cp_is_space(uint32_t cp);
bool cp_is_upper(uint32_t cp);
std::string fold_case(const std::string& s);

}  // namespace corpusqual
