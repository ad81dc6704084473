#include "corpusqual/annotator.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace corpusqual {

const char* tag_name(Tag t) {
    switch (t) {
        case Tag::NOUN: return "NOUN";
        case Tag::VERB: return "VERB";
        case Tag::DET: return "DET";
        case Tag::ADP: return "ADP";
        case Tag::PRON: return "PRON";
        case Tag::ADJ: return "ADJ";
        case Tag::ADV: return "ADV";
        case Tag::OTHER: return "OTHER";
    }
    return "OTHER";
}

static Tag parse_tag(const std::string& s) {
    if (s == "NOUN") return Tag::NOUN;
    if (s == "VERB") return Tag::VERB;
    if (s == "DET") return Tag::DET;
    if (s == "ADP") return Tag::ADP;
    if (s == "PRON") return Tag::PRON;
    if (s == "ADJ") return Tag::ADJ;
    if (s == "ADV") return Tag::ADV;
    if (s == "OTHER") return Tag::OTHER;
    throw std::runtime_error("unknown tag: " + s);
}

std::vector<uint32_t> decode_utf8(const std::string& s) {
    std::vector<uint32_t> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        unsigned char c = static_cast<unsigned char>(s[i]);
        uint32_t cp = 0;
        std::size_t len = 1;
        if (c < 0x80) {
            cp = c;
        } else if ((c >> 5) == 0x6) {
            cp = c & 0x1F;
            len = 2;
        } else if ((c >> 4) == 0xE) {
            cp = c & 0x0F;
            len = 3;
        } else if ((c >> 3) == 0x1E) {
            cp = c & 0x07;
            len = 4;
        } else {
            // stray continuation byte; keep as-is
            out.push_back(c);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(c);
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(s[i + k]);
            if ((cc >> 6) != 0x2) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            out.push_back(c);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

static void encode_utf8(uint32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool cp_is_space(uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' ||
           cp == '\v' || cp == 0xA0;
}

bool cp_is_digit(uint32_t cp) { return cp >= '0' && cp <= '9'; }

bool cp_is_punct(uint32_t cp) {
    if (cp < 0x80) {
        return (cp >= '!' && cp <= '/') || (cp >= ':' && cp <= '@') ||
               (cp >= '[' && cp <= '`') || (cp >= '{' && cp <= '~');
    }
    switch (cp) {
        case 0x2018:  // left single quote
        case 0x2019:  // right single quote
        case 0x201C:
        case 0x201D:
        case 0x2013:  // en dash
        case 0x2014:  // em dash
        case 0x2026:  // ellipsis
        case 0x00AB:
        case 0x00BB:
        case 0x00A1:
        case 0x00BF:
        case 0x2022:  // bullet
        case 0x00B7:
            return true;
        default:
            return false;
    }
}

bool cp_is_alpha(uint32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z');
    }
    // non-ASCII codepoints that are not in the punctuation set count as letters
    return !cp_is_punct(cp) && !cp_is_space(cp);
}

bool cp_is_upper(uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return true;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return true;  // Latin-1 uppercase
    return false;
}

static uint32_t cp_fold(uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 32;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 32;
    if (cp == 0x2019) return '\'';  // curly apostrophe -> ascii
    return cp;
}

std::string fold_case(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (uint32_t cp : decode_utf8(s)) encode_utf8(cp_fold(cp), out);
    return out;
}

// apostrophes and hyphens may appear inside a word token
static bool cp_is_word_interior(uint32_t cp) {
    return cp == '\'' || cp == 0x2019 || cp == '-';
}

Annotator Annotator::from_files(const std::string& lexicon_path,
                                const std::string& suffix_rules_path) {
    Annotator a;
    auto load = [](const std::string& path, auto&& sink) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open " + path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty() || line[0] == '#') continue;
            auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                         ": expected word<TAB>TAG");
            sink(line.substr(0, tab), parse_tag(line.substr(tab + 1)));
        }
    };
    load(lexicon_path, [&](std::string w, Tag t) { a.lexicon_[std::move(w)] = t; });
    load(suffix_rules_path,
         [&](std::string s, Tag t) { a.suffix_rules_.emplace_back(std::move(s), t); });
    std::stable_sort(a.suffix_rules_.begin(), a.suffix_rules_.end(),
                     [](const auto& x, const auto& y) {
                         return x.first.size() > y.first.size();
                     });
    return a;
}

static TokenKind classify(const std::vector<uint32_t>& cps) {
    bool all_digit = !cps.empty();
    bool all_punct = !cps.empty();
    bool wordish = false;
    bool has_alpha = false;
    for (uint32_t cp : cps) {
        if (!cp_is_digit(cp)) all_digit = false;
        if (!cp_is_punct(cp)) all_punct = false;
        if (cp_is_alpha(cp)) has_alpha = true;
    }
    if (all_digit) return TokenKind::Digit;
    if (all_punct) return TokenKind::Punctuation;
    wordish = has_alpha;
    for (uint32_t cp : cps) {
        if (!cp_is_alpha(cp) && !cp_is_word_interior(cp)) {
            wordish = false;
            break;
        }
    }
    return wordish ? TokenKind::Word : TokenKind::Other;
}

std::vector<Token> Annotator::tokenize(const std::string& text) const {
    std::vector<Token> tokens;
    std::vector<uint32_t> cps = decode_utf8(text);
    std::size_t i = 0;
    auto emit = [&](std::vector<uint32_t> piece) {
        if (piece.empty()) return;
        Token t;
        t.kind = classify(piece);
        for (uint32_t cp : piece) encode_utf8(cp, t.text);
        t.position = tokens.size();
        tokens.push_back(std::move(t));
    };
    while (i < cps.size()) {
        while (i < cps.size() && cp_is_space(cps[i])) ++i;
        std::size_t start = i;
        while (i < cps.size() && !cp_is_space(cps[i])) ++i;
        if (start == i) break;
        // peel leading and trailing punctuation into single-char tokens
        std::size_t lo = start, hi = i;
        while (lo < hi && cp_is_punct(cps[lo])) {
            emit({cps[lo]});
            ++lo;
        }
        std::size_t tail = hi;
        while (tail > lo && cp_is_punct(cps[tail - 1])) --tail;
        emit(std::vector<uint32_t>(cps.begin() + lo, cps.begin() + tail));
        for (std::size_t k = tail; k < hi; ++k) emit({cps[k]});
    }
    return tokens;
}

void Annotator::tag(std::vector<Token>& tokens) const {
    for (Token& t : tokens) {
        if (t.kind != TokenKind::Word) {
            t.tag = Tag::OTHER;
            continue;
        }
        std::string folded = fold_case(t.text);
        auto it = lexicon_.find(folded);
        if (it != lexicon_.end()) {
            t.tag = it->second;
            continue;
        }
        t.tag = Tag::NOUN;  // unknown-word fallback
        for (const auto& [suffix, tag] : suffix_rules_) {
            if (folded.size() > suffix.size() &&
                folded.compare(folded.size() - suffix.size(), suffix.size(), suffix) == 0) {
                t.tag = tag;
                break;
            }
        }
    }
}

std::vector<ObjectSpan> Annotator::detect_objects(const std::vector<Token>& tokens) const {
    std::vector<ObjectSpan> spans;
    for (std::size_t h = 0; h < tokens.size(); ++h) {
        const Tag ht = tokens[h].tag;
        if (ht != Tag::NOUN && ht != Tag::PRON) continue;
        // dependents: maximal DET/ADJ run immediately before the head
        std::size_t j = h;
        while (j > 0 &&
               (tokens[j - 1].tag == Tag::DET || tokens[j - 1].tag == Tag::ADJ))
            --j;
        if (j == 0) continue;  // no governor to the left
        const Tag gt = tokens[j - 1].tag;
        if (gt != Tag::VERB && gt != Tag::ADP) continue;
        ObjectSpan span;
        span.head = h;
        for (std::size_t k = j; k < h; ++k) span.dependents.push_back(k);
        spans.push_back(std::move(span));
    }
    return spans;
}

Annotation Annotator::annotate(const std::string& text) const {
    Annotation a;
    a.tokens = tokenize(text);
    tag(a.tokens);
    a.objects = detect_objects(a.tokens);
    a.token_count = a.tokens.size();
    for (const Token& t : a.tokens)
        if (t.kind == TokenKind::Word) ++a.word_count;
    return a;
}

std::size_t Annotator::count_tokens(const std::string& text) const {
    return tokenize(text).size();
}

}  // namespace corpusqual
