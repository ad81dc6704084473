#pragma once

#include <array>
#include <bitset>
#include <string>

#include "corpusqual/annotator.hpp"
#include "corpusqual/corpus_io.hpp"

namespace corpusqual {

inline constexpr std::size_t kFilterCount = 14;

/// Stable filter ids; the names are part of the weights-file format.
enum FilterId : std::size_t {
    kHasFirstLetterCaps = 0,
    kNoAllCaps = 1,
    kWordRepetitionRatio = 2,
    kDigitPunctuationRatio = 3,
    kNoSpecialCharacters = 4,
    kTerminalPunctuation = 5,
    kStopWordMatch2 = 6,
    kJavascriptFlag = 7,
    kTokenCountGe3 = 8,
    kWordCount3To256 = 9,
    kHasObject = 10,
    kHasNoun = 11,
    kHasDeterminer = 12,
    kTextComplexityC1 = 13,
};

const char* filter_name(std::size_t id);

/// bits[i] = 1 means the line satisfies the i-th well-formedness attribute.
using IndicatorVector = std::bitset<kFilterCount>;

struct FilterConfig {
    double word_repetition_max = 0.2;
    double digit_punct_ratio_max = 0.25;
    std::size_t min_token_count = 3;
    std::size_t word_count_min_exclusive = 3;
    std::size_t word_count_max_exclusive = 256;
    std::array<std::string, 8> stop_words = {"the", "be", "to", "of",
                                             "and", "that", "have", "with"};

    /// Stable fingerprint of the thresholds, folded into the corpus profile.
    std::string fingerprint() const;
};

IndicatorVector evaluate(const std::string& line_text, const Annotation& annotation,
                         const FilterConfig& config = {});

inline IndicatorVector evaluate(const Line& line, const Annotation& annotation,
                                const FilterConfig& config = {}) {
    return evaluate(line.text, annotation, config);
}

}  // namespace corpusqual
