#pragma once

#include <vector>

#include "corpusqual/annotator.hpp"
#include "corpusqual/calibration.hpp"
#include "corpusqual/corpus_io.hpp"
#include "corpusqual/filters.hpp"

namespace corpusqual {

/// Normalized weighted sum of passed filters: sum(w_i * I_i) / sum(w_i).
/// Summation runs in ascending filter id for bit reproducibility.
double score_line(const IndicatorVector& indicators, const FilterWeights& weights);

/// Token-count-weighted mean of line scores; 0 for empty documents.
double score_document(const std::vector<std::pair<std::size_t, double>>& lines);

/// Full per-document pipeline: split, annotate, evaluate, score.
ScoreRecord score_one_document(const RawDocument& doc, const FilterWeights& weights,
                               const Annotator& annotator,
                               const FilterConfig& config = {});

struct ScoringStats {
    std::size_t documents = 0;
    std::size_t lines = 0;
    std::size_t skipped = 0;
    double seconds = 0.0;
};

/// Scores a corpus; output order equals input order and is bit-identical
/// to the single-thread run for any thread count.
std::vector<ScoreRecord> score_corpus(const std::vector<RawDocument>& corpus,
                                      const FilterWeights& weights,
                                      const Annotator& annotator, unsigned threads = 1,
                                      const FilterConfig& config = {},
                                      ScoringStats* stats = nullptr);

/// Streaming variant: reads from `reader`, writes records in input order.
ScoringStats score_corpus_stream(CorpusReader& reader, const FilterWeights& weights,
                                 const Annotator& annotator, unsigned threads,
                                 const FilterConfig& config, std::ostream& out,
                                 const std::string& out_path);

}  // namespace corpusqual
