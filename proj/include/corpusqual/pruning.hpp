#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corpusqual/corpus_io.hpp"

namespace corpusqual {

struct PruneSpec {
    double keep_top_percent = 100.0;  // in (0, 100]
    uint64_t seed = 0;                // split only
};

struct PruneResult {
    std::vector<std::size_t> retained;  // indexes into the input, input order
    std::vector<std::size_t> dropped;
    double threshold_score = 0.0;  // minimum retained doc_score
};

/// Retains floor(N * keep_top_percent / 100) documents by descending
/// doc_score; ties broken by earlier input position.
PruneResult prune_select(const std::vector<ScoreRecord>& scores, const PruneSpec& spec);

/// Verifies every doc id has a score (first 10 offenders reported), selects,
/// writes the pruned corpus (input order, input format), the manifest JSON
/// and the retained-ids list.
void prune(const std::vector<ScoreRecord>& scores, const std::vector<RawDocument>& corpus,
           const PruneSpec& spec, CorpusFormat format, const std::string& output_path,
           const std::string& manifest_path);

struct SplitResult {
    std::vector<std::size_t> train;       // input order
    std::vector<std::size_t> validation;  // input order
};

/// Seeded document-level sample: floor(N * fraction) validation docs,
/// deterministic per (corpus size, seed), disjoint and covering.
SplitResult split_select(std::size_t doc_count, double validation_fraction, uint64_t seed);

void split(const std::vector<RawDocument>& corpus, double validation_fraction,
           uint64_t seed, CorpusFormat format, const std::string& train_path,
           const std::string& validation_path);

}  // namespace corpusqual
