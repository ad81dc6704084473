#pragma once

#include <cstdint>
#include <string>

#include "corpusqual/filters.hpp"

namespace corpusqual {

/// Pipeline defaults. Loaded from a flat key=value file, flags override.
struct PipelineConfig {
    FilterConfig filters;
    std::string lexicon_path;
    std::string suffix_rules_path;
    std::size_t ngram_order = 3;
    std::size_t min_count = 2;
    unsigned threads = 0;  // 0 = available cores
    std::string format = "jsonl";
    uint64_t seed = 0;

    static PipelineConfig load(const std::string& path);
    void apply(const std::string& key, const std::string& value);
};

/// Compiled-in location of the shipped lexicon/suffix data files.
std::string default_data_dir();

}  // namespace corpusqual
