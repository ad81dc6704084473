#include "corpusqual/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef CORPUSQUAL_DATA_DIR
#define CORPUSQUAL_DATA_DIR "data"
#endif

namespace corpusqual {

std::string default_data_dir() { return CORPUSQUAL_DATA_DIR; }

void PipelineConfig::apply(const std::string& key, const std::string& value) {
    if (key == "word_repetition_max") {
        filters.word_repetition_max = std::stod(value);
    } else if (key == "digit_punct_ratio_max") {
        filters.digit_punct_ratio_max = std::stod(value);
    } else if (key == "min_token_count") {
        filters.min_token_count = std::stoul(value);
    } else if (key == "word_count_min_exclusive") {
        filters.word_count_min_exclusive = std::stoul(value);
    } else if (key == "word_count_max_exclusive") {
        filters.word_count_max_exclusive = std::stoul(value);
    } else if (key == "stop_words") {
        std::istringstream ss(value);
        std::string w;
        std::size_t i = 0;
        while (std::getline(ss, w, ',') && i < filters.stop_words.size())
            filters.stop_words[i++] = w;
        if (i != filters.stop_words.size())
            throw std::runtime_error("stop_words needs exactly " +
                                     std::to_string(filters.stop_words.size()) + " entries");
    } else if (key == "lexicon") {
        lexicon_path = value;
    } else if (key == "suffix_rules") {
        suffix_rules_path = value;
    } else if (key == "ngram_order") {
        ngram_order = std::stoul(value);
    } else if (key == "min_count") {
        min_count = std::stoul(value);
    } else if (key == "threads") {
        threads = static_cast<unsigned>(std::stoul(value));
    } else if (key == "format") {
        format = value;
    } else if (key == "seed") {
        seed = std::stoull(value);
    } else {
        throw std::runtime_error("unknown config key: " + key);
    }
}

PipelineConfig PipelineConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    PipelineConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected key=value");
        try {
            cfg.apply(line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

}  // namespace corpusqual
