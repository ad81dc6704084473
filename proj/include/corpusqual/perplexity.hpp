#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpusqual/corpus_io.hpp"

namespace corpusqual {

/// Token count and total natural-log probability over a line set.
struct PerplexityReport {
    std::size_t token_count = 0;
    double total_log_prob = 0.0;
    double ppl() const;
};

/// Interpolated Kneser-Ney n-gram model. Immutable once trained.
class NGramModel {
public:
    NGramModel() = default;  // empty model; assign from train() or load()

    static constexpr const char* kUnknown = "<unk>";
    static constexpr const char* kBegin = "<s>";
    static constexpr const char* kEnd = "</s>";

    static NGramModel train(const std::vector<std::vector<std::string>>& token_lines,
                            std::size_t order = 3, std::size_t min_count = 2);

    std::size_t order() const { return order_; }
    std::size_t vocab_size() const { return vocab_.size(); }

    /// Conditional probability of `word` after `context` (most recent last).
    /// Unknown words map to the <unk> sentinel; never returns zero.
    double probability(const std::vector<std::string>& context,
                       const std::string& word) const;

    /// Log-probability of a tokenized line: end symbol scored, begin symbols not.
    PerplexityReport score_line(const std::vector<std::string>& tokens) const;

    /// Words the model can predict (everything except the begin symbol).
    std::vector<std::string> predictable_vocab() const;

    void save(const std::string& path) const;
    static NGramModel load(const std::string& path);

private:
    void build_tables();
    uint32_t lookup(const std::string& word) const;
    double prob_ids(const uint32_t* context, std::size_t len, uint32_t word) const;

    std::size_t order_ = 3;
    std::size_t min_count_ = 2;
    double discount_ = 0.75;
    std::vector<std::string> vocab_;  // sorted; includes sentinels
    std::unordered_map<std::string, uint32_t> vocab_index_;
    uint32_t begin_id_ = 0, end_id_ = 0, unk_id_ = 0;
    std::size_t predict_vocab_size_ = 0;  // excludes <s>

    // raw n-gram counts per order (key = packed ids), built at train time
    std::vector<std::map<std::vector<uint32_t>, uint64_t>> counts_;

    // derived tables
    struct ContextStats {
        uint64_t total = 0;       // sum of counts (raw or continuation)
        uint64_t distinct = 0;    // distinct following words
    };
    // per order k (1-based index k-1): gram value used in the discounted term
    std::vector<std::unordered_map<std::string, uint64_t>> gram_value_;
    std::vector<std::unordered_map<std::string, ContextStats>> context_stats_;
    uint64_t unigram_total_ = 0;    // normalizer for the unigram level
    uint64_t unigram_distinct_ = 0; // types with nonzero unigram value
};

/// Per-line perplexity source used by calibration; implementations must be
/// safe for concurrent read access.
class PerplexityBackend {
public:
    virtual ~PerplexityBackend() = default;
    /// (token_count, total_log_prob) for one line.
    virtual PerplexityReport line_report(const Line& line) const = 0;
    /// Whether a report is available for this line (external scores may lack keys).
    virtual bool has(const Line& line) const { return true; }
    virtual std::string id() const = 0;
};

class NGramBackend final : public PerplexityBackend {
public:
    NGramBackend(const NGramModel& model, const Annotator& annotator)
        : model_(model), annotator_(annotator) {}
    PerplexityReport line_report(const Line& line) const override;
    std::string id() const override;

private:
    const NGramModel& model_;
    const Annotator& annotator_;
};

/// Externally supplied scores keyed by (doc_id, line_index).
class ExternalScoresBackend final : public PerplexityBackend {
public:
    static ExternalScoresBackend load(const std::string& path);
    PerplexityReport line_report(const Line& line) const override;
    bool has(const Line& line) const override;
    std::string id() const override { return "external"; }

private:
    std::unordered_map<std::string, PerplexityReport> scores_;
};

PerplexityReport combine(const PerplexityReport& a, const PerplexityReport& b);

}  // namespace corpusqual
