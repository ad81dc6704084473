#include "corpusqual/scoring.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <future>
#include <stdexcept>
#include <thread>

namespace corpusqual {

double score_line(const IndicatorVector& indicators, const FilterWeights& weights) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < kFilterCount; ++i) {
        den += weights.weights[i];
        if (indicators[i]) num += weights.weights[i];
    }
    if (!(den > 0.0))
        throw std::runtime_error("score_line: weight sum is zero; recalibrate");
    return num / den;
}

double score_document(const std::vector<std::pair<std::size_t, double>>& lines) {
    double num = 0.0;
    std::size_t total_tokens = 0;
    for (const auto& [tc, s] : lines) {
        num += static_cast<double>(tc) * s;
        total_tokens += tc;
    }
    if (total_tokens == 0) return 0.0;
    return num / static_cast<double>(total_tokens);
}

ScoreRecord score_one_document(const RawDocument& doc, const FilterWeights& weights,
                               const Annotator& annotator, const FilterConfig& config) {
    ScoreRecord rec;
    rec.doc_id = doc.id;
    std::vector<std::pair<std::size_t, double>> weighted;
    for (const Line& line : split_lines(doc, annotator)) {
        Annotation ann = annotator.annotate(line.text);
        double s = score_line(evaluate(line.text, ann, config), weights);
        rec.line_scores.push_back(s);
        rec.token_counts.push_back(line.token_count);
        weighted.emplace_back(line.token_count, s);
    }
    rec.doc_score = score_document(weighted);
    std::size_t total_tokens = 0;
    for (auto tc : rec.token_counts) total_tokens += tc;
    rec.empty_flagged = rec.line_scores.empty() || total_tokens == 0;
    return rec;
}

namespace {

// fixed-size batches keep the ordered merge cheap and the parallel
// decomposition independent of thread count
constexpr std::size_t kBatchSize = 64;

std::vector<ScoreRecord> score_batch(const RawDocument* docs, std::size_t n,
                                     const FilterWeights& weights,
                                     const Annotator& annotator,
                                     const FilterConfig& config) {
    std::vector<ScoreRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(score_one_document(docs[i], weights, annotator, config));
    return out;
}

}  // namespace

std::vector<ScoreRecord> score_corpus(const std::vector<RawDocument>& corpus,
                                      const FilterWeights& weights,
                                      const Annotator& annotator, unsigned threads,
                                      const FilterConfig& config, ScoringStats* stats) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<ScoreRecord> records;
    records.reserve(corpus.size());
    if (threads <= 1) {
        for (const RawDocument& doc : corpus)
            records.push_back(score_one_document(doc, weights, annotator, config));
    } else {
        const std::size_t nbatches = (corpus.size() + kBatchSize - 1) / kBatchSize;
        std::vector<std::future<std::vector<ScoreRecord>>> futures(nbatches);
        std::atomic<std::size_t> next{0};
        std::vector<std::promise<std::vector<ScoreRecord>>> promises(nbatches);
        for (std::size_t b = 0; b < nbatches; ++b) futures[b] = promises[b].get_future();
        auto worker = [&] {
            std::size_t b;
            while ((b = next.fetch_add(1)) < nbatches) {
                std::size_t lo = b * kBatchSize;
                std::size_t n = std::min(kBatchSize, corpus.size() - lo);
                promises[b].set_value(
                    score_batch(corpus.data() + lo, n, weights, annotator, config));
            }
        };
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::size_t b = 0; b < nbatches; ++b)
            for (ScoreRecord& r : futures[b].get()) records.push_back(std::move(r));
        for (auto& t : pool) t.join();
    }
    if (stats) {
        stats->documents = records.size();
        stats->lines = 0;
        for (const auto& r : records) stats->lines += r.line_scores.size();
        stats->skipped = 0;
        stats->seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return records;
}

ScoringStats score_corpus_stream(CorpusReader& reader, const FilterWeights& weights,
                                 const Annotator& annotator, unsigned threads,
                                 const FilterConfig& config, std::ostream& out,
                                 const std::string& out_path) {
    ScoringStats stats;
    auto t0 = std::chrono::steady_clock::now();
    // read in windows so memory stays bounded while workers are kept busy
    const std::size_t window = std::max<std::size_t>(threads, 1) * kBatchSize * 4;
    std::vector<RawDocument> buffer;
    RawDocument doc;
    bool more = true;
    while (more) {
        buffer.clear();
        while (buffer.size() < window && (more = reader.next(doc)))
            buffer.push_back(std::move(doc));
        if (buffer.empty()) break;
        std::vector<ScoreRecord> records =
            score_corpus(buffer, weights, annotator, threads, config, nullptr);
        write_scores(records, out, out_path);
        stats.documents += records.size();
        for (const auto& r : records) stats.lines += r.line_scores.size();
    }
    stats.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return stats;
}

}  // namespace corpusqual
