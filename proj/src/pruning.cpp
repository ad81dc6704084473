#include "corpusqual/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

namespace corpusqual {

using nlohmann::json;

PruneResult prune_select(const std::vector<ScoreRecord>& scores, const PruneSpec& spec) {
    if (!(spec.keep_top_percent > 0.0 && spec.keep_top_percent <= 100.0))
        throw std::runtime_error("keep_top_percent must be in (0, 100]");
    const std::size_t n = scores.size();
    const std::size_t k =
        static_cast<std::size_t>(std::floor(n * spec.keep_top_percent / 100.0));
    if (k == 0) throw std::runtime_error("pruning would empty corpus");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    // descending score, earlier input position wins ties
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a].doc_score > scores[b].doc_score;
    });

    PruneResult result;
    result.retained.assign(order.begin(), order.begin() + k);
    result.dropped.assign(order.begin() + k, order.end());
    result.threshold_score = scores[order[k - 1]].doc_score;
    std::sort(result.retained.begin(), result.retained.end());
    std::sort(result.dropped.begin(), result.dropped.end());
    return result;
}

void prune(const std::vector<ScoreRecord>& scores, const std::vector<RawDocument>& corpus,
           const PruneSpec& spec, CorpusFormat format, const std::string& output_path,
           const std::string& manifest_path) {
    std::unordered_map<std::string, std::size_t> score_index;
    score_index.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) score_index[scores[i].doc_id] = i;

    std::vector<std::string> offenders;
    std::vector<ScoreRecord> aligned;
    aligned.reserve(corpus.size());
    for (const RawDocument& doc : corpus) {
        auto it = score_index.find(doc.id);
        if (it == score_index.end()) {
            if (offenders.size() < 10) offenders.push_back(doc.id);
            continue;
        }
        aligned.push_back(scores[it->second]);
    }
    if (!offenders.empty()) {
        std::string msg = "documents without scores:";
        for (const auto& id : offenders) msg += " " + id;
        throw std::runtime_error(msg);
    }

    PruneResult sel = prune_select(aligned, spec);

    CorpusWriter writer(output_path, format);
    for (std::size_t idx : sel.retained) writer.write(corpus[idx]);
    writer.close();

    const std::string ids_path = manifest_path + ".retained_ids";
    {
        std::ofstream ids(ids_path);
        if (!ids) throw std::runtime_error("cannot open " + ids_path);
        for (std::size_t idx : sel.retained) ids << corpus[idx].id << "\n";
    }
    json manifest = {
        {"retained_count", sel.retained.size()},
        {"dropped_count", sel.dropped.size()},
        {"threshold_score", sel.threshold_score},
        {"keep_top_percent", spec.keep_top_percent},
        {"retained_ids_path", ids_path},
    };
    std::ofstream out(manifest_path);
    if (!out) throw std::runtime_error("cannot open manifest file: " + manifest_path);
    out << manifest.dump(2) << "\n";
}

SplitResult split_select(std::size_t doc_count, double validation_fraction, uint64_t seed) {
    if (!(validation_fraction > 0.0 && validation_fraction < 1.0))
        throw std::runtime_error("validation fraction must be in (0, 1)");
    const std::size_t v =
        static_cast<std::size_t>(std::floor(doc_count * validation_fraction));

    std::vector<std::size_t> order(doc_count);
    std::iota(order.begin(), order.end(), 0);
    // explicit Fisher-Yates so the split is stable across standard libraries
    std::mt19937_64 rng(seed);
    for (std::size_t i = doc_count; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }

    SplitResult result;
    result.validation.assign(order.begin(), order.begin() + v);
    result.train.assign(order.begin() + v, order.end());
    std::sort(result.validation.begin(), result.validation.end());
    std::sort(result.train.begin(), result.train.end());
    return result;
}

void split(const std::vector<RawDocument>& corpus, double validation_fraction,
           uint64_t seed, CorpusFormat format, const std::string& train_path,
           const std::string& validation_path) {
    SplitResult sel = split_select(corpus.size(), validation_fraction, seed);
    CorpusWriter train(train_path, format);
    for (std::size_t idx : sel.train) train.write(corpus[idx]);
    train.close();
    CorpusWriter validation(validation_path, format);
    for (std::size_t idx : sel.validation) validation.write(corpus[idx]);
    validation.close();
}

}  // namespace corpusqual
