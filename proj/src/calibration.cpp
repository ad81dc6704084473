#include "corpusqual/calibration.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace corpusqual {

using nlohmann::json;

double FilterWeights::weight_sum() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void FilterWeights::validate() const {
    for (std::size_t i = 0; i < kFilterCount; ++i) {
        if (!(weights[i] >= 0.0 && weights[i] <= 1.0))
            throw std::runtime_error("invalid weights[" + std::to_string(i) + "] (" +
                                     filter_name(i) + "): must be in [0, 1]");
        if (!(ppl_per_filter[i] >= 0.0) && !std::isnan(ppl_per_filter[i]))
            throw std::runtime_error("invalid ppl_per_filter[" + std::to_string(i) + "]");
    }
    if (!(ppl_all >= 0.0))
        throw std::runtime_error("invalid ppl_all: must be >= 0");
    if (!(weight_sum() > 0.0))
        throw std::runtime_error("invalid weights: sum must be > 0 for scoring");
}

static std::string now_iso8601() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

FilterWeights calibrate(const std::vector<Line>& lines,
                        const std::vector<IndicatorVector>& indicators,
                        const PerplexityBackend& backend,
                        const CalibrationOptions& options) {
    if (lines.empty()) throw std::runtime_error("empty calibration corpus");
    if (lines.size() != indicators.size())
        throw std::runtime_error("calibrate: lines and indicators differ in length");

    // surface missing external scores up front, first 10 keys
    {
        std::vector<std::string> missing;
        for (const Line& l : lines) {
            if (!backend.has(l)) {
                missing.push_back(l.doc_id + ":" + std::to_string(l.index));
                if (missing.size() == 10) break;
            }
        }
        if (!missing.empty()) {
            std::string msg = "perplexity backend is missing scores for keys:";
            for (const auto& k : missing) msg += " " + k;
            throw std::runtime_error(msg);
        }
    }

    // one backend pass; subset reports are aggregations of per-line reports
    PerplexityReport all;
    std::array<PerplexityReport, kFilterCount> per_filter{};
    for (std::size_t li = 0; li < lines.size(); ++li) {
        PerplexityReport rep = backend.line_report(lines[li]);
        all = combine(all, rep);
        for (std::size_t i = 0; i < kFilterCount; ++i)
            if (indicators[li][i]) per_filter[i] = combine(per_filter[i], rep);
    }

    FilterWeights w;
    w.ppl_all = all.ppl();
    for (std::size_t i = 0; i < kFilterCount; ++i) {
        if (per_filter[i].token_count == 0) {
            w.weights[i] = 0.0;
            w.ppl_per_filter[i] = 0.0;
            if (options.warnings)
                options.warnings->push_back(std::string("filter ") + filter_name(i) +
                                            " selected no lines; weight set to 0");
            continue;
        }
        w.ppl_per_filter[i] = per_filter[i].ppl();
        w.weights[i] = std::max(0.0, (w.ppl_all - w.ppl_per_filter[i]) / w.ppl_all);
    }
    if (!(w.weight_sum() > 0.0))
        throw DegenerateCalibration("degenerate calibration: no filter reduces perplexity");

    w.corpus_profile = options.filter_config.fingerprint() + "|backend=" + backend.id() +
                       "|corpus=" + options.corpus_id;
    w.corpus_profile = "h" + std::to_string(std::hash<std::string>{}(w.corpus_profile));
    w.created_at = now_iso8601();
    return w;
}

void save_weights(const FilterWeights& w, const std::string& path) {
    json obj;
    obj["format"] = "corpusqual-weights";
    obj["version"] = 1;
    json weights = json::object();
    json ppls = json::object();
    for (std::size_t i = 0; i < kFilterCount; ++i) {
        weights[filter_name(i)] = w.weights[i];
        ppls[filter_name(i)] = w.ppl_per_filter[i];
    }
    obj["weights"] = weights;
    obj["ppl_all"] = w.ppl_all;
    obj["ppl_per_filter"] = ppls;
    obj["corpus_profile"] = w.corpus_profile;
    obj["created_at"] = w.created_at;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open weights file for writing: " + path);
    out << obj.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failure on weights file: " + path);
}

FilterWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open weights file: " + path);
    json obj;
    try {
        in >> obj;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": malformed weights JSON: " + e.what());
    }
    if (obj.value("format", "") != "corpusqual-weights")
        throw std::runtime_error(path + ": not a corpusqual weights file");
    FilterWeights w;
    const json& weights = obj.at("weights");
    const json& ppls = obj.at("ppl_per_filter");
    for (std::size_t i = 0; i < kFilterCount; ++i) {
        const char* name = filter_name(i);
        if (!weights.contains(name))
            throw std::runtime_error(path + ": missing weight for filter " +
                                     std::string(name));
        w.weights[i] = weights.at(name).get<double>();
        w.ppl_per_filter[i] = ppls.value(name, 0.0);
    }
    w.ppl_all = obj.at("ppl_all").get<double>();
    w.corpus_profile = obj.value("corpus_profile", "");
    w.created_at = obj.value("created_at", "");
    try {
        w.validate();
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return w;
}

}  // namespace corpusqual
