#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "corpusqual/calibration.hpp"
#include "corpusqual/config.hpp"
#include "corpusqual/corpus_io.hpp"
#include "corpusqual/perplexity.hpp"
#include "corpusqual/pruning.hpp"
#include "corpusqual/scoring.hpp"

namespace cq = corpusqual;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

struct CommonArgs {
    std::string config_path;
    std::string lexicon_path;
    std::string suffix_rules_path;
    std::string format;
    unsigned threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key=value config file");
    cmd->add_option("--lexicon", args.lexicon_path, "lexicon TSV (word<TAB>TAG)");
    cmd->add_option("--suffix-rules", args.suffix_rules_path, "suffix rule TSV");
    cmd->add_option("--format", args.format, "corpus format: jsonl or plain");
    cmd->add_option("--threads", args.threads, "worker threads (0 = available cores)");
}

/// Config file first, then any flags the user actually passed.
cq::PipelineConfig resolve_config(const CLI::App* cmd, const CommonArgs& args) {
    cq::PipelineConfig cfg;
    if (!args.config_path.empty()) cfg = cq::PipelineConfig::load(args.config_path);
    if (cmd->count("--lexicon")) cfg.lexicon_path = args.lexicon_path;
    if (cmd->count("--suffix-rules")) cfg.suffix_rules_path = args.suffix_rules_path;
    if (cmd->count("--format")) cfg.format = args.format;
    if (cmd->count("--threads")) cfg.threads = args.threads;
    if (cfg.lexicon_path.empty())
        cfg.lexicon_path = cq::default_data_dir() + "/lexicon.tsv";
    if (cfg.suffix_rules_path.empty())
        cfg.suffix_rules_path = cq::default_data_dir() + "/suffix_rules.tsv";
    if (cfg.threads == 0) {
        unsigned hw = std::thread::hardware_concurrency();
        cfg.threads = hw == 0 ? 1 : hw;
    }
    return cfg;
}

std::vector<cq::Line> collect_lines(const std::string& input, cq::CorpusFormat format,
                                    const cq::Annotator& annotator) {
    std::vector<cq::Line> lines;
    cq::CorpusReader reader(input, format);
    cq::RawDocument doc;
    while (reader.next(doc))
        for (cq::Line& l : cq::split_lines(doc, annotator)) lines.push_back(std::move(l));
    return lines;
}

std::vector<std::vector<std::string>> tokenize_lines(const std::vector<cq::Line>& lines,
                                                     const cq::Annotator& annotator) {
    std::vector<std::vector<std::string>> out;
    out.reserve(lines.size());
    for (const cq::Line& l : lines) {
        std::vector<std::string> toks;
        for (const cq::Token& t : annotator.tokenize(l.text)) toks.push_back(t.text);
        out.push_back(std::move(toks));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"corpus quality scoring and pruning toolkit"};
    app.require_subcommand(1);

    // train-lm
    auto* train_cmd = app.add_subcommand("train-lm", "train the n-gram language model");
    CommonArgs train_common;
    std::string train_input, train_output;
    std::size_t train_order = 3, train_min_count = 2;
    train_cmd->add_option("--input", train_input, "training corpus")->required();
    train_cmd->add_option("--output", train_output, "model artifact path")->required();
    train_cmd->add_option("--order", train_order, "n-gram order");
    train_cmd->add_option("--min-count", train_min_count, "<unk> count cutoff");
    add_common(train_cmd, train_common);

    // calibrate
    auto* cal_cmd = app.add_subcommand("calibrate", "compute the 14 filter weights");
    CommonArgs cal_common;
    std::string cal_input, cal_output, cal_model, cal_external, cal_corpus_id;
    std::size_t cal_order = 3, cal_min_count = 2;
    cal_cmd->add_option("--input", cal_input, "calibration corpus")->required();
    cal_cmd->add_option("--output", cal_output, "weights JSON path")->required();
    cal_cmd->add_option("--model", cal_model, "trained n-gram model (default: train on input)");
    cal_cmd->add_option("--external-scores", cal_external,
                        "per-line log-prob TSV from an external language model");
    cal_cmd->add_option("--corpus-id", cal_corpus_id, "corpus id for the profile string");
    cal_cmd->add_option("--order", cal_order, "n-gram order when self-training");
    cal_cmd->add_option("--min-count", cal_min_count, "<unk> cutoff when self-training");
    add_common(cal_cmd, cal_common);

    // score
    auto* score_cmd = app.add_subcommand("score", "score a corpus against saved weights");
    CommonArgs score_common;
    std::string score_input, score_weights, score_output;
    score_cmd->add_option("--input", score_input, "corpus to score")->required();
    score_cmd->add_option("--weights", score_weights, "weights JSON")->required();
    score_cmd->add_option("--output", score_output, "scores JSONL (default: stdout)");
    add_common(score_cmd, score_common);

    // prune
    auto* prune_cmd = app.add_subcommand("prune", "keep the top-scoring fraction");
    CommonArgs prune_common;
    std::string prune_input, prune_scores, prune_output, prune_manifest;
    double keep_top_percent = 100.0;
    prune_cmd->add_option("--input", prune_input, "corpus to prune")->required();
    prune_cmd->add_option("--scores", prune_scores, "scores JSONL")->required();
    prune_cmd->add_option("--keep-top-percent", keep_top_percent, "fraction to keep, (0,100]")
        ->required();
    prune_cmd->add_option("--output", prune_output, "pruned corpus path")->required();
    prune_cmd->add_option("--manifest", prune_manifest, "manifest JSON path")->required();
    add_common(prune_cmd, prune_common);

    // split
    auto* split_cmd = app.add_subcommand("split", "deterministic train/validation split");
    CommonArgs split_common;
    std::string split_input, split_train, split_validation;
    double validation_fraction = 0.2;
    uint64_t split_seed = 0;
    split_cmd->add_option("--input", split_input, "corpus to split")->required();
    split_cmd->add_option("--validation-fraction", validation_fraction, "default 0.2");
    split_cmd->add_option("--seed", split_seed, "split seed");
    split_cmd->add_option("--train-output", split_train, "train corpus path")->required();
    split_cmd->add_option("--validation-output", split_validation, "validation corpus path")
        ->required();
    add_common(split_cmd, split_common);

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "score histogram and quantiles");
    std::string stats_scores, stats_output;
    stats_cmd->add_option("--scores", stats_scores, "scores JSONL")->required();
    stats_cmd->add_option("--output", stats_output, "stats JSON (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd) {
            cq::PipelineConfig cfg = resolve_config(train_cmd, train_common);
            if (train_cmd->count("--order")) cfg.ngram_order = train_order;
            if (train_cmd->count("--min-count")) cfg.min_count = train_min_count;
            cq::Annotator annotator =
                cq::Annotator::from_files(cfg.lexicon_path, cfg.suffix_rules_path);
            auto lines =
                collect_lines(train_input, cq::parse_format(cfg.format), annotator);
            cq::NGramModel model = cq::NGramModel::train(
                tokenize_lines(lines, annotator), cfg.ngram_order, cfg.min_count);
            model.save(train_output);
            std::cerr << "trained order-" << model.order() << " model on " << lines.size()
                      << " lines, vocab " << model.vocab_size() << "\n";
        } else if (*cal_cmd) {
            cq::PipelineConfig cfg = resolve_config(cal_cmd, cal_common);
            if (cal_cmd->count("--order")) cfg.ngram_order = cal_order;
            if (cal_cmd->count("--min-count")) cfg.min_count = cal_min_count;
            cq::Annotator annotator =
                cq::Annotator::from_files(cfg.lexicon_path, cfg.suffix_rules_path);
            auto lines = collect_lines(cal_input, cq::parse_format(cfg.format), annotator);
            std::vector<cq::IndicatorVector> indicators;
            indicators.reserve(lines.size());
            for (const cq::Line& l : lines)
                indicators.push_back(
                    cq::evaluate(l, annotator.annotate(l.text), cfg.filters));

            std::unique_ptr<cq::PerplexityBackend> backend;
            cq::NGramModel model;
            cq::ExternalScoresBackend external;
            if (!cal_external.empty()) {
                external = cq::ExternalScoresBackend::load(cal_external);
                backend = std::make_unique<cq::ExternalScoresBackend>(external);
            } else {
                model = cal_model.empty()
                            ? cq::NGramModel::train(tokenize_lines(lines, annotator),
                                                    cfg.ngram_order, cfg.min_count)
                            : cq::NGramModel::load(cal_model);
                backend = std::make_unique<cq::NGramBackend>(model, annotator);
            }

            cq::CalibrationOptions options;
            options.corpus_id = cal_corpus_id.empty() ? cal_input : cal_corpus_id;
            options.filter_config = cfg.filters;
            std::vector<std::string> warnings;
            options.warnings = &warnings;
            cq::FilterWeights weights = cq::calibrate(lines, indicators, *backend, options);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            cq::save_weights(weights, cal_output);

            std::cerr << "PPL_all = " << weights.ppl_all << "\n";
            std::cerr << "filter                      PPL_i        w_i\n";
            for (std::size_t i = 0; i < cq::kFilterCount; ++i) {
                char row[96];
                std::snprintf(row, sizeof(row), "%-24s %10.4f %10.6f\n",
                              cq::filter_name(i), weights.ppl_per_filter[i],
                              weights.weights[i]);
                std::cerr << row;
            }
        } else if (*score_cmd) {
            cq::PipelineConfig cfg = resolve_config(score_cmd, score_common);
            cq::Annotator annotator =
                cq::Annotator::from_files(cfg.lexicon_path, cfg.suffix_rules_path);
            cq::FilterWeights weights = cq::load_weights(score_weights);
            cq::CorpusReader reader(score_input, cq::parse_format(cfg.format));
            cq::ScoringStats stats;
            if (score_output.empty()) {
                stats = cq::score_corpus_stream(reader, weights, annotator, cfg.threads,
                                                cfg.filters, std::cout, "<stdout>");
            } else {
                std::ofstream out(score_output);
                if (!out)
                    throw std::runtime_error("cannot open scores file for writing: " +
                                             score_output);
                stats = cq::score_corpus_stream(reader, weights, annotator, cfg.threads,
                                                cfg.filters, out, score_output);
            }
            double secs = std::max(stats.seconds, 1e-9);
            std::cerr << "scored " << stats.documents << " docs / " << stats.lines
                      << " lines in " << stats.seconds << " s (" << stats.documents / secs
                      << " docs/s, " << stats.lines / secs << " lines/s, threads="
                      << cfg.threads << ")\n";
        } else if (*prune_cmd) {
            cq::PipelineConfig cfg = resolve_config(prune_cmd, prune_common);
            auto format = cq::parse_format(cfg.format);
            auto corpus = cq::read_corpus(prune_input, format);
            auto scores = cq::read_scores(prune_scores);
            cq::PruneSpec spec;
            spec.keep_top_percent = keep_top_percent;
            cq::prune(scores, corpus, spec, format, prune_output, prune_manifest);
            std::cerr << "pruned " << prune_input << " to top " << keep_top_percent
                      << "% -> " << prune_output << "\n";
        } else if (*split_cmd) {
            cq::PipelineConfig cfg = resolve_config(split_cmd, split_common);
            auto format = cq::parse_format(cfg.format);
            auto corpus = cq::read_corpus(split_input, format);
            uint64_t seed = split_cmd->count("--seed") ? split_seed : cfg.seed;
            cq::split(corpus, validation_fraction, seed, format, split_train,
                      split_validation);
            std::cerr << "split " << corpus.size() << " docs, validation fraction "
                      << validation_fraction << ", seed " << seed << "\n";
        } else if (*stats_cmd) {
            auto scores = cq::read_scores(stats_scores);
            std::vector<double> values;
            values.reserve(scores.size());
            for (const auto& r : scores) values.push_back(r.doc_score);
            std::sort(values.begin(), values.end());
            std::array<std::size_t, 20> hist{};
            for (double v : values) {
                auto bin = static_cast<std::size_t>(v * 20.0);
                hist[std::min<std::size_t>(bin, 19)]++;
            }
            auto quantile = [&](double q) {
                if (values.empty()) return 0.0;
                auto idx = static_cast<std::size_t>(q * (values.size() - 1));
                return values[idx];
            };
            nlohmann::json obj = {
                {"count", values.size()},
                {"histogram_bins", 20},
                {"histogram", hist},
                {"quantiles",
                 {{"min", values.empty() ? 0.0 : values.front()},
                  {"p25", quantile(0.25)},
                  {"p50", quantile(0.50)},
                  {"p75", quantile(0.75)},
                  {"p90", quantile(0.90)},
                  {"p95", quantile(0.95)},
                  {"p99", quantile(0.99)},
                  {"max", values.empty() ? 0.0 : values.back()}}},
            };
            if (stats_output.empty()) {
                std::cout << obj.dump(2) << "\n";
            } else {
                std::ofstream out(stats_output);
                if (!out)
                    throw std::runtime_error("cannot open stats file: " + stats_output);
                out << obj.dump(2) << "\n";
            }
        }
    } catch (const cq::DegenerateCalibration& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
