// Acceptance suite: one criterion per command-line argument (1..9), or all
// when invoked with no argument. Prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "corpusqual/calibration.hpp"
#include "corpusqual/config.hpp"
#include "corpusqual/corpus_io.hpp"
#include "corpusqual/filters.hpp"
#include "corpusqual/perplexity.hpp"
#include "corpusqual/pruning.hpp"
#include "corpusqual/scoring.hpp"
#include "synth_corpus.hpp"
#include "test_util.hpp"

using namespace corpusqual;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << what
              << "\n";
    if (!ok) ++failures;
}

void expect(int criterion, bool ok, const std::string& what, bool& all_ok) {
    if (!ok) {
        std::cout << "  check failed: " << what << "\n";
        all_ok = false;
    }
}

std::vector<std::vector<std::string>> tokenize_all(const std::vector<Line>& lines,
                                                   const Annotator& a) {
    std::vector<std::vector<std::string>> out;
    out.reserve(lines.size());
    for (const Line& l : lines) {
        std::vector<std::string> toks;
        for (const Token& t : a.tokenize(l.text)) toks.push_back(t.text);
        out.push_back(std::move(toks));
    }
    return out;
}

std::vector<Line> split_corpus(const std::vector<RawDocument>& docs, const Annotator& a) {
    std::vector<Line> lines;
    for (const RawDocument& d : docs)
        for (Line& l : split_lines(d, a)) lines.push_back(std::move(l));
    return lines;
}

FilterWeights calibrate_on(const std::vector<RawDocument>& docs, const Annotator& a,
                           std::size_t order = 3, std::size_t min_count = 2) {
    std::vector<Line> lines = split_corpus(docs, a);
    std::vector<IndicatorVector> indicators;
    indicators.reserve(lines.size());
    for (const Line& l : lines) indicators.push_back(evaluate(l, a.annotate(l.text)));
    NGramModel model = NGramModel::train(tokenize_all(lines, a), order, min_count);
    NGramBackend backend(model, a);
    CalibrationOptions options;
    options.corpus_id = "acceptance";
    return calibrate(lines, indicators, backend, options);
}

// ---------------------------------------------------------------------------
// 1. ordering of the five reference sample texts after web-text calibration

const std::vector<std::string> kSampleTexts = {
    "[Accessories](/directory/Shopping/Accessories/49511)",
    "Champions of Bundaberg Touch competition](<url> touch-competition/)",
    "[Microsoft 365: Get OneDrive for Business Usage Report using PowerShell](<url> "
    "\"Microsoft 365: Get OneDrive for Business Usage Report using PowerShell\")",
    "We have no tolerance for comments containing violence, racism, profanity, "
    "vulgarity, doxing, or discourteous behavior. If a comment is spam, instead of "
    "replying to it please click the icon below and to the right of that comment. "
    "Thank you for partnering with us to maintain fruitful conversation.",
    "You’re one among a lucky few. You found your love in a guy of another "
    "culture! I know a distant relative of mine who married a black woman from a "
    "developed nation. They loved each other, married and settled in her country. At "
    "one point, he was asked to leave her by his family and marry an Indian instead, "
    "but he said he would never be able to leave her for another. How amazing! Now "
    "they’re old, retired and live in India, but still love each other "
    "nevertheless.",
};

void criterion_1() {
    bool ok = true;
    auto t0 = std::chrono::steady_clock::now();
    const Annotator& a = testutil::annotator();
    synth::WebTextGen gen(2024);
    // ~12k docs averaging 5 lines each: comfortably over 50k lines
    auto corpus = gen.corpus(12000, 0.35);
    std::vector<Line> lines = split_corpus(corpus, a);
    expect(1, lines.size() >= 50000,
           "calibration sample has >= 50k lines (got " + std::to_string(lines.size()) + ")",
           ok);
    FilterWeights weights = calibrate_on(corpus, a);

    std::vector<double> scores;
    for (std::size_t i = 0; i < kSampleTexts.size(); ++i) {
        ScoreRecord rec = score_one_document({"sample" + std::to_string(i), kSampleTexts[i]},
                                             weights, a);
        scores.push_back(rec.doc_score);
    }
    std::cout << "  sample scores:";
    for (double s : scores) std::cout << " " << s;
    std::cout << "\n";
    for (std::size_t i = 1; i < scores.size(); ++i)
        expect(1, scores[i - 1] < scores[i],
               "score " + std::to_string(i - 1) + " < score " + std::to_string(i), ok);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    expect(1, secs < 600.0, "runtime under 10 minutes", ok);
    report(1, ok, "reference sample texts are ordered by quality score");
}

// ---------------------------------------------------------------------------
// 2. weight clamp when subset perplexity exceeds the corpus perplexity

class FixedBackend final : public PerplexityBackend {
public:
    explicit FixedBackend(std::function<double(const Line&)> avg) : avg_(std::move(avg)) {}
    PerplexityReport line_report(const Line& line) const override {
        return {line.token_count,
                avg_(line) * static_cast<double>(line.token_count)};
    }
    std::string id() const override { return "fixed"; }

private:
    std::function<double(const Line&)> avg_;
};

void criterion_2() {
    bool ok = true;
    // filter 0 selects the worse-scoring half: PPL_0 > PPL_all, weight clamps
    std::vector<Line> lines = {{"d", 0, "x", 10}, {"d", 1, "y", 10}};
    FixedBackend backend(
        [](const Line& l) { return l.index == 0 ? -std::log(150.0) : -std::log(50.0); });
    std::vector<IndicatorVector> ind(2);
    ind[0][0] = true;               // filter 0 -> high-perplexity line only
    ind[1][1] = true;               // filter 1 keeps the weight sum positive
    FilterWeights w = calibrate(lines, ind, backend);
    expect(2, w.ppl_per_filter[0] > w.ppl_all, "subset perplexity exceeds PPL_all", ok);
    expect(2, w.weights[0] == 0.0, "weight clamps to exactly 0", ok);
    report(2, ok, "weights clamp to zero when filtering raises perplexity");
}

// ---------------------------------------------------------------------------
// 3. line/document scores vs an independent weighted-average oracle

void criterion_3() {
    bool ok = true;
    std::mt19937_64 rng(3001);
    for (int iter = 0; iter < 1000 && ok; ++iter) {
        FilterWeights w;
        double sum = 0.0;
        for (auto& x : w.weights) {
            x = (rng() % 10000) / 10000.0;
            sum += x;
        }
        if (sum == 0.0) w.weights[0] = 1.0;
        IndicatorVector bits;
        for (std::size_t i = 0; i < kFilterCount; ++i) bits[i] = rng() & 1;

        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < kFilterCount; ++i) {
            den += w.weights[i];
            if (bits[i]) num += w.weights[i];
        }
        expect(3, std::abs(score_line(bits, w) - num / den) <= 1e-12,
               "line score matches oracle", ok);

        std::vector<std::pair<std::size_t, double>> doc;
        double dnum = 0.0, dden = 0.0;
        std::size_t n = 1 + rng() % 20;
        for (std::size_t l = 0; l < n; ++l) {
            std::size_t tc = 1 + rng() % 60;
            double s = (rng() % 10000) / 9999.0;
            doc.emplace_back(tc, s);
            dnum += double(tc) * s;
            dden += double(tc);
        }
        expect(3, std::abs(score_document(doc) - dnum / dden) <= 1e-12,
               "document score matches oracle", ok);
    }
    report(3, ok, "scores match the brute-force weighted-average oracle within 1e-12");
}

// ---------------------------------------------------------------------------
// 4. throughput: 10k lines single-core under 60 s; 4-thread speedup >= 2.8x

void criterion_4() {
    bool ok = true;
    const Annotator& a = testutil::annotator();
    synth::WebTextGen gen(4004);
    auto corpus = gen.corpus(2500, 0.3, 4, 4);  // 2500 docs x 4 lines = 10k lines
    FilterWeights w;
    w.weights.fill(0.5);

    ScoringStats s1;
    auto r1 = score_corpus(corpus, w, a, 1, {}, &s1);
    std::size_t total_lines = 0;
    for (const auto& r : r1) total_lines += r.line_scores.size();
    std::cout << "  " << total_lines << " lines in " << s1.seconds
              << " s on one thread\n";
    expect(4, total_lines >= 10000, "fixture has >= 10k lines", ok);
    expect(4, s1.seconds <= 60.0, "single-core scoring of 10k lines under 60 s", ok);

    // throughput ratio needs a workload long enough to time reliably
    auto big = gen.corpus(20000, 0.3, 4, 4);
    ScoringStats b1, b4;
    score_corpus(big, w, a, 1, {}, &b1);
    score_corpus(big, w, a, 4, {}, &b4);
    double ratio = b1.seconds / std::max(b4.seconds, 1e-9);
    std::cout << "  4-thread speedup: " << ratio << "x (1 thread " << b1.seconds
              << " s, 4 threads " << b4.seconds << " s)\n";
    expect(4, ratio >= 2.8, "4-thread throughput >= 2.8x single-thread", ok);
    report(4, ok, "throughput meets the single-core bound and 4-thread speedup");
}

// ---------------------------------------------------------------------------
// 5. byte-identical scoring output across thread counts on a 10k-doc fixture

void criterion_5() {
    bool ok = true;
    testutil::TempDir tmp;
    const Annotator& a = testutil::annotator();
    synth::WebTextGen gen(5005);
    auto corpus = gen.corpus(10000, 0.35);
    FilterWeights w;
    w.weights.fill(0.25);
    auto seq = score_corpus(corpus, w, a, 1);
    auto par = score_corpus(corpus, w, a, 4);
    write_scores(seq, tmp.file("t1.jsonl"));
    write_scores(par, tmp.file("t4.jsonl"));
    expect(5, testutil::read_file(tmp.file("t1.jsonl")) ==
                  testutil::read_file(tmp.file("t4.jsonl")),
           "scores files are byte-identical", ok);
    report(5, ok, "4-thread output is byte-identical to 1-thread on 10k docs");
}

// ---------------------------------------------------------------------------
// 6. pruning contract over 100 random corpora

void criterion_6() {
    bool ok = true;
    std::mt19937_64 rng(6006);
    const std::vector<double> percents = {20, 40, 60, 80, 100};
    for (int iter = 0; iter < 100 && ok; ++iter) {
        std::size_t n = 1 + rng() % 5000;
        double p = percents[rng() % percents.size()];
        std::vector<ScoreRecord> scores(n);
        for (std::size_t i = 0; i < n; ++i) {
            scores[i].doc_id = "d" + std::to_string(i);
            scores[i].doc_score = (rng() % 1000) / 999.0;
        }
        auto k = static_cast<std::size_t>(std::floor(n * p / 100.0));
        if (k == 0) {
            bool threw = false;
            try {
                prune_select(scores, {p});
            } catch (const std::runtime_error&) {
                threw = true;
            }
            expect(6, threw, "k = 0 raises the empty-corpus error", ok);
            continue;
        }
        PruneResult r = prune_select(scores, {p});
        expect(6, r.retained.size() == k, "retained count is floor(N*p/100)", ok);
        double min_kept = 2.0, max_dropped = -1.0;
        for (auto i : r.retained) min_kept = std::min(min_kept, scores[i].doc_score);
        for (auto i : r.dropped) max_dropped = std::max(max_dropped, scores[i].doc_score);
        if (!r.dropped.empty())
            expect(6, min_kept >= max_dropped, "min retained >= max dropped", ok);
        if (p == 100.0) {
            std::vector<std::size_t> identity(n);
            for (std::size_t i = 0; i < n; ++i) identity[i] = i;
            expect(6, r.retained == identity, "keep=100 reproduces the input exactly", ok);
        }
    }
    report(6, ok, "pruning contract holds on 100 random corpora");
}

// ---------------------------------------------------------------------------
// 7. golden filter fixture: hand-evaluated indicator vectors for 50 lines

struct GoldenLine {
    const char* text;
    const char* bits;  // filter 0 first
};

const std::vector<GoldenLine> kGolden = {
    {"The cat sat on the mat.", "11111111111111"},
    {"HELLO", "10111001000100"},
    {"", "01111001000000"},
    {"the cat sat on the mat.", "01111111111111"},
    {"The cat sat on the mat", "11111011111111"},
    {"The cat sat on the mat!", "11111111111111"},
    {"The cat sat on the mat?", "11111111111111"},
    {"He said \"the cat sat on the mat\"", "11111111111111"},
    {"BUY NOW BEST PRICE", "10111001110100"},
    {"function render() { return 42; }", "01100001100100"},
    {"Please enable javascript to continue.", "11111100110100"},
    {"Lorem ipsum dolor sit amet.", "11111100111100"},
    {"ALL CAPS SHOUTING HERE NOW.", "10111101110100"},
    {"a", "01111001000010"},
    {"I", "10111001000000"},
    {"Of the people, by the people, for the people.", "11001111111111"},
    {"1 2 3 4 5 6 7 8 9 10.", "01101101100000"},
    {"Click here to read more about the annual report.", "11111111111111"},
    {"buy cheap buy cheap buy cheap now.", "01011101111100"},
    {"Visit www.example.com for more information today.", "11111101111101"},
    {"It was the best of times, it was the worst of times.", "11011111111111"},
    {"Home | About | Contact | Privacy", "11101001110100"},
    {"We have a plan.", "11111101111111"},
    {"We have that plan and we have the will to act.", "11111111111111"},
    {"404 error", "01101001000100"},
    {"The quick brown fox jumps over the lazy dog near the old barn.",
     "11111111111111"},
    {"STOP", "10111001000000"},
    {"Sale sale sale sale!", "11011101110100"},
    {"In the beginning was the word.", "11111111111111"},
    {"no", "01111001000000"},
    {"Check out our javascript tutorials for the modern web.", "11111100111111"},
    {"It is a truth universally acknowledged, that a single man in possession of a "
     "good fortune, must be in want of a wife.",
     "11011111111111"},
    {"Thank you for partnering with us to maintain fruitful conversation.",
     "11111111111101"},
    {"How amazing!", "11101101100000"},
    {"the end.", "01101101100110"},
    {"She sells seashells by the seashore.", "11111101111111"},
    {"{\"key\": \"value\"}", "01100001100100"},
    {"A good plan today is better than a perfect plan tomorrow.", "11111101110110"},
    {"Read the manual before you install the software.", "11111111111111"},
    {"to be or not to be.", "01011111110000"},
    {" ", "01111001000000"},
    {"Terms of service and privacy policy", "11111011111100"},
    {"Error 404: page not found", "11101001110100"},
    {"And the winner is the team from the north!", "11011111111111"},
    {"Subscribe now for 50% off all shoes, bags, and hats!", "11101101111101"},
    {"He gave her the book and she gave him a smile.", "11111111111110"},
    {"Winter is coming.", "11101101100100"},
    {"They watched the storm from the old lighthouse.", "11111111111111"},
    {"lorem IPSUM", "01111000000100"},
    {"The committee of the whole will meet at noon to discuss the budget and the "
     "schedule.",
     "11111111111110"},
};

void criterion_7() {
    bool ok = true;
    const Annotator& a = testutil::annotator();
    for (const GoldenLine& g : kGolden) {
        IndicatorVector bits = evaluate(g.text, a.annotate(g.text));
        std::string got;
        for (std::size_t i = 0; i < kFilterCount; ++i) got += bits[i] ? '1' : '0';
        if (got != g.bits) {
            std::cout << "  mismatch on \"" << g.text << "\": expected " << g.bits
                      << " got " << got << "\n";
            ok = false;
        }
    }
    // the canonical sentence scores 1.0 for any valid weights
    std::mt19937_64 rng(7007);
    for (int i = 0; i < 25; ++i) {
        FilterWeights w;
        double sum = 0.0;
        for (auto& x : w.weights) {
            x = (rng() % 1000) / 1000.0;
            sum += x;
        }
        if (sum == 0.0) w.weights[3] = 0.7;
        ScoreRecord rec = score_one_document({"d", "The cat sat on the mat."}, w, a);
        expect(7, std::abs(rec.doc_score - 1.0) <= 1e-12,
               "canonical sentence scores 1.0", ok);
    }
    report(7, ok, "50-line golden fixture produces the expected indicator vectors");
}

// ---------------------------------------------------------------------------
// 8. n-gram soundness on a 5-word vocabulary

void criterion_8() {
    bool ok = true;
    std::vector<std::vector<std::string>> corpus = {
        {"a", "b", "c", "a", "b"}, {"b", "c", "d", "e", "a"}, {"e", "d", "c", "b", "a"},
        {"a", "a", "b", "b", "c"}, {"c", "d", "e", "e", "a"}, {"b", "a", "d", "c", "e"}};
    NGramModel m = NGramModel::train(corpus, 3, 1);
    std::vector<std::string> symbols = {"a", "b", "c", "d", "e", NGramModel::kUnknown,
                                        NGramModel::kBegin, NGramModel::kEnd};
    auto vocab = m.predictable_vocab();
    for (const auto& u : symbols) {
        for (const auto& v : symbols) {
            double sum = 0.0;
            for (const auto& w : vocab) sum += m.probability({u, v}, w);
            expect(8, std::abs(sum - 1.0) <= 1e-6,
                   "distribution for context (" + u + ", " + v + ") sums to 1", ok);
        }
    }
    PerplexityReport trained, shuffled;
    std::mt19937_64 rng(8008);
    for (const auto& line : corpus) {
        trained = combine(trained, m.score_line(line));
        auto mixed = line;
        for (std::size_t i = mixed.size(); i > 1; --i)
            std::swap(mixed[i - 1], mixed[rng() % i]);
        shuffled = combine(shuffled, m.score_line(mixed));
    }
    std::cout << "  training ppl " << trained.ppl() << ", shuffled ppl " << shuffled.ppl()
              << "\n";
    expect(8, trained.ppl() < shuffled.ppl(), "training text beats shuffled text", ok);
    report(8, ok, "n-gram distributions normalize and prefer training text");
}

// ---------------------------------------------------------------------------
// 9. weight-scale invariance under multiplication by 7.3

void criterion_9() {
    bool ok = true;
    const Annotator& a = testutil::annotator();
    synth::WebTextGen gen(9009);
    auto corpus = gen.corpus(300, 0.4);
    std::mt19937_64 rng(9010);
    FilterWeights w;
    double sum = 0.0;
    for (auto& x : w.weights) {
        x = (rng() % 1000) / 1000.0;
        sum += x;
    }
    if (sum == 0.0) w.weights[0] = 0.4;
    FilterWeights scaled = w;
    for (auto& x : scaled.weights) x *= 7.3;

    auto base = score_corpus(corpus, w, a, 1);
    auto rescored = score_corpus(corpus, scaled, a, 1);
    for (std::size_t i = 0; i < base.size(); ++i) {
        expect(9, std::abs(base[i].doc_score - rescored[i].doc_score) <= 1e-12,
               "doc score unchanged", ok);
        for (std::size_t l = 0; l < base[i].line_scores.size(); ++l)
            expect(9,
                   std::abs(base[i].line_scores[l] - rescored[i].line_scores[l]) <= 1e-12,
                   "line score unchanged", ok);
        if (!ok) break;
    }
    report(9, ok, "scaling all weights by 7.3 changes no score beyond 1e-12");
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<std::function<void()>> criteria = {
        criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
        criterion_6, criterion_7, criterion_8, criterion_9};
    if (argc > 1) {
        int n = std::atoi(argv[1]);
        if (n < 1 || n > static_cast<int>(criteria.size())) {
            std::cerr << "usage: acceptance [1-" << criteria.size() << "]\n";
            return 2;
        }
        criteria[n - 1]();
    } else {
        for (auto& c : criteria) c();
    }
    return failures == 0 ? 0 : 1;
}
