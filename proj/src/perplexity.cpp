#include "corpusqual/perplexity.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace corpusqual {

double PerplexityReport::ppl() const {
    if (token_count == 0) return 0.0;
    return std::exp(-total_log_prob / static_cast<double>(token_count));
}

PerplexityReport combine(const PerplexityReport& a, const PerplexityReport& b) {
    return {a.token_count + b.token_count, a.total_log_prob + b.total_log_prob};
}

namespace {

std::string pack(const uint32_t* ids, std::size_t n) {
    std::string key(n * sizeof(uint32_t), '\0');
    if (n) std::memcpy(key.data(), ids, n * sizeof(uint32_t));
    return key;
}

std::string pack(const std::vector<uint32_t>& ids) { return pack(ids.data(), ids.size()); }

}  // namespace

NGramModel NGramModel::train(const std::vector<std::vector<std::string>>& token_lines,
                             std::size_t order, std::size_t min_count) {
    if (order < 1) throw std::runtime_error("n-gram order must be >= 1");
    if (token_lines.empty()) throw std::runtime_error("empty training corpus");

    NGramModel m;
    m.order_ = order;
    m.min_count_ = min_count;

    // first pass: raw token frequencies for the <unk> cutoff
    std::unordered_map<std::string, uint64_t> freq;
    for (const auto& line : token_lines)
        for (const auto& tok : line) ++freq[tok];

    std::set<std::string> vocab_set = {kUnknown, kBegin, kEnd};
    for (const auto& [tok, c] : freq)
        if (c >= min_count) vocab_set.insert(tok);
    m.vocab_.assign(vocab_set.begin(), vocab_set.end());
    for (uint32_t i = 0; i < m.vocab_.size(); ++i) m.vocab_index_[m.vocab_[i]] = i;
    m.begin_id_ = m.vocab_index_.at(kBegin);
    m.end_id_ = m.vocab_index_.at(kEnd);
    m.unk_id_ = m.vocab_index_.at(kUnknown);
    m.predict_vocab_size_ = m.vocab_.size() - 1;  // <s> is never predicted

    // second pass: count k-grams for every order, windows ending at each
    // scored position (real tokens and the end symbol)
    m.counts_.assign(order, {});
    std::vector<uint32_t> padded;
    for (const auto& line : token_lines) {
        padded.clear();
        padded.insert(padded.end(), order - 1, m.begin_id_);
        for (const auto& tok : line) {
            auto it = m.vocab_index_.find(tok);
            padded.push_back(it == m.vocab_index_.end() || freq[tok] < min_count
                                 ? m.unk_id_
                                 : it->second);
        }
        padded.push_back(m.end_id_);
        for (std::size_t pos = order - 1; pos < padded.size(); ++pos) {
            for (std::size_t k = 1; k <= order; ++k) {
                std::vector<uint32_t> gram(padded.begin() + (pos + 1 - k),
                                           padded.begin() + pos + 1);
                ++m.counts_[k - 1][std::move(gram)];
            }
        }
    }
    m.build_tables();
    return m;
}

void NGramModel::build_tables() {
    const std::size_t n = order_;
    gram_value_.assign(n, {});
    context_stats_.assign(n, {});
    unigram_total_ = 0;
    unigram_distinct_ = 0;

    // top order uses raw counts
    for (const auto& [gram, c] : counts_[n - 1])
        gram_value_[n - 1][pack(gram)] = c;

    // lower orders use continuation counts: distinct left-extensions one
    // order above (each distinct (k+1)-gram key contributes one)
    for (std::size_t k = n - 1; k >= 1; --k) {
        auto& table = gram_value_[k - 1];
        for (const auto& [gram, c] : counts_[k]) {
            (void)c;
            ++table[pack(gram.data() + 1, gram.size() - 1)];
        }
        if (k == 1) break;
    }

    for (std::size_t k = n; k >= 1; --k) {
        for (const auto& [key, value] : gram_value_[k - 1]) {
            if (k == 1) {
                unigram_total_ += value;
                ++unigram_distinct_;
            } else {
                auto& st = context_stats_[k - 1][key.substr(0, key.size() - sizeof(uint32_t))];
                st.total += value;
                ++st.distinct;
            }
        }
        if (k == 1) break;
    }
}

uint32_t NGramModel::lookup(const std::string& word) const {
    auto it = vocab_index_.find(word);
    return it == vocab_index_.end() ? unk_id_ : it->second;
}

double NGramModel::prob_ids(const uint32_t* context, std::size_t len, uint32_t word) const {
    const std::size_t k = len + 1;  // current n-gram order
    if (k == 1) {
        auto it = gram_value_[0].find(pack(&word, 1));
        const double value = it == gram_value_[0].end() ? 0.0 : double(it->second);
        const double total = double(unigram_total_);
        const double uniform = 1.0 / double(predict_vocab_size_);
        if (total == 0.0) return uniform;
        return std::max(value - discount_, 0.0) / total +
               discount_ * double(unigram_distinct_) / total * uniform;
    }
    const auto& stats = context_stats_[k - 1];
    auto cit = stats.find(pack(context, len));
    if (cit == stats.end() || cit->second.total == 0)
        return prob_ids(context + 1, len - 1, word);
    const double total = double(cit->second.total);
    const double distinct = double(cit->second.distinct);
    std::vector<uint32_t> gram(context, context + len);
    gram.push_back(word);
    auto git = gram_value_[k - 1].find(pack(gram));
    const double value = git == gram_value_[k - 1].end() ? 0.0 : double(git->second);
    return std::max(value - discount_, 0.0) / total +
           discount_ * distinct / total * prob_ids(context + 1, len - 1, word);
}

double NGramModel::probability(const std::vector<std::string>& context,
                               const std::string& word) const {
    std::vector<uint32_t> ids;
    const std::size_t max_ctx = order_ - 1;
    const std::size_t start = context.size() > max_ctx ? context.size() - max_ctx : 0;
    for (std::size_t i = start; i < context.size(); ++i) ids.push_back(lookup(context[i]));
    return prob_ids(ids.data(), ids.size(), lookup(word));
}

PerplexityReport NGramModel::score_line(const std::vector<std::string>& tokens) const {
    std::vector<uint32_t> padded;
    padded.insert(padded.end(), order_ - 1, begin_id_);
    for (const auto& tok : tokens) padded.push_back(lookup(tok));
    padded.push_back(end_id_);
    PerplexityReport rep;
    for (std::size_t pos = order_ - 1; pos < padded.size(); ++pos) {
        double p = prob_ids(padded.data() + (pos + 1 - order_), order_ - 1, padded[pos]);
        rep.total_log_prob += std::log(p);
        ++rep.token_count;
    }
    return rep;
}

std::vector<std::string> NGramModel::predictable_vocab() const {
    std::vector<std::string> out;
    out.reserve(vocab_.size() - 1);
    for (const auto& w : vocab_)
        if (w != kBegin) out.push_back(w);
    return out;
}

void NGramModel::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    out << "corpusqual-ngram 1\n";
    out << "order " << order_ << "\n";
    out << "min_count " << min_count_ << "\n";
    out << "discount " << discount_ << "\n";
    out << "vocab " << vocab_.size() << "\n";
    for (const auto& w : vocab_) out << w << "\n";
    for (std::size_t k = 1; k <= order_; ++k) {
        out << "ngrams " << k << " " << counts_[k - 1].size() << "\n";
        for (const auto& [gram, c] : counts_[k - 1]) {
            for (std::size_t i = 0; i < gram.size(); ++i) {
                if (i) out << ' ';
                out << gram[i];
            }
            out << '\t' << c << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failure on model file: " + path);
}

NGramModel NGramModel::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    auto fail = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error(path + ": bad model file: " + what);
    };
    std::string word, tag;
    int version = 0;
    if (!(in >> word >> version) || word != "corpusqual-ngram" || version != 1)
        throw fail("missing header");
    NGramModel m;
    std::size_t vocab_n = 0;
    if (!(in >> tag >> m.order_) || tag != "order") throw fail("order");
    if (!(in >> tag >> m.min_count_) || tag != "min_count") throw fail("min_count");
    if (!(in >> tag >> m.discount_) || tag != "discount") throw fail("discount");
    if (!(in >> tag >> vocab_n) || tag != "vocab") throw fail("vocab");
    m.vocab_.resize(vocab_n);
    for (auto& w : m.vocab_)
        if (!(in >> w)) throw fail("truncated vocab");
    for (uint32_t i = 0; i < m.vocab_.size(); ++i) m.vocab_index_[m.vocab_[i]] = i;
    if (!m.vocab_index_.count(kBegin) || !m.vocab_index_.count(kEnd) ||
        !m.vocab_index_.count(kUnknown))
        throw fail("missing sentinel symbols");
    m.begin_id_ = m.vocab_index_.at(kBegin);
    m.end_id_ = m.vocab_index_.at(kEnd);
    m.unk_id_ = m.vocab_index_.at(kUnknown);
    m.predict_vocab_size_ = m.vocab_.size() - 1;
    m.counts_.assign(m.order_, {});
    for (std::size_t k = 1; k <= m.order_; ++k) {
        std::size_t korder = 0, entries = 0;
        if (!(in >> tag >> korder >> entries) || tag != "ngrams" || korder != k)
            throw fail("ngrams header for order " + std::to_string(k));
        for (std::size_t e = 0; e < entries; ++e) {
            std::vector<uint32_t> gram(k);
            uint64_t c = 0;
            for (auto& id : gram) {
                if (!(in >> id) || id >= m.vocab_.size()) throw fail("gram id out of range");
            }
            if (!(in >> c)) throw fail("truncated counts");
            m.counts_[k - 1][std::move(gram)] = c;
        }
    }
    m.build_tables();
    return m;
}

PerplexityReport NGramBackend::line_report(const Line& line) const {
    std::vector<std::string> tokens;
    for (const Token& t : annotator_.tokenize(line.text)) tokens.push_back(t.text);
    return model_.score_line(tokens);
}

std::string NGramBackend::id() const {
    return "ngram-o" + std::to_string(model_.order()) + "-v" +
           std::to_string(model_.vocab_size());
}

ExternalScoresBackend ExternalScoresBackend::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open external scores file: " + path);
    ExternalScoresBackend backend;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string doc_id, index;
        PerplexityReport rep;
        if (!std::getline(row, doc_id, '\t') || !std::getline(row, index, '\t') ||
            !(row >> rep.token_count >> rep.total_log_prob))
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": expected doc_id<TAB>line_index<TAB>token_count<TAB>total_log_prob");
        std::string key = doc_id + "\t" + index;
        if (!backend.scores_.emplace(std::move(key), rep).second)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": duplicate key " + doc_id + "\t" + index);
    }
    return backend;
}

bool ExternalScoresBackend::has(const Line& line) const {
    return scores_.count(line.doc_id + "\t" + std::to_string(line.index)) > 0;
}

PerplexityReport ExternalScoresBackend::line_report(const Line& line) const {
    auto it = scores_.find(line.doc_id + "\t" + std::to_string(line.index));
    if (it == scores_.end())
        throw std::runtime_error("external scores: missing key " + line.doc_id + ":" +
                                 std::to_string(line.index));
    return it->second;
}

}  // namespace corpusqual
