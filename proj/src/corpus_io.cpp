#include "corpusqual/corpus_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace corpusqual {

using nlohmann::json;

CorpusFormat parse_format(const std::string& s) {
    if (s == "jsonl") return CorpusFormat::Jsonl;
    if (s == "plain") return CorpusFormat::Plain;
    throw std::runtime_error("unknown corpus format: " + s + " (expected jsonl or plain)");
}

struct CorpusReader::Impl {
    std::ifstream in;
    std::string path;
    CorpusFormat format;
    std::size_t lineno = 0;
    std::size_t next_ordinal = 0;
    std::unordered_set<std::string> seen_ids;
    bool pending = false;
    std::string pending_line;
};

CorpusReader::CorpusReader(const std::string& path, CorpusFormat format)
    : impl_(std::make_unique<Impl>()) {
    impl_->in.open(path);
    if (!impl_->in) throw std::runtime_error("cannot open corpus file: " + path);
    impl_->path = path;
    impl_->format = format;
}

CorpusReader::~CorpusReader() = default;
CorpusReader::CorpusReader(CorpusReader&&) noexcept = default;
CorpusReader& CorpusReader::operator=(CorpusReader&&) noexcept = default;

bool CorpusReader::next(RawDocument& doc) {
    Impl& st = *impl_;
    std::string line;
    if (st.format == CorpusFormat::Jsonl) {
        while (std::getline(st.in, line)) {
            ++st.lineno;
            if (line.empty()) continue;
            json row;
            try {
                row = json::parse(line);
            } catch (const json::parse_error& e) {
                throw std::runtime_error(st.path + ":" + std::to_string(st.lineno) +
                                         ": malformed JSON row: " + e.what());
            }
            if (!row.is_object() || !row.contains("id") || !row["id"].is_string() ||
                !row.contains("text") || !row["text"].is_string())
                throw std::runtime_error(st.path + ":" + std::to_string(st.lineno) +
                                         ": row must be an object with string \"id\" and \"text\"");
            doc.id = row["id"].get<std::string>();
            doc.text = row["text"].get<std::string>();
            if (doc.id.empty())
                throw std::runtime_error(st.path + ":" + std::to_string(st.lineno) +
                                         ": empty document id");
            if (!st.seen_ids.insert(doc.id).second)
                throw std::runtime_error(st.path + ": duplicate document id \"" +
                                         doc.id + "\"");
            return true;
        }
        return false;
    }
    // plain: documents separated by one or more blank lines
    std::string text;
    bool have_any = false;
    auto take_line = [&](std::string& out) {
        if (st.pending) {
            out = std::move(st.pending_line);
            st.pending = false;
            return true;
        }
        return static_cast<bool>(std::getline(st.in, out));
    };
    while (take_line(line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (have_any) break;
            continue;  // leading blank lines
        }
        if (have_any) text.push_back('\n');
        text += line;
        have_any = true;
    }
    if (!have_any) return false;
    doc.id = std::to_string(st.next_ordinal++);
    doc.text = std::move(text);
    return true;
}

std::vector<RawDocument> read_corpus(const std::string& path, CorpusFormat format) {
    CorpusReader reader(path, format);
    std::vector<RawDocument> docs;
    RawDocument doc;
    while (reader.next(doc)) docs.push_back(doc);
    return docs;
}

namespace {

const std::array<const char*, 12> kHtmlMarkers = {
    "</p>", "</div>", "</li>", "</td>", "</h1>", "</h2>",
    "</h3>", "</h4>", "</h5>", "</h6>", "<br>", "<br/>",
};

std::size_t marker_at(const std::string& s, std::size_t i) {
    for (const char* m : kHtmlMarkers) {
        std::size_t n = std::char_traits<char>::length(m);
        if (s.compare(i, n, m) == 0) return n;
    }
    return 0;
}

bool ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
}

std::string trimmed(const std::string& s, std::size_t lo, std::size_t hi) {
    while (lo < hi && ascii_space(s[lo])) ++lo;
    while (hi > lo && ascii_space(s[hi - 1])) --hi;
    return s.substr(lo, hi - lo);
}

}  // namespace

std::vector<Line> split_lines(const RawDocument& doc, const Annotator& annotator) {
    std::vector<Line> lines;
    std::size_t seg_start = 0;
    const std::string& text = doc.text;
    auto flush_segment = [&](std::size_t lo, std::size_t hi) {
        // within a newline segment: split after .!? followed by whitespace
        // or end of segment, and at HTML end markers (markers removed)
        std::size_t piece_start = lo;
        auto emit = [&](std::size_t a, std::size_t b) {
            std::string piece = trimmed(text, a, b);
            if (piece.empty()) return;
            Line l;
            l.doc_id = doc.id;
            l.index = lines.size();
            l.token_count = annotator.count_tokens(piece);
            l.text = std::move(piece);
            lines.push_back(std::move(l));
        };
        std::size_t i = lo;
        while (i < hi) {
            if (std::size_t n = marker_at(text, i); n > 0 && i + n <= hi) {
                emit(piece_start, i);
                i += n;
                piece_start = i;
            } else if ((text[i] == '.' || text[i] == '!' || text[i] == '?') &&
                       (i + 1 == hi || ascii_space(text[i + 1]))) {
                emit(piece_start, i + 1);
                ++i;
                piece_start = i;
            } else {
                ++i;
            }
        }
        emit(piece_start, hi);
    };
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            flush_segment(seg_start, i);
            seg_start = i + 1;
        }
    }
    // re-number: indexes must be contiguous from 0 (emit already does this)
    return lines;
}

static std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

void write_scores(const std::vector<ScoreRecord>& records, std::ostream& out,
                  const std::string& path_for_errors) {
    for (const ScoreRecord& r : records) {
        out << "{\"id\":" << json(r.doc_id).dump()
            << ",\"doc_score\":" << format_score(r.doc_score) << ",\"line_scores\":[";
        for (std::size_t i = 0; i < r.line_scores.size(); ++i) {
            if (i) out << ',';
            out << format_score(r.line_scores[i]);
        }
        out << "],\"token_counts\":[";
        for (std::size_t i = 0; i < r.token_counts.size(); ++i) {
            if (i) out << ',';
            out << r.token_counts[i];
        }
        out << "]}\n";
        if (!out)
            throw std::runtime_error("write failure on scores file: " + path_for_errors);
    }
}

void write_scores(const std::vector<ScoreRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open scores file for writing: " + path);
    write_scores(records, out, path);
}

std::vector<ScoreRecord> read_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scores file: " + path);
    std::vector<ScoreRecord> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json row;
        try {
            row = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed scores row: " + e.what());
        }
        ScoreRecord r;
        r.doc_id = row.at("id").get<std::string>();
        r.doc_score = row.at("doc_score").get<double>();
        r.line_scores = row.at("line_scores").get<std::vector<double>>();
        r.token_counts = row.at("token_counts").get<std::vector<std::size_t>>();
        records.push_back(std::move(r));
    }
    return records;
}

struct CorpusWriter::Impl {
    std::ofstream out;
    std::string path;
    CorpusFormat format;
    bool first = true;
};

CorpusWriter::CorpusWriter(const std::string& path, CorpusFormat format)
    : impl_(std::make_unique<Impl>()) {
    impl_->out.open(path);
    if (!impl_->out) throw std::runtime_error("cannot open output corpus: " + path);
    impl_->path = path;
    impl_->format = format;
}

CorpusWriter::~CorpusWriter() = default;

void CorpusWriter::write(const RawDocument& doc) {
    Impl& st = *impl_;
    if (st.format == CorpusFormat::Jsonl) {
        json row = {{"id", doc.id}, {"text", doc.text}};
        st.out << row.dump() << '\n';
    } else {
        if (!st.first) st.out << '\n';
        st.out << doc.text << '\n';
        st.first = false;
    }
    if (!st.out) throw std::runtime_error("write failure on corpus: " + st.path);
}

void CorpusWriter::close() {
    impl_->out.close();
    if (impl_->out.fail()) throw std::runtime_error("close failure on corpus: " + impl_->path);
}

}  // namespace corpusqual
