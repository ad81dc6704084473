#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "corpusqual/annotator.hpp"

namespace corpusqual {

struct RawDocument {
    std::string id;
    std::string text;
};

struct Line {
    std::string doc_id;
    std::size_t index = 0;
    std::string text;
    std::size_t token_count = 0;
};

/// Per-document scoring output row.
struct ScoreRecord {
    std::string doc_id;
    double doc_score = 0.0;
    std::vector<double> line_scores;
    std::vector<std::size_t> token_counts;
    bool empty_flagged = false;  // zero lines or zero total tokens
};

enum class CorpusFormat { Jsonl, Plain };

CorpusFormat parse_format(const std::string& s);

/// Streaming corpus reader. Documents are yielded in file order;
/// memory stays bounded by one document.
class CorpusReader {
public:
    CorpusReader(const std::string& path, CorpusFormat format);
    ~CorpusReader();
    CorpusReader(CorpusReader&&) noexcept;
    CorpusReader& operator=(CorpusReader&&) noexcept;

    /// Fills `doc` with the next document; false at end of stream.
    bool next(RawDocument& doc);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

std::vector<RawDocument> read_corpus(const std::string& path, CorpusFormat format);

/// Splits a document into scoreable lines: newlines first, then sentence
/// terminators followed by whitespace, then the fixed HTML end markers.
std::vector<Line> split_lines(const RawDocument& doc, const Annotator& annotator);

void write_scores(const std::vector<ScoreRecord>& records, const std::string& path);
void write_scores(const std::vector<ScoreRecord>& records, std::ostream& out,
                  const std::string& path_for_errors);
std::vector<ScoreRecord> read_scores(const std::string& path);

/// Writer that preserves the input format; used by prune/split copy-through.
class CorpusWriter {
public:
    CorpusWriter(const std::string& path, CorpusFormat format);
    ~CorpusWriter();
    void write(const RawDocument& doc);
    void close();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace corpusqual
