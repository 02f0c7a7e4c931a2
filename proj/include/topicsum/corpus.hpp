#pragma once

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "topicsum/common.hpp"

namespace topicsum {

// One record of the raw corpus: an article body plus its one-line summary.
struct RawArticle {
    std::string id;
    std::string document;
    std::string summary;
};

// Tokenized form consumed by every downstream module.
struct Example {
    std::string id;
    std::vector<std::vector<std::string>> doc_sentences;
    std::vector<std::string> summary_tokens;
    std::vector<std::string> doc_tokens;  // flattened doc_sentences
};

namespace detail {

inline bool is_ascii_punct(char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

inline bool is_terminal(char c) { return c == '.' || c == '!' || c == '?'; }

inline bool is_word_char(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || u >= 0x80;  // multi-byte sequences count as letters
}

// Characters a sentence-final punctuation run may trail behind.
inline bool is_closer(char c) {
    return c == ')' || c == ']' || c == '}' || c == '"' || c == '\'' || c == '`';
}

// Words that keep a trailing period and never end a sentence.
inline const std::unordered_set<std::string>& abbreviations() {
    static const std::unordered_set<std::string> kAbbrev = {
        "mr.",  "mrs.", "ms.",  "dr.",   "prof.", "st.",   "sr.",  "jr.",
        "vs.",  "etc.", "e.g.", "i.e.",  "u.s.",  "u.k.",  "u.n.", "no.",
        "jan.", "feb.", "mar.", "apr.",  "jun.",  "jul.",  "aug.", "sep.",
        "sept.", "oct.", "nov.", "dec.", "gen.",  "col.",  "sgt.", "rev.",
        "hon.", "approx.", "dept.", "est.", "fig.", "inc.", "ltd.", "co.",
    };
    return kAbbrev;
}

// Abbreviation membership ignores leading punctuation, so "(mr." and
// "--mr." still match the stop list.
inline bool is_abbreviation(const std::string& chunk) {
    std::size_t b = 0;
    while (b < chunk.size() && is_ascii_punct(chunk[b])) ++b;
    return abbreviations().count(b ? chunk.substr(b) : chunk) > 0;
}

// The whitespace-delimited chunk ending at position `end` (exclusive).
inline std::string chunk_ending_at(const std::string& text, std::size_t end) {
    std::size_t begin = end;
    while (begin > 0 && !std::isspace(static_cast<unsigned char>(text[begin - 1]))) --begin;
    return text.substr(begin, end - begin);
}

}  // namespace detail

// Rule-based tokenizer: lowercases, splits sentences after runs of [.!?]
// followed by whitespace and a word character (with an abbreviation
// stop-list), then detaches leading/trailing punctuation from each
// whitespace-delimited chunk. Idempotent on its own space-joined output.
inline std::vector<std::vector<std::string>> tokenize(const std::string& text) {
    std::string lower = text;
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

    // Sentence boundaries.
    std::vector<std::string> sentences;
    std::size_t start = 0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!detail::is_terminal(lower[i])) continue;
        std::size_t run_end = i + 1;
        while (run_end < lower.size() && detail::is_terminal(lower[run_end])) ++run_end;
        if (run_end >= lower.size() ||
            !std::isspace(static_cast<unsigned char>(lower[run_end]))) {
            i = run_end - 1;
            continue;
        }
        std::size_t next = run_end;
        while (next < lower.size() && std::isspace(static_cast<unsigned char>(lower[next])))
            ++next;
        const bool next_starts_word = next < lower.size() && detail::is_word_char(lower[next]);
        // The run must close a word: scan back over whitespace, further
        // terminals, and closing punctuation. Keeps tokenize idempotent when
        // a detached leading "?" lands in front of a word.
        std::size_t back = i;
        while (back > 0) {
            const char c = lower[back - 1];
            if (std::isspace(static_cast<unsigned char>(c)) || detail::is_terminal(c) ||
                detail::is_closer(c)) {
                --back;
            } else {
                break;
            }
        }
        const bool ends_word = back > 0 && detail::is_word_char(lower[back - 1]);
        const bool abbrev = detail::is_abbreviation(detail::chunk_ending_at(lower, run_end));
        if (next_starts_word && ends_word && !abbrev) {
            sentences.push_back(lower.substr(start, run_end - start));
            start = next;
            i = next - 1;
        } else {
            i = run_end - 1;
        }
    }
    if (start < lower.size()) sentences.push_back(lower.substr(start));

    // Token split with punctuation detachment.
    std::vector<std::vector<std::string>> result;
    for (const auto& sentence : sentences) {
        std::vector<std::string> tokens;
        std::istringstream chunks(sentence);
        std::string chunk;
        while (chunks >> chunk) {
            // Leading terminals stay attached: detaching them would fabricate
            // sentence-final dots on re-tokenization.
            std::vector<std::string> leading;
            while (!chunk.empty() && detail::is_ascii_punct(chunk.front()) &&
                   !detail::is_terminal(chunk.front())) {
                leading.emplace_back(1, chunk.front());
                chunk.erase(chunk.begin());
            }
            std::vector<std::string> trailing;
            while (!chunk.empty() && detail::is_ascii_punct(chunk.back()) &&
                   !detail::is_abbreviation(chunk)) {
                trailing.emplace_back(1, chunk.back());
                chunk.pop_back();
            }
            tokens.insert(tokens.end(), leading.begin(), leading.end());
            if (!chunk.empty()) tokens.push_back(chunk);
            tokens.insert(tokens.end(), trailing.rbegin(), trailing.rend());
        }
        if (!tokens.empty()) result.push_back(std::move(tokens));
    }
    return result;
}

inline std::vector<std::string> flatten(const std::vector<std::vector<std::string>>& sentences) {
    std::vector<std::string> out;
    for (const auto& s : sentences) out.insert(out.end(), s.begin(), s.end());
    return out;
}

inline std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out += ' ';
        out += tokens[i];
    }
    return out;
}

inline Example make_example(const RawArticle& article) {
    Example ex;
    ex.id = article.id;
    ex.doc_sentences = tokenize(article.document);
    ex.summary_tokens = flatten(tokenize(article.summary));
    ex.doc_tokens = flatten(ex.doc_sentences);
    return ex;
}

inline std::vector<Example> make_examples(const std::vector<RawArticle>& articles) {
    std::vector<Example> out;
    out.reserve(articles.size());
    for (const auto& a : articles) out.push_back(make_example(a));
    return out;
}

// ---------------------------------------------------------------------------
// Corpus loading
// ---------------------------------------------------------------------------

enum class CorpusFormat { autodetect, jsonl, directory };

// Line-delimited records, one JSON object per line with fields
// id / document / summary. Lines starting with '#' are artifact headers.
inline std::vector<RawArticle> load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open corpus file: " + path);
    std::vector<RawArticle> articles;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("malformed record: ") + e.what(), line_no);
        }
        for (const char* field : {"id", "document", "summary"}) {
            if (!record.contains(field) || !record[field].is_string())
                throw ParseError(std::string("missing or non-string field '") + field + "'",
                                 line_no);
        }
        RawArticle a{record["id"].get<std::string>(), record["document"].get<std::string>(),
                     record["summary"].get<std::string>()};
        if (a.id.empty()) throw ParseError("empty id", line_no);
        if (a.summary.empty()) throw ParseError("empty summary for id '" + a.id + "'", line_no);
        if (!seen.insert(a.id).second)
            throw ValidationError("duplicate article id '" + a.id + "' at line " +
                                  std::to_string(line_no));
        articles.push_back(std::move(a));
    }
    return articles;
}

// Directory of per-article files named <id>.summary: first line is the
// summary, the remainder is the document body.
inline std::vector<RawArticle> load_directory(const std::string& path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path)) throw ValidationError("not a directory: " + path);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".summary")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RawArticle> articles;
    std::unordered_set<std::string> seen;
    for (const auto& file : files) {
        std::ifstream in(file);
        if (!in) throw ValidationError("cannot open " + file.string());
        RawArticle a;
        a.id = file.stem().string();
        if (!std::getline(in, a.summary) || a.summary.empty())
            throw ParseError("empty summary in " + file.string(), 1);
        std::string line;
        while (std::getline(in, line)) {
            if (!a.document.empty()) a.document += '\n';
            a.document += line;
        }
        if (!seen.insert(a.id).second) throw ValidationError("duplicate article id '" + a.id + "'");
        articles.push_back(std::move(a));
    }
    return articles;
}

inline std::vector<RawArticle> load_corpus(const std::string& path,
                                           CorpusFormat format = CorpusFormat::autodetect) {
    if (format == CorpusFormat::autodetect)
        format = std::filesystem::is_directory(path) ? CorpusFormat::directory
                                                     : CorpusFormat::jsonl;
    return format == CorpusFormat::directory ? load_directory(path) : load_jsonl(path);
}

inline void save_jsonl(const std::vector<RawArticle>& articles, const std::string& path,
                       const std::string& header = "") {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    if (!header.empty()) out << "# " << header << '\n';
    for (const auto& a : articles) {
        nlohmann::json record{{"id", a.id}, {"document", a.document}, {"summary", a.summary}};
        out << record.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------
// Vocabulary
// ---------------------------------------------------------------------------

// Frequency-ranked token table with four reserved indices ahead of the
// content budget. Ties in frequency break toward the lexicographically
// smaller token. Immutable once built.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kBos = 2;
    static constexpr int kEos = 3;
    static constexpr int kReserved = 4;

    Vocabulary() = default;

    static Vocabulary build(const std::vector<Example>& examples, std::size_t limit) {
        if (limit < 1) throw ValidationError("vocabulary limit must be >= 1");
        if (examples.empty()) throw ValidationError("cannot build vocabulary from empty corpus");
        std::unordered_map<std::string, std::size_t> freq;
        for (const auto& ex : examples) {
            for (const auto& t : ex.doc_tokens) ++freq[t];
            for (const auto& t : ex.summary_tokens) ++freq[t];
        }
        std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
        std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (ranked.size() > limit) ranked.resize(limit);
        Vocabulary v;
        for (const auto& [token, count] : ranked) {
            (void)count;
            v.token_to_index_.emplace(token, static_cast<int>(v.index_to_token_.size()));
            v.index_to_token_.push_back(token);
        }
        return v;
    }

    int encode(const std::string& token) const {
        auto it = token_to_index_.find(token);
        return it == token_to_index_.end() ? kUnk : it->second + kReserved;
    }

    const std::string& decode(int index) const {
        static const std::string kSpecials[kReserved] = {"<pad>", "<unk>", "<bos>", "<eos>"};
        if (index < 0 || index >= size()) throw ValidationError("index out of vocabulary range");
        if (index < kReserved) return kSpecials[index];
        return index_to_token_[static_cast<std::size_t>(index - kReserved)];
    }

    bool contains(const std::string& token) const { return token_to_index_.count(token) > 0; }
    int size() const { return static_cast<int>(index_to_token_.size()) + kReserved; }
    int content_size() const { return static_cast<int>(index_to_token_.size()); }

    std::vector<int> encode_all(const std::vector<std::string>& tokens) const {
        std::vector<int> ids;
        ids.reserve(tokens.size());
        for (const auto& t : tokens) ids.push_back(encode(t));
        return ids;
    }

    void save(const std::string& path, const std::string& header = "") const {
        std::ofstream out(path);
        if (!out) throw ValidationError("cannot write " + path);
        if (!header.empty()) out << "# " << header << '\n';
        for (const auto& t : index_to_token_) out << t << '\n';
    }

    static Vocabulary load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open vocabulary file: " + path);
        Vocabulary v;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            v.token_to_index_.emplace(line, static_cast<int>(v.index_to_token_.size()));
            v.index_to_token_.push_back(line);
        }
        return v;
    }

private:
    std::vector<std::string> index_to_token_;  // content tokens only, rank order
    std::unordered_map<std::string, int> token_to_index_;
};

// ---------------------------------------------------------------------------
// Corpus splitting
// ---------------------------------------------------------------------------

// Deterministic assignment: u = mix64(fnv1a64(id)) mapped to [0,1); train if
// u < train fraction, validation if u < train+validation, else test.
struct SplitSpec {
    double train = 0.90;
    double validation = 0.05;
    double test = 0.05;

    void validate() const {
        if (train < 0 || validation < 0 || test < 0 ||
            std::abs(train + validation + test - 1.0) > 1e-9)
            throw ValidationError("split fractions must be nonnegative and sum to 1");
    }
};

enum class Fold { train = 0, validation = 1, test = 2 };

inline Fold assign_fold(const std::string& id, const SplitSpec& spec) {
    const double u = hash_to_unit(mix64(fnv1a64(id)));
    if (u < spec.train) return Fold::train;
    if (u < spec.train + spec.validation) return Fold::validation;
    return Fold::test;
}

template <typename Record>
struct Split {
    std::vector<Record> train;
    std::vector<Record> validation;
    std::vector<Record> test;
};

template <typename Record>
Split<Record> split_corpus(const std::vector<Record>& records, const SplitSpec& spec) {
    spec.validate();
    Split<Record> out;
    for (const auto& r : records) {
        switch (assign_fold(r.id, spec)) {
            case Fold::train: out.train.push_back(r); break;
            case Fold::validation: out.validation.push_back(r); break;
            case Fold::test: out.test.push_back(r); break;
        }
    }
    return out;
}

inline std::vector<std::string> load_id_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open id list: " + path);
    std::vector<std::string> ids;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (!line.empty() && line[0] != '#') ids.push_back(line);
    }
    return ids;
}

// Official id lists override hashing. Lists must be disjoint and cover the
// corpus exactly.
template <typename Record>
Split<Record> split_corpus_by_lists(const std::vector<Record>& records,
                                    const std::vector<std::string>& train_ids,
                                    const std::vector<std::string>& validation_ids,
                                    const std::vector<std::string>& test_ids) {
    std::unordered_map<std::string, Fold> fold_of;
    auto insert_all = [&](const std::vector<std::string>& ids, Fold fold) {
        for (const auto& id : ids) {
            auto [it, inserted] = fold_of.emplace(id, fold);
            (void)it;
            if (!inserted) throw ValidationError("id '" + id + "' appears in two split lists");
        }
    };
    insert_all(train_ids, Fold::train);
    insert_all(validation_ids, Fold::validation);
    insert_all(test_ids, Fold::test);
    Split<Record> out;
    for (const auto& r : records) {
        auto it = fold_of.find(r.id);
        if (it == fold_of.end())
            throw ValidationError("id '" + r.id + "' missing from the official split lists");
        switch (it->second) {
            case Fold::train: out.train.push_back(r); break;
            case Fold::validation: out.validation.push_back(r); break;
            case Fold::test: out.test.push_back(r); break;
        }
    }
    return out;
}

}  // namespace topicsum
