#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "topicsum/common.hpp"
#include "topicsum/corpus.hpp"

namespace topicsum {

// Per-n metric values, n = 1..max_n, each in [0,1].
struct NgramProfile {
    std::vector<double> values;  // values[n-1] holds the metric at order n

    double at(std::size_t n) const {
        if (n < 1 || n > values.size()) throw ValidationError("n out of profile range");
        return values[n - 1];
    }
    std::size_t max_n() const { return values.size(); }
};

struct CorpusStats {
    double doc_words = 0;
    double doc_sentences = 0;
    double summary_words = 0;
    double summary_sentences = 0;
    std::size_t doc_vocabulary = 0;
    std::size_t summary_vocabulary = 0;
};

namespace detail {

// N-grams are keyed as separator-joined token strings; '\x1e' cannot appear
// in whitespace-split tokens.
inline constexpr char kNgramSep = '\x1e';

template <typename Fn>
void for_each_ngram(const std::vector<std::string>& tokens, std::size_t n, Fn&& fn) {
    if (tokens.size() < n || n == 0) return;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key = tokens[i];
        for (std::size_t j = 1; j < n; ++j) {
            key += kNgramSep;
            key += tokens[i + j];
        }
        fn(key);
    }
}

}  // namespace detail

// Fraction of summary n-grams (with multiplicity) absent from the paired
// document, per n. Micro-averaging pools counts over the corpus; the macro
// flag averages per-example fractions instead.
inline NgramProfile novel_ngram_proportion(const std::vector<Example>& examples,
                                           std::size_t n_max, bool macro = false) {
    if (n_max < 1) throw ValidationError("n_max must be >= 1");
    NgramProfile profile;
    profile.values.resize(n_max, 0.0);
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::size_t novel = 0, total = 0;
        double macro_sum = 0;
        std::size_t macro_count = 0;
        for (const auto& ex : examples) {
            std::unordered_set<std::string> doc_ngrams;
            detail::for_each_ngram(ex.doc_tokens, n,
                                   [&](const std::string& g) { doc_ngrams.insert(g); });
            std::size_t ex_novel = 0, ex_total = 0;
            detail::for_each_ngram(ex.summary_tokens, n, [&](const std::string& g) {
                ++ex_total;
                if (!doc_ngrams.count(g)) ++ex_novel;
            });
            novel += ex_novel;
            total += ex_total;
            if (ex_total > 0) {
                macro_sum += static_cast<double>(ex_novel) / static_cast<double>(ex_total);
                ++macro_count;
            }
        }
        if (macro)
            profile.values[n - 1] = macro_count ? macro_sum / static_cast<double>(macro_count) : 0;
        else
            profile.values[n - 1] = total ? static_cast<double>(novel) / static_cast<double>(total) : 0;
    }
    return profile;
}

// Fraction of distinct test-summary n-grams that occur anywhere in the
// training summaries, per n.
inline NgramProfile seen_ngram_percentage(const std::vector<std::vector<std::string>>& train_summaries,
                                          const std::vector<std::vector<std::string>>& test_summaries,
                                          std::size_t n_max) {
    if (train_summaries.empty() || test_summaries.empty())
        throw ValidationError("seen_ngram_percentage requires nonempty corpora");
    NgramProfile profile;
    profile.values.resize(n_max, 0.0);
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::unordered_set<std::string> train_ngrams;
        for (const auto& summary : train_summaries)
            detail::for_each_ngram(summary, n,
                                   [&](const std::string& g) { train_ngrams.insert(g); });
        std::unordered_set<std::string> test_ngrams;
        for (const auto& summary : test_summaries)
            detail::for_each_ngram(summary, n,
                                   [&](const std::string& g) { test_ngrams.insert(g); });
        std::size_t seen = 0;
        for (const auto& g : test_ngrams)
            if (train_ngrams.count(g)) ++seen;
        profile.values[n - 1] =
            test_ngrams.empty() ? 0 : static_cast<double>(seen) / static_cast<double>(test_ngrams.size());
    }
    return profile;
}

// Distinct n-grams over total n-gram occurrences, pooled over the corpus.
inline NgramProfile type_token_ratio(const std::vector<std::vector<std::string>>& summaries,
                                     std::size_t n_max) {
    if (summaries.empty()) throw ValidationError("type_token_ratio requires a nonempty corpus");
    NgramProfile profile;
    profile.values.resize(n_max, 0.0);
    for (std::size_t n = 1; n <= n_max; ++n) {
        std::unordered_set<std::string> types;
        std::size_t total = 0;
        for (const auto& summary : summaries)
            detail::for_each_ngram(summary, n, [&](const std::string& g) {
                types.insert(g);
                ++total;
            });
        profile.values[n - 1] =
            total ? static_cast<double>(types.size()) / static_cast<double>(total) : 0;
    }
    return profile;
}

inline CorpusStats corpus_statistics(const std::vector<Example>& examples) {
    if (examples.empty()) throw ValidationError("corpus_statistics requires a nonempty corpus");
    CorpusStats stats;
    std::unordered_set<std::string> doc_vocab, summary_vocab;
    for (const auto& ex : examples) {
        stats.doc_words += static_cast<double>(ex.doc_tokens.size());
        stats.doc_sentences += static_cast<double>(ex.doc_sentences.size());
        stats.summary_words += static_cast<double>(ex.summary_tokens.size());
        // Sentence structure is recovered by re-tokenizing the space-joined
        // tokens; exact because tokenize is idempotent on that form.
        const auto summary_sentences = tokenize(join_tokens(ex.summary_tokens));
        stats.summary_sentences += static_cast<double>(std::max<std::size_t>(summary_sentences.size(), 1));
        for (const auto& t : ex.doc_tokens) doc_vocab.insert(t);
        for (const auto& t : ex.summary_tokens) summary_vocab.insert(t);
    }
    const double count = static_cast<double>(examples.size());
    stats.doc_words /= count;
    stats.doc_sentences /= count;
    stats.summary_words /= count;
    stats.summary_sentences /= count;
    stats.doc_vocabulary = doc_vocab.size();
    stats.summary_vocabulary = summary_vocab.size();
    return stats;
}

inline std::vector<std::vector<std::string>> summaries_of(const std::vector<Example>& examples) {
    std::vector<std::vector<std::string>> out;
    out.reserve(examples.size());
    for (const auto& ex : examples) out.push_back(ex.summary_tokens);
    return out;
}

}  // namespace topicsum
