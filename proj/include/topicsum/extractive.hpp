#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "topicsum/common.hpp"
#include "topicsum/corpus.hpp"
#include "topicsum/rouge.hpp"

namespace topicsum {

enum class ExtractiveStrategy { random, lead, oracle };
enum class OracleObjective { rouge1, rouge2, mean12 };

struct ExtractiveConfig {
    ExtractiveStrategy strategy = ExtractiveStrategy::lead;
    std::size_t sentence_budget = 1;
    OracleObjective objective = OracleObjective::mean12;
    std::uint64_t seed = 1;
    bool stem = false;  // stemming inside the oracle objective

    void validate() const {
        if (sentence_budget < 1) throw ValidationError("sentence_budget must be >= 1");
    }
};

namespace detail {

inline std::vector<std::string> concat_sentences(
    const std::vector<std::vector<std::string>>& sentences, const std::vector<std::size_t>& picks) {
    std::vector<std::string> out;
    for (std::size_t i : picks)
        out.insert(out.end(), sentences[i].begin(), sentences[i].end());
    return out;
}

// Uniform integer in [0, n) via rejection, so runs reproduce across builds.
inline std::size_t uniform_below(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t x;
    do { x = rng(); } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

}  // namespace detail

inline double oracle_objective_score(const std::vector<std::string>& candidate,
                                     const std::vector<std::string>& gold,
                                     OracleObjective objective, bool stem = false) {
    const std::vector<std::vector<std::string>> refs{gold};
    switch (objective) {
        case OracleObjective::rouge1: return rouge_n(candidate, refs, 1, stem).f1;
        case OracleObjective::rouge2: return rouge_n(candidate, refs, 2, stem).f1;
        case OracleObjective::mean12:
            return 0.5 * (rouge_n(candidate, refs, 1, stem).f1 + rouge_n(candidate, refs, 2, stem).f1);
    }
    throw ValidationError("unknown oracle objective");
}

// First `budget` sentences; the whole document when it is shorter.
inline std::vector<std::string> lead_summary(const Example& example, std::size_t budget) {
    if (example.doc_sentences.empty())
        throw ValidationError("lead_summary: empty document for id '" + example.id + "'");
    if (budget < 1) throw ValidationError("sentence budget must be >= 1");
    std::vector<std::size_t> picks;
    for (std::size_t i = 0; i < std::min(budget, example.doc_sentences.size()); ++i)
        picks.push_back(i);
    return detail::concat_sentences(example.doc_sentences, picks);
}

// Uniform sample of `budget` distinct sentences, emitted in document order.
inline std::vector<std::string> random_summary(const Example& example, std::size_t budget,
                                               std::uint64_t seed) {
    if (example.doc_sentences.empty())
        throw ValidationError("random_summary: empty document for id '" + example.id + "'");
    if (budget < 1) throw ValidationError("sentence budget must be >= 1");
    const std::size_t n = example.doc_sentences.size();
    std::vector<std::size_t> indices(n);
    for (std::size_t i = 0; i < n; ++i) indices[i] = i;
    std::mt19937_64 rng(seed);
    const std::size_t take = std::min(budget, n);
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + detail::uniform_below(rng, n - i);
        std::swap(indices[i], indices[j]);
    }
    std::vector<std::size_t> picks(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(take));
    std::sort(picks.begin(), picks.end());
    return detail::concat_sentences(example.doc_sentences, picks);
}

// Budget 1: exhaustive best sentence. Budget > 1: greedy, adding the
// sentence with the largest objective gain until the budget is reached or
// nothing improves. Ties break toward the earliest document position.
inline std::vector<std::string> ext_oracle(const Example& example, std::size_t budget,
                                           OracleObjective objective = OracleObjective::mean12,
                                           bool stem = false) {
    if (example.doc_sentences.empty())
        throw ValidationError("ext_oracle: empty document for id '" + example.id + "'");
    if (budget < 1) throw ValidationError("sentence budget must be >= 1");
    const std::size_t n = example.doc_sentences.size();
    std::vector<bool> selected(n, false);
    std::vector<std::size_t> picks;
    double current = 0.0;
    for (std::size_t round = 0; round < std::min(budget, n); ++round) {
        double best = current;
        std::size_t best_idx = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (selected[i]) continue;
            std::vector<std::size_t> trial = picks;
            trial.push_back(i);
            std::sort(trial.begin(), trial.end());
            const double score = oracle_objective_score(
                detail::concat_sentences(example.doc_sentences, trial), example.summary_tokens,
                objective, stem);
            if (score > best) {
                best = score;
                best_idx = i;
            }
        }
        if (best_idx == n) {
            if (round == 0) {
                // No sentence scores above zero; fall back to the earliest.
                best_idx = 0;
            } else {
                break;
            }
        }
        selected[best_idx] = true;
        picks.push_back(best_idx);
        std::sort(picks.begin(), picks.end());
        current = oracle_objective_score(detail::concat_sentences(example.doc_sentences, picks),
                                         example.summary_tokens, objective, stem);
    }
    return detail::concat_sentences(example.doc_sentences, picks);
}

inline std::vector<std::string> extract_summary(const Example& example,
                                                const ExtractiveConfig& config) {
    config.validate();
    switch (config.strategy) {
        case ExtractiveStrategy::lead: return lead_summary(example, config.sentence_budget);
        case ExtractiveStrategy::random:
            // Fold the article id into the seed so each document draws its
            // own reproducible sample.
            return random_summary(example, config.sentence_budget,
                                  config.seed ^ fnv1a64(example.id));
        case ExtractiveStrategy::oracle:
            return ext_oracle(example, config.sentence_budget, config.objective, config.stem);
    }
    throw ValidationError("unknown extractive strategy");
}

}  // namespace topicsum
