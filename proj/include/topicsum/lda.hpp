#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "topicsum/common.hpp"
#include "topicsum/corpus.hpp"

namespace topicsum {

struct LdaConfig {
    int topics = 512;
    std::vector<double> alpha;    // document-topic prior; empty -> 1/K per topic
    double eta = 0.1;             // symmetric topic-word prior, refit from the data
    bool learn_eta = true;        // Minka fixed-point update
    int eta_update_interval = 10; // sweeps between eta updates
    int sweeps = 200;
    int infer_sweeps = 50;
    std::uint64_t seed = 1;

    void validate() const {
        if (topics < 2) throw ValidationError("lda: topic count must be >= 2");
        if (eta <= 0) throw ValidationError("lda: eta must be positive");
        for (double a : alpha)
            if (a <= 0) throw ValidationError("lda: alpha entries must be positive");
        if (!alpha.empty() && static_cast<int>(alpha.size()) != topics)
            throw ValidationError("lda: alpha length must equal topic count");
    }

    std::vector<double> resolved_alpha() const {
        if (!alpha.empty()) return alpha;
        return std::vector<double>(static_cast<std::size_t>(topics),
                                   1.0 / static_cast<double>(topics));
    }
};

namespace detail {

inline double digamma(double x) {
    double result = 0;
    while (x < 6.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 / 252.0));
    return result;
}

inline std::size_t uniform_below64(std::mt19937_64& rng, std::size_t n) {
    const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % n;
    std::uint64_t x;
    do { x = rng(); } while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

}  // namespace detail

// Trained topic model: sufficient statistics of the collapsed state plus the
// priors. Word and document topic vectors are derived on demand.
class TopicModel {
public:
    int topics = 0;
    int vocab_size = 0;
    std::vector<std::int64_t> topic_word;   // topics x vocab_size, row-major counts
    std::vector<std::int64_t> topic_total;  // per-topic token totals
    std::vector<double> alpha;
    double eta = 0.1;
    int infer_sweeps = 50;
    std::uint64_t seed = 1;

    std::int64_t count(int k, int w) const {
        return topic_word[static_cast<std::size_t>(k) * static_cast<std::size_t>(vocab_size) +
                          static_cast<std::size_t>(w)];
    }

    // p(word | topic) with the symmetric eta prior folded in.
    double phi(int k, int w) const {
        return (static_cast<double>(count(k, w)) + eta) /
               (static_cast<double>(topic_total[static_cast<std::size_t>(k)]) +
                eta * static_cast<double>(vocab_size));
    }

    // Row-normalized topic-word matrix (each row sums to 1).
    std::vector<double> topic_row(int k) const {
        std::vector<double> row(static_cast<std::size_t>(vocab_size));
        for (int w = 0; w < vocab_size; ++w) row[static_cast<std::size_t>(w)] = phi(k, w);
        return row;
    }

    double alpha_sum() const {
        double s = 0;
        for (double a : alpha) s += a;
        return s;
    }
};

namespace detail {

struct GibbsState {
    std::vector<std::vector<int>> assignment;   // per doc, per token: topic
    std::vector<std::vector<std::int64_t>> doc_topic;
    TopicModel model;
};

inline void eta_fixed_point(TopicModel& model) {
    // Minka's fixed-point update for a symmetric Dirichlet prior over the
    // topic-word rows.
    const double v = static_cast<double>(model.vocab_size);
    for (int iter = 0; iter < 5; ++iter) {
        const double eta = model.eta;
        double num = 0, den = 0;
        const double psi_eta = digamma(eta);
        for (int k = 0; k < model.topics; ++k) {
            for (int w = 0; w < model.vocab_size; ++w) {
                const std::int64_t c = model.count(k, w);
                if (c > 0) num += digamma(static_cast<double>(c) + eta) - psi_eta;
            }
            den += digamma(static_cast<double>(model.topic_total[static_cast<std::size_t>(k)]) +
                           v * eta) -
                   digamma(v * eta);
        }
        den *= v;
        if (den <= 0 || num <= 0) return;
        const double updated = eta * num / den;
        if (!std::isfinite(updated) || updated <= 1e-8) return;
        model.eta = updated;
        if (std::abs(updated - eta) < 1e-6 * eta) return;
    }
}

inline void gibbs_sweep(GibbsState& state, std::mt19937_64& rng,
                        const std::vector<std::vector<int>>& docs, std::vector<double>& scratch) {
    TopicModel& m = state.model;
    const int K = m.topics;
    const double v_eta = m.eta * static_cast<double>(m.vocab_size);
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto& doc_topic = state.doc_topic[d];
        auto& z = state.assignment[d];
        for (std::size_t t = 0; t < docs[d].size(); ++t) {
            const int w = docs[d][t];
            const int old_k = z[t];
            --doc_topic[static_cast<std::size_t>(old_k)];
            --m.topic_word[static_cast<std::size_t>(old_k) * static_cast<std::size_t>(m.vocab_size) +
                           static_cast<std::size_t>(w)];
            --m.topic_total[static_cast<std::size_t>(old_k)];
            double total = 0;
            for (int k = 0; k < K; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                const double p =
                    (static_cast<double>(doc_topic[ks]) + m.alpha[ks]) *
                    (static_cast<double>(
                         m.topic_word[ks * static_cast<std::size_t>(m.vocab_size) +
                                      static_cast<std::size_t>(w)]) +
                     m.eta) /
                    (static_cast<double>(m.topic_total[ks]) + v_eta);
                total += p;
                scratch[ks] = total;
            }
            const double u = std::generate_canonical<double, 53>(rng) * total;
            int new_k = 0;
            while (new_k + 1 < K && u >= scratch[static_cast<std::size_t>(new_k)]) ++new_k;
            z[t] = new_k;
            ++doc_topic[static_cast<std::size_t>(new_k)];
            ++m.topic_word[static_cast<std::size_t>(new_k) * static_cast<std::size_t>(m.vocab_size) +
                           static_cast<std::size_t>(w)];
            ++m.topic_total[static_cast<std::size_t>(new_k)];
        }
    }
}

// In-sample perplexity from the current collapsed state.
inline double state_perplexity(const GibbsState& state, const std::vector<std::vector<int>>& docs) {
    const TopicModel& m = state.model;
    const double alpha_sum = m.alpha_sum();
    double log_lik = 0;
    std::size_t tokens = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        double doc_len = 0;
        for (std::int64_t c : state.doc_topic[d]) doc_len += static_cast<double>(c);
        for (int w : docs[d]) {
            double p = 0;
            for (int k = 0; k < m.topics; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                const double theta =
                    (static_cast<double>(state.doc_topic[d][ks]) + m.alpha[ks]) /
                    (doc_len + alpha_sum);
                p += theta * m.phi(k, w);
            }
            log_lik += std::log(std::max(p, 1e-300));
            ++tokens;
        }
    }
    return tokens ? std::exp(-log_lik / static_cast<double>(tokens)) : 0.0;
}

}  // namespace detail

// Collapsed Gibbs training over documents given as vocab-id sequences.
// Deterministic for a fixed seed. The optional sweep callback observes
// (sweep index, in-sample perplexity) after each sweep.
template <typename SweepFn>
TopicModel fit_lda(const std::vector<std::vector<int>>& documents, int vocab_size,
                   const LdaConfig& config, SweepFn&& on_sweep) {
    config.validate();
    if (vocab_size < 1) throw ValidationError("lda: vocabulary must be nonempty");
    bool any_token = false;
    for (const auto& d : documents)
        for (int w : d) {
            if (w < 0 || w >= vocab_size) throw ValidationError("lda: token id out of range");
            any_token = true;
        }
    if (documents.empty() || !any_token)
        throw ValidationError("lda: cannot fit on an empty corpus");

    detail::GibbsState state;
    TopicModel& m = state.model;
    m.topics = config.topics;
    m.vocab_size = vocab_size;
    m.alpha = config.resolved_alpha();
    m.eta = config.eta;
    m.infer_sweeps = config.infer_sweeps;
    m.seed = config.seed;
    m.topic_word.assign(static_cast<std::size_t>(config.topics) * static_cast<std::size_t>(vocab_size), 0);
    m.topic_total.assign(static_cast<std::size_t>(config.topics), 0);

    std::mt19937_64 rng(config.seed);
    state.assignment.resize(documents.size());
    state.doc_topic.assign(documents.size(),
                           std::vector<std::int64_t>(static_cast<std::size_t>(config.topics), 0));
    for (std::size_t d = 0; d < documents.size(); ++d) {
        state.assignment[d].resize(documents[d].size());
        for (std::size_t t = 0; t < documents[d].size(); ++t) {
            const int k = static_cast<int>(detail::uniform_below64(rng, static_cast<std::size_t>(config.topics)));
            state.assignment[d][t] = k;
            ++state.doc_topic[d][static_cast<std::size_t>(k)];
            ++m.topic_word[static_cast<std::size_t>(k) * static_cast<std::size_t>(vocab_size) +
                           static_cast<std::size_t>(documents[d][t])];
            ++m.topic_total[static_cast<std::size_t>(k)];
        }
    }

    std::vector<double> scratch(static_cast<std::size_t>(config.topics));
    for (int sweep = 1; sweep <= config.sweeps; ++sweep) {
        detail::gibbs_sweep(state, rng, documents, scratch);
        if (config.learn_eta && config.eta_update_interval > 0 &&
            sweep % config.eta_update_interval == 0)
            detail::eta_fixed_point(m);
        on_sweep(sweep, detail::state_perplexity(state, documents));
    }
    return m;
}

inline TopicModel fit_lda(const std::vector<std::vector<int>>& documents, int vocab_size,
                          const LdaConfig& config) {
    return fit_lda(documents, vocab_size, config, [](int, double) {});
}

// Held-out inference with the topic-word matrix frozen. Documents with no
// in-range tokens fall back to the uniform vector (flag reports it).
inline std::vector<double> infer_document_topics(const TopicModel& model,
                                                 const std::vector<int>& tokens,
                                                 bool* uniform_fallback = nullptr) {
    const int K = model.topics;
    std::vector<int> usable;
    usable.reserve(tokens.size());
    for (int w : tokens)
        if (w >= 0 && w < model.vocab_size) usable.push_back(w);
    if (uniform_fallback) *uniform_fallback = usable.empty();
    if (usable.empty())
        return std::vector<double>(static_cast<std::size_t>(K), 1.0 / static_cast<double>(K));

    std::mt19937_64 rng(model.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::int64_t> doc_topic(static_cast<std::size_t>(K), 0);
    std::vector<int> z(usable.size());
    for (std::size_t t = 0; t < usable.size(); ++t) {
        const int k = static_cast<int>(detail::uniform_below64(rng, static_cast<std::size_t>(K)));
        z[t] = k;
        ++doc_topic[static_cast<std::size_t>(k)];
    }
    std::vector<double> cumulative(static_cast<std::size_t>(K));
    for (int sweep = 0; sweep < model.infer_sweeps; ++sweep) {
        for (std::size_t t = 0; t < usable.size(); ++t) {
            const int w = usable[t];
            --doc_topic[static_cast<std::size_t>(z[t])];
            double total = 0;
            for (int k = 0; k < K; ++k) {
                const auto ks = static_cast<std::size_t>(k);
                total += model.phi(k, w) * (static_cast<double>(doc_topic[ks]) + model.alpha[ks]);
                cumulative[ks] = total;
            }
            const double u = std::generate_canonical<double, 53>(rng) * total;
            int new_k = 0;
            while (new_k + 1 < K && u >= cumulative[static_cast<std::size_t>(new_k)]) ++new_k;
            z[t] = new_k;
            ++doc_topic[static_cast<std::size_t>(new_k)];
        }
    }
    std::vector<double> t_d(static_cast<std::size_t>(K));
    const double denom = static_cast<double>(usable.size()) + model.alpha_sum();
    for (int k = 0; k < K; ++k)
        t_d[static_cast<std::size_t>(k)] =
            (static_cast<double>(doc_topic[static_cast<std::size_t>(k)]) +
             model.alpha[static_cast<std::size_t>(k)]) / denom;
    return t_d;
}

// Posterior topic distribution of a single word: p(k | w) ∝ phi(k, w) p(k),
// with p(k) from the global topic totals. Out-of-range ids give uniform.
inline std::vector<double> word_topic_distribution(const TopicModel& model, int token) {
    const int K = model.topics;
    std::vector<double> t(static_cast<std::size_t>(K), 1.0 / static_cast<double>(K));
    if (token < 0 || token >= model.vocab_size) return t;
    double grand_total = 0;
    for (std::int64_t c : model.topic_total) grand_total += static_cast<double>(c);
    if (grand_total <= 0) return t;
    double sum = 0;
    for (int k = 0; k < K; ++k) {
        const double p = model.phi(k, token) *
                         (static_cast<double>(model.topic_total[static_cast<std::size_t>(k)]) /
                          grand_total);
        t[static_cast<std::size_t>(k)] = p;
        sum += p;
    }
    if (sum <= 0)
        return std::vector<double>(static_cast<std::size_t>(K), 1.0 / static_cast<double>(K));
    for (double& p : t) p /= sum;
    return t;
}

// ---------------------------------------------------------------------------
// Persistence: versioned little-endian binary.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr char kLdaMagic[8] = {'T', 'S', 'L', 'D', 'A', 'M', 'D', 'L'};
inline constexpr std::uint32_t kLdaVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::istream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw ParseError("truncated binary file");
}

}  // namespace detail

inline void save_topic_model(const TopicModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out.write(detail::kLdaMagic, sizeof(detail::kLdaMagic));
    detail::write_pod(out, detail::kLdaVersion);
    detail::write_pod(out, static_cast<std::int32_t>(model.topics));
    detail::write_pod(out, static_cast<std::int32_t>(model.vocab_size));
    detail::write_pod(out, model.seed);
    detail::write_pod(out, static_cast<std::int32_t>(model.infer_sweeps));
    detail::write_pod(out, model.eta);
    for (double a : model.alpha) detail::write_pod(out, a);
    out.write(reinterpret_cast<const char*>(model.topic_word.data()),
              static_cast<std::streamsize>(model.topic_word.size() * sizeof(std::int64_t)));
    out.write(reinterpret_cast<const char*>(model.topic_total.data()),
              static_cast<std::streamsize>(model.topic_total.size() * sizeof(std::int64_t)));
    if (!out) throw ValidationError("write failed: " + path);
}

inline TopicModel load_topic_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open topic model: " + path);
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || !std::equal(magic, magic + 8, detail::kLdaMagic))
        throw ParseError("not a topic model file: " + path);
    std::uint32_t version = 0;
    detail::read_pod(in, version);
    if (version != detail::kLdaVersion)
        throw ParseError("unsupported topic model version " + std::to_string(version));
    TopicModel model;
    std::int32_t topics = 0, vocab = 0, infer_sweeps = 0;
    detail::read_pod(in, topics);
    detail::read_pod(in, vocab);
    detail::read_pod(in, model.seed);
    detail::read_pod(in, infer_sweeps);
    detail::read_pod(in, model.eta);
    if (topics < 2 || vocab < 1) throw ParseError("corrupt topic model header");
    model.topics = topics;
    model.vocab_size = vocab;
    model.infer_sweeps = infer_sweeps;
    model.alpha.resize(static_cast<std::size_t>(topics));
    for (double& a : model.alpha) detail::read_pod(in, a);
    model.topic_word.resize(static_cast<std::size_t>(topics) * static_cast<std::size_t>(vocab));
    in.read(reinterpret_cast<char*>(model.topic_word.data()),
            static_cast<std::streamsize>(model.topic_word.size() * sizeof(std::int64_t)));
    model.topic_total.resize(static_cast<std::size_t>(topics));
    in.read(reinterpret_cast<char*>(model.topic_total.data()),
            static_cast<std::streamsize>(model.topic_total.size() * sizeof(std::int64_t)));
    if (!in) throw ParseError("truncated topic model file: " + path);
    return model;
}

// Vocab-id documents for LDA: content tokens only (reserved ids skipped).
inline std::vector<std::vector<int>> lda_documents(const std::vector<Example>& examples,
                                                   const Vocabulary& vocab) {
    std::vector<std::vector<int>> docs;
    docs.reserve(examples.size());
    for (const auto& ex : examples) {
        std::vector<int> doc;
        doc.reserve(ex.doc_tokens.size());
        for (const auto& t : ex.doc_tokens) {
            const int id = vocab.encode(t);
            if (id >= Vocabulary::kReserved) doc.push_back(id - Vocabulary::kReserved);
        }
        docs.push_back(std::move(doc));
    }
    return docs;
}

}  // namespace topicsum
