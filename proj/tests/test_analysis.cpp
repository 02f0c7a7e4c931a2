#include <catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "topicsum/analysis.hpp"

using namespace topicsum;

namespace {

using Tokens = std::vector<std::string>;

std::vector<Tokens> random_summaries(std::mt19937_64& rng, std::size_t count,
                                     std::size_t vocab = 12, std::size_t max_len = 14) {
    std::vector<Tokens> out;
    for (std::size_t i = 0; i < count; ++i) {
        Tokens t;
        const std::size_t len = 1 + rng() % max_len;
        for (std::size_t j = 0; j < len; ++j)
            t.push_back("w" + std::to_string(rng() % vocab));
        out.push_back(std::move(t));
    }
    return out;
}

Example make_ex(const std::string& id, const Tokens& doc, const Tokens& summary) {
    Example ex;
    ex.id = id;
    ex.doc_sentences = {doc};
    ex.doc_tokens = doc;
    ex.summary_tokens = summary;
    return ex;
}

// Brute-force oracle: tuple-keyed sets/maps instead of string hashing.
std::set<std::vector<std::string>> gram_set(const Tokens& tokens, std::size_t n) {
    std::set<std::vector<std::string>> grams;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        grams.insert(std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                              tokens.begin() + static_cast<std::ptrdiff_t>(i + n)));
    return grams;
}

double oracle_novelty(const std::vector<Example>& corpus, std::size_t n) {
    std::size_t novel = 0, total = 0;
    for (const auto& ex : corpus) {
        auto doc = gram_set(ex.doc_tokens, n);
        for (std::size_t i = 0; i + n <= ex.summary_tokens.size(); ++i) {
            std::vector<std::string> g(ex.summary_tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                       ex.summary_tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
            ++total;
            if (!doc.count(g)) ++novel;
        }
    }
    return total ? double(novel) / double(total) : 0.0;
}

double oracle_seen(const std::vector<Tokens>& train, const std::vector<Tokens>& test,
                   std::size_t n) {
    std::set<std::vector<std::string>> train_grams, test_grams;
    for (const auto& s : train)
        for (const auto& g : gram_set(s, n)) train_grams.insert(g);
    for (const auto& s : test)
        for (const auto& g : gram_set(s, n)) test_grams.insert(g);
    if (test_grams.empty()) return 0.0;
    std::size_t seen = 0;
    for (const auto& g : test_grams)
        if (train_grams.count(g)) ++seen;
    return double(seen) / double(test_grams.size());
}

double oracle_ttr(const std::vector<Tokens>& summaries, std::size_t n) {
    std::set<std::vector<std::string>> types;
    std::size_t total = 0;
    for (const auto& s : summaries) {
        for (std::size_t i = 0; i + n <= s.size(); ++i) {
            types.insert(std::vector<std::string>(s.begin() + static_cast<std::ptrdiff_t>(i),
                                                  s.begin() + static_cast<std::ptrdiff_t>(i + n)));
            ++total;
        }
    }
    return total ? double(types.size()) / double(total) : 0.0;
}

}  // namespace

TEST_CASE("unigram novelty on the two-token summary") {
    auto corpus = std::vector<Example>{make_ex("1", {"a", "b", "c"}, {"a", "d"})};
    auto profile = novel_ngram_proportion(corpus, 1);
    CHECK(profile.at(1) == Catch::Approx(0.5));
}

TEST_CASE("verbatim summary has zero novelty at every order") {
    Tokens doc{"the", "plane", "made", "an", "emergency", "landing", "on", "a", "beach"};
    Tokens summary{"emergency", "landing", "on", "a", "beach"};
    auto corpus = std::vector<Example>{make_ex("1", doc, summary)};
    auto profile = novel_ngram_proportion(corpus, 4);
    for (std::size_t n = 1; n <= 4; ++n) CHECK(profile.at(n) == 0.0);
}

TEST_CASE("short summaries contribute no n-grams at large n") {
    auto corpus = std::vector<Example>{make_ex("1", {"a", "b"}, {"c"})};
    auto profile = novel_ngram_proportion(corpus, 3);
    CHECK(profile.at(1) == 1.0);
    CHECK(profile.at(2) == 0.0);  // no bigrams in a 1-token summary
    CHECK(profile.at(3) == 0.0);
}

TEST_CASE("novelty matches the brute-force oracle on random corpora") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Example> corpus;
        const std::size_t docs = 1 + rng() % 50;
        for (std::size_t i = 0; i < docs; ++i) {
            auto doc = random_summaries(rng, 1, 8, 30)[0];
            auto summary = random_summaries(rng, 1, 8, 10)[0];
            corpus.push_back(make_ex(std::to_string(i), doc, summary));
        }
        auto profile = novel_ngram_proportion(corpus, 4);
        for (std::size_t n = 1; n <= 4; ++n)
            REQUIRE(profile.at(n) == oracle_novelty(corpus, n));
    }
}

TEST_CASE("novelty never increases when the document grows") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        auto doc = random_summaries(rng, 1, 6, 20)[0];
        auto summary = random_summaries(rng, 1, 6, 8)[0];
        auto extra = random_summaries(rng, 1, 6, 10)[0];
        auto grown = doc;
        grown.insert(grown.end(), extra.begin(), extra.end());
        auto before = novel_ngram_proportion({make_ex("1", doc, summary)}, 3);
        auto after = novel_ngram_proportion({make_ex("1", grown, summary)}, 3);
        for (std::size_t n = 1; n <= 3; ++n) REQUIRE(after.at(n) <= before.at(n) + 1e-12);
    }
}

TEST_CASE("seen bigram fraction on the stated pair") {
    std::vector<Tokens> train{{"a", "b", "c"}};
    std::vector<Tokens> test{{"a", "b", "d"}};
    auto profile = seen_ngram_percentage(train, test, 2);
    CHECK(profile.at(2) == Catch::Approx(0.5));  // {ab, bd}, ab seen
}

TEST_CASE("test summaries contained in training give 1.0 everywhere") {
    std::vector<Tokens> train{{"x", "y", "z", "w"}, {"p", "q"}};
    auto profile = seen_ngram_percentage(train, train, 2);
    CHECK(profile.at(1) == 1.0);
    CHECK(profile.at(2) == 1.0);
}

TEST_CASE("seen fraction matches oracle and is monotone in the training corpus") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        auto train = random_summaries(rng, 5 + rng() % 20);
        auto test = random_summaries(rng, 1 + rng() % 20);
        auto profile = seen_ngram_percentage(train, test, 5);
        for (std::size_t n = 1; n <= 5; ++n)
            REQUIRE(profile.at(n) == oracle_seen(train, test, n));
        auto bigger = train;
        auto more = random_summaries(rng, 5);
        bigger.insert(bigger.end(), more.begin(), more.end());
        auto grown = seen_ngram_percentage(bigger, test, 5);
        for (std::size_t n = 1; n <= 5; ++n) REQUIRE(grown.at(n) >= profile.at(n) - 1e-12);
    }
}

TEST_CASE("type token ratio of all-distinct and all-repeated corpora") {
    CHECK(type_token_ratio({{"a", "b", "c"}}, 1).at(1) == 1.0);
    CHECK(type_token_ratio({{"a", "a", "a"}}, 1).at(1) == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("type token ratio matches the hash-set oracle on a 200-summary corpus") {
    std::mt19937_64 rng(19);
    auto summaries = random_summaries(rng, 200);
    auto profile = type_token_ratio(summaries, 6);
    for (std::size_t n = 1; n <= 6; ++n)
        REQUIRE(profile.at(n) == oracle_ttr(summaries, n));
}

TEST_CASE("profile values stay within [0,1]") {
    std::mt19937_64 rng(23);
    auto train = random_summaries(rng, 10);
    auto test = random_summaries(rng, 10);
    for (const auto& profile :
         {seen_ngram_percentage(train, test, 8), type_token_ratio(test, 8)}) {
        for (std::size_t n = 1; n <= profile.max_n(); ++n) {
            REQUIRE(profile.at(n) >= 0.0);
            REQUIRE(profile.at(n) <= 1.0);
        }
    }
}

TEST_CASE("corpus statistics on a single trivial example") {
    auto corpus = std::vector<Example>{make_ex("1", {"a", "b"}, {"c"})};
    auto stats = corpus_statistics(corpus);
    CHECK(stats.doc_words == 2.0);
    CHECK(stats.doc_sentences == 1.0);
    CHECK(stats.summary_words == 1.0);
    CHECK(stats.summary_sentences == 1.0);
    CHECK(stats.doc_vocabulary == 2);
    CHECK(stats.summary_vocabulary == 1);
}

TEST_CASE("corpus statistics match hand-summed means on 10 synthetic examples") {
    std::mt19937_64 rng(29);
    std::vector<Example> corpus;
    double words = 0, sents = 0, sum_words = 0;
    std::set<std::string> doc_vocab, sum_vocab;
    for (int i = 0; i < 10; ++i) {
        auto doc = random_summaries(rng, 1, 9, 25)[0];
        auto summary = random_summaries(rng, 1, 9, 7)[0];
        corpus.push_back(make_ex(std::to_string(i), doc, summary));
        words += double(doc.size());
        sents += 1.0;
        sum_words += double(summary.size());
        doc_vocab.insert(doc.begin(), doc.end());
        sum_vocab.insert(summary.begin(), summary.end());
    }
    auto stats = corpus_statistics(corpus);
    CHECK(stats.doc_words == Catch::Approx(words / 10));
    CHECK(stats.doc_sentences == Catch::Approx(sents / 10));
    CHECK(stats.summary_words == Catch::Approx(sum_words / 10));
    CHECK(stats.doc_vocabulary == doc_vocab.size());
    CHECK(stats.summary_vocabulary == sum_vocab.size());
}

TEST_CASE("empty corpus is rejected") {
    CHECK_THROWS_AS(corpus_statistics({}), ValidationError);
    CHECK_THROWS_AS(seen_ngram_percentage({}, {{"a"}}, 2), ValidationError);
    CHECK_THROWS_AS(type_token_ratio({}, 2), ValidationError);
}
