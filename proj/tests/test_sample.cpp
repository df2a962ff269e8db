#include <doctest.h>

#include <cmath>

#include "scfg/grammar.hpp"
#include "scfg/sample.hpp"
#include "support.hpp"

using namespace scfg;

TEST_CASE("random streams are deterministic and substreams are independent of batch layout") {
    RandomStream a(123);
    RandomStream b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());

    RandomStream c(124);
    bool differs = false;
    RandomStream a2(123);
    for (int i = 0; i < 10; ++i) differs |= a2.uniform() != c.uniform();
    CHECK(differs);

    RandomStream s(7);
    for (int i = 0; i < 1000; ++i) {
        double u = s.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("sampling is reproducible by seed") {
    CnfGrammar g = to_cnf(parse_grammar(oracle::kToyGrammarText));
    SampleBatch one = sample_batch(g, 2000, 42);
    SampleBatch two = sample_batch(g, 2000, 42);
    CHECK(one.sentences == two.sentences);
    SampleBatch other = sample_batch(g, 2000, 43);
    CHECK(one.sentences != other.sentences);
}

TEST_CASE("a batch prefix does not depend on the total batch size") {
    CnfGrammar g = to_cnf(parse_grammar(oracle::kToyGrammarText));
    SampleBatch small = sample_batch(g, 8192, 9);
    SampleBatch large = sample_batch(g, 20000, 9);
    REQUIRE(large.sentences.size() >= small.sentences.size());
    for (std::size_t i = 0; i < small.sentences.size(); ++i)
        CHECK(small.sentences[i] == large.sentences[i]);
}

TEST_CASE("a deterministic grammar samples its only sentence") {
    CnfGrammar g = to_cnf(parse_grammar("S -> a b [1.0]\n"));
    SampleBatch batch = sample_batch(g, 50, 5);
    REQUIRE(batch.sentences.size() == 50);
    CHECK(batch.truncated == 0);
    for (const auto& s : batch.sentences) {
        REQUIRE(s.size() == 2);
        CHECK(g.word_name(s[0]) == "a");
        CHECK(g.word_name(s[1]) == "b");
    }
}

TEST_CASE("sampled sentence lengths track the expected count") {
    CnfGrammar g = to_cnf(parse_grammar(oracle::self_recursive_text(0.75)));
    SampleBatch batch = sample_batch(g, 50000, 2024);
    REQUIRE(batch.truncated == 0);  // budget 10000 is far beyond any plausible draw

    double mean = 0.0;
    for (const auto& s : batch.sentences) mean += static_cast<double>(s.size());
    mean /= static_cast<double>(batch.sentences.size());
    double var = 0.0;
    for (const auto& s : batch.sentences) {
        double d = static_cast<double>(s.size()) - mean;
        var += d * d;
    }
    var /= static_cast<double>(batch.sentences.size() - 1);
    double se = std::sqrt(var / static_cast<double>(batch.sentences.size()));
    // expected occurrences of x per sentence: p / (2p - 1) = 1.5
    CHECK(std::fabs(mean - 1.5) <= 3.0 * se);
}

TEST_CASE("the expansion budget truncates runaway derivations") {
    CnfGrammar g = to_cnf(parse_grammar(oracle::self_recursive_text(0.6)));
    SampleBatch batch = sample_batch(g, 5000, 5, 2);
    CHECK(batch.truncated > 0);
    CHECK(batch.requested == 5000);
    CHECK(static_cast<long>(batch.sentences.size()) + batch.truncated == 5000);
    // survivors are exactly the single-expansion sentences
    for (const auto& s : batch.sentences) CHECK(s.size() == 1);
}

TEST_CASE("windowed frequencies count overlapping occurrences") {
    CnfGrammar g = to_cnf(parse_grammar(oracle::self_recursive_text(0.75)));
    int x = g.word_index("x");
    REQUIRE(x >= 0);
    SampleBatch batch;
    batch.requested = 1;
    batch.sentences = {{x, x, x}};

    auto bigrams = empirical_ngrams(batch, g, 2);
    CHECK(bigrams.at({"x", "x"}).count == 2.0);
    CHECK(bigrams.at({"<s>", "x"}).count == 1.0);
    CHECK(bigrams.at({"x", "</s>"}).count == 1.0);
    // context x occurs 3 times: followed by x twice and </s> once
    CHECK(bigrams.at({"x", "x"}).rel_freq == doctest::Approx(2.0 / 3.0));
    CHECK(bigrams.at({"x", "</s>"}).rel_freq == doctest::Approx(1.0 / 3.0));

    auto unigrams = empirical_ngrams(batch, g, 1);
    CHECK(unigrams.at({"x"}).count == 3.0);
    CHECK(unigrams.at({"</s>"}).count == 1.0);
    CHECK(unigrams.count({"<s>"}) == 0);  // order one skips the start marker
    CHECK(unigrams.at({"x"}).rel_freq == doctest::Approx(0.75));
}

TEST_CASE("deterministic contexts show zero standard error") {
    CnfGrammar g = to_cnf(parse_grammar(oracle::kToyGrammarText));
    SampleBatch batch = sample_batch(g, 5000, 31);
    auto bigrams = empirical_ngrams(batch, g, 2);
    // `the` is always followed by `book` in this language
    CHECK(bigrams.at({"the", "book"}).rel_freq == 1.0);
    CHECK(bigrams.at({"the", "book"}).std_err == 0.0);
}

TEST_CASE("empirical bigram frequencies approach the true conditionals") {
    CnfGrammar g = to_cnf(parse_grammar(oracle::kToyGrammarText));
    SampleBatch batch = sample_batch(g, 20000, 77);
    auto bigrams = empirical_ngrams(batch, g, 2);
    struct Probe {
        std::vector<std::string> window;
        double truth;
    };
    const Probe probes[] = {
        {{"<s>", "book"}, 0.4}, {{"<s>", "the"}, 0.24}, {{"<s>", "a"}, 0.36},
        {{"book", "open"}, 0.7 / 1.2}, {{"open", "</s>"}, 0.8},
    };
    for (const auto& probe : probes) {
        const auto& e = bigrams.at(probe.window);
        CAPTURE(probe.window[0] + " " + probe.window[1]);
        CHECK(std::fabs(e.rel_freq - probe.truth) <= 4.0 * e.std_err);
    }
}
