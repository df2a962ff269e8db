#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "scfg/cnf.hpp"

namespace scfg {

// Deterministic random source. Substreams let batches be split into chunks
// whose draws do not depend on how the other chunks are consumed.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // uniform double in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    static RandomStream substream(std::uint64_t seed, std::uint64_t index);

  private:
    std::mt19937_64 engine_;
};

// Samples sentences by expanding the leftmost nonterminal until only words
// remain, giving up once the expansion budget is exhausted.
class DerivationSampler {
  public:
    explicit DerivationSampler(const CnfGrammar& g);

    // nullopt means the derivation was cut off at max_expansions
    std::optional<std::vector<int>> sample_sentence(RandomStream& rng, int max_expansions) const;

  private:
    struct Choice {
        double cumulative;
        int left;   // nonterminals, or -1 for a lexical rule
        int right;
        int word;  // lexical emission, or -1
    };
    const CnfGrammar* grammar_;
    std::vector<std::vector<Choice>> choices_;  // per nonterminal
};

struct SampleBatch {
    std::vector<std::vector<int>> sentences;
    long truncated = 0;
    std::uint64_t seed = 0;
    long requested = 0;
};

SampleBatch sample_batch(const CnfGrammar& g, long count, std::uint64_t seed,
                         int max_expansions = 10000);

struct EmpiricalEntry {
    double count = 0.0;
    double rel_freq = 0.0;  // conditional on the preceding n-1 tokens
    double std_err = 0.0;
};

// Windowed n-gram frequencies over <s> sentence </s>, matching the layout of
// the exact tables (unigrams skip the start marker).
std::map<std::vector<std::string>, EmpiricalEntry> empirical_ngrams(const SampleBatch& batch,
                                                                    const CnfGrammar& g, int order);

}  // namespace scfg
