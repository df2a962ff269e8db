#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "scfg/expectation.hpp"

namespace scfg {

// Conditional n-gram tables with sentence-boundary markers, derived from
// exact expected substring counts. For a context u and word w:
//   count(u w)    = expected occurrences of u w per sentence,
//   count(u </s>) = probability a sentence ends with u,
//   count(<s> v w) = probability a sentence begins with v w,
// and conditionals divide each event count by its context count. Every
// order up to the table's own is materialized so the table can be exported
// as a complete ARPA file.
class NGramTable {
public:
    using Tokens = std::vector<std::string>;

    struct Entry {
        double count = 0.0;  // expected (or merged) count mass of the full n-gram
        double prob = 0.0;   // conditional probability of the last token given the rest
    };

    static constexpr std::string_view kSentenceStart = "<s>";
    static constexpr std::string_view kSentenceEnd = "</s>";

    int order() const { return order_; }
    // n-grams of length k (1 <= k <= order), keyed by the full token string
    const std::map<Tokens, Entry>& ngrams(int k) const { return sections_.at(static_cast<std::size_t>(k)); }
    // contexts of the length-k section (k-1 tokens) and their count mass
    const std::map<Tokens, double>& contexts(int k) const { return context_counts_.at(static_cast<std::size_t>(k)); }
    const std::vector<std::string>& vocabulary() const { return vocabulary_; }

    // conditional probability of tokens.back() given the rest; 0 if absent
    double prob(const Tokens& tokens) const;
    double count(const Tokens& tokens) const;

private:
    friend NGramTable build_table(const CnfGrammar&, int, ExpectationEngine&, SubstringProbs&, double);
    friend struct CountMergeSpec;
    friend NGramTable merge_counts(const NGramTable&, const struct CountMergeSpec&, std::vector<std::string>*);

    int order_ = 0;
    std::vector<std::map<Tokens, Entry>> sections_;        // index 0 unused
    std::vector<std::map<Tokens, double>> context_counts_;  // index 0 unused
    std::vector<std::string> vocabulary_;
};

// Builds the conditional table of the given order. Candidate n-grams extend
// the nonzero (n-1)-grams over the vocabulary; expectations at or below
// `prune` are treated as zero and contexts with no surviving mass are
// dropped.
NGramTable build_table(const CnfGrammar& g, int order, ExpectationEngine& engine,
                       SubstringProbs& substrings, double prune = 1e-15);

struct CountMergeSpec {
    double pseudo_mass = 1.0;  // weight on the model-derived counts
    std::map<NGramTable::Tokens, double> corpus_counts;  // observed n-grams of the table's order
};

// Blends model expectations with observed counts: each top-order n-gram's
// merged count is pseudo_mass * model count + corpus count, and conditionals
// are recomputed from the merged counts. Vocabulary is the union; contexts
// whose merged mass is zero are dropped (reported through `warnings`).
// Lower-order sections are kept as computed from the model.
NGramTable merge_counts(const NGramTable& t, const CountMergeSpec& spec,
                        std::vector<std::string>* warnings = nullptr);

// Standard ARPA text format: a \data\ header with per-order entry counts,
// one \k-grams: section per order listing log10 probability, the tokens,
// and a 0 backoff weight for every order below the highest. Tokens that
// appear only inside higher-order entries (always <s>) get placeholder
// unigram lines with log probability -99. Entries are sorted by token
// sequence so identical tables serialize identically.
void export_arpa(const NGramTable& t, std::ostream& out);

// Count files pair a non-negative count and a tab with a space-separated
// n-gram: `count<TAB>w1 w2 ... wn`. Repeated n-grams accumulate.
std::map<NGramTable::Tokens, double> parse_counts(std::istream& in);

}  // namespace scfg
