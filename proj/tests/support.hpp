#pragma once

// Test oracles, deliberately independent of the library under test: a
// separate mini grammar parser, brute-force language enumeration, and
// counting helpers that derive n-gram statistics straight from the
// enumerated sentence distribution.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracle {

// Finite toy language: 24 sentences whose probabilities sum to 1.
extern const char* kToyGrammarText;

// One-nonterminal grammar S -> x [p] | S S [1-p].
std::string self_recursive_text(double p);

using Sentence = std::vector<std::string>;
using Language = std::map<Sentence, double>;

// Expands every derivation of a finite-language grammar by brute force,
// aggregating sentence probabilities. Throws if a derivation exceeds
// max_steps expansions (the grammar is then not usably finite).
Language enumerate_language(const std::string& grammar_text, const std::string& start = "S",
                            int max_steps = 64);

double total_mass(const Language& language);

// Expected number of (possibly overlapping) occurrences of `words` as a
// substring of a sentence drawn from the language.
double expected_occurrences(const Language& language, const Sentence& words);

// Probability that a sentence begins with / ends with / equals `words`
// (prefix and suffix include the sentence being exactly `words`).
double prefix_mass(const Language& language, const Sentence& words);
double suffix_mass(const Language& language, const Sentence& words);
double exact_mass(const Language& language, const Sentence& words);

// Expected per-sentence counts of n-token windows over the padded sentence
// <s> w1 ... wk </s> (order 1 omits the start marker), plus the matching
// context totals. events[w] / contexts[w minus last] is the conditional
// n-gram probability.
struct WindowTables {
    std::map<Sentence, double> events;
    std::map<Sentence, double> contexts;
};
WindowTables windowed_counts(const Language& language, int order);

// Random grammar already in normal form: nonterminals A0..A{n-1}, words
// w0..w{t-1}. Each nonterminal gets 1..max_binary binary rules sharing
// probability 0.4 (the first links Ai -> A(i+1 mod n) A(i+2 mod n) so
// everything stays reachable) and three lexical rules sharing 0.6 whose words
// are assigned round-robin, covering the whole vocabulary whenever
// 3 * nonterminals >= words. The grammar is comfortably consistent at any size.
std::string random_grammar_text(int nonterminals, int words, int max_binary, std::uint64_t seed);

// Minimal reader for the textual language-model format produced by the
// exporter, used to round-trip tables in tests.
struct ArpaModel {
    std::map<int, long> declared;  // order -> entry count from the header
    std::map<int, std::map<Sentence, double>> logprob;
    std::map<int, std::map<Sentence, double>> backoff;  // only lines carrying one
};
ArpaModel parse_arpa(const std::string& text);

}  // namespace oracle
