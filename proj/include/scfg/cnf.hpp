#pragma once

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "scfg/grammar.hpp"

namespace scfg {

struct BinaryRule {
    int lhs, left, right;  // dense nonterminal indices
    double prob;
};

struct LexicalRule {
    int lhs;   // dense nonterminal index
    int word;  // dense vocabulary index
    double prob;
};

// Grammar in Chomsky normal form: every rule is either nonterminal ->
// nonterminal nonterminal or nonterminal -> word. Nonterminals and words
// are densely indexed; immutable after construction.
class CnfGrammar {
public:
    struct FreshOrigin {
        std::string fresh;       // name of the introduced nonterminal
        std::string source_lhs;  // LHS of the rule it came from
        int rule_index;          // index of that rule in the source grammar
        int position;            // right-hand-side position it stands for
    };

    CnfGrammar(std::vector<std::string> nonterminal_names, std::vector<std::string> word_names,
               int start, std::vector<BinaryRule> binary, std::vector<LexicalRule> lexical,
               std::vector<FreshOrigin> origins);

    int nonterminal_count() const { return static_cast<int>(nt_names_.size()); }
    int word_count() const { return static_cast<int>(word_names_.size()); }
    int start() const { return start_; }

    const std::vector<BinaryRule>& binary_rules() const { return binary_; }
    const std::vector<LexicalRule>& lexical_rules() const { return lexical_; }
    const std::vector<LexicalRule>& lexical_rules_for(int word) const { return by_word_.at(static_cast<std::size_t>(word)); }

    const std::string& nonterminal_name(int nt) const { return nt_names_.at(static_cast<std::size_t>(nt)); }
    const std::string& word_name(int word) const { return word_names_.at(static_cast<std::size_t>(word)); }
    const std::vector<std::string>& word_names() const { return word_names_; }
    int nonterminal_index(std::string_view name) const;  // -1 if unknown
    int word_index(std::string_view name) const;         // -1 if unknown

    const std::vector<FreshOrigin>& fresh_origins() const { return origins_; }

private:
    std::vector<std::string> nt_names_;
    std::vector<std::string> word_names_;
    int start_;
    std::vector<BinaryRule> binary_;
    std::vector<LexicalRule> lexical_;
    std::vector<std::vector<LexicalRule>> by_word_;
    std::vector<FreshOrigin> origins_;
    std::unordered_map<std::string, int> nt_ids_;
    std::unordered_map<std::string, int> word_ids_;
};

// Converts a validated grammar to Chomsky normal form:
//   - terminals inside multi-symbol right-hand sides get preterminal
//     wrappers, and longer right-hand sides are binarized into chains;
//     fresh nonterminals are named `LHS@ruleindex@position`;
//   - unit productions are folded into the rules they reach, weighting by
//     the closure of the unit-rule matrix (solved with the numeric kernel);
//   - nonterminals unreachable from the start symbol are dropped and each
//     LHS block is renormalized to sum to exactly 1.
// Throws GrammarError for invalid input or a divergent unit-rule cycle.
CnfGrammar to_cnf(const Grammar& g);

// Same grammar with every binary rule's children swapped; the mirror
// generates each sentence reversed, with equal probability.
CnfGrammar mirror(const CnfGrammar& g);

// Maps words to dense vocabulary indices; unknown words become -1.
std::vector<int> word_ids(const CnfGrammar& g, std::span<const std::string> words);

}  // namespace scfg
