#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace scfg {

using SymbolId = std::int32_t;

// Interns token strings to dense ids, assigned in first-seen order.
class SymbolTable {
public:
    SymbolId intern(std::string_view name);
    SymbolId find(std::string_view name) const;  // -1 if unknown
    const std::string& name(SymbolId id) const;
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, SymbolId> ids_;
};

struct Rule {
    SymbolId lhs = -1;
    std::vector<SymbolId> rhs;  // empty only in invalid grammars; validate() reports it
    double prob = 0.0;          // in (0, 1]; zero-probability rules are dropped by the parser
};

// Raised for unparsable or otherwise unusable grammar/count-file input.
class GrammarError : public std::runtime_error {
public:
    explicit GrammarError(const std::string& message, int line = 0, int column = 0)
        : std::runtime_error(message), line_(line), column_(column) {}
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

struct Diagnostic {
    enum class Kind { probability_sum, epsilon_rule };
    Kind kind;
    std::string nonterminal;
    std::string message;
};

// Immutable probabilistic context-free grammar. A symbol is a nonterminal
// iff it occurs as some rule's left-hand side.
class Grammar {
public:
    Grammar(SymbolTable symbols, std::vector<Rule> rules, SymbolId start);

    const std::vector<Rule>& rules() const { return rules_; }
    SymbolId start() const { return start_; }
    const SymbolTable& symbols() const { return symbols_; }
    const std::string& name(SymbolId id) const { return symbols_.name(id); }
    bool is_nonterminal(SymbolId id) const;
    const std::vector<SymbolId>& nonterminals() const { return nonterminals_; }
    const std::vector<SymbolId>& terminals() const { return terminals_; }

private:
    SymbolTable symbols_;
    std::vector<Rule> rules_;
    SymbolId start_;
    std::vector<bool> is_nonterminal_;
    std::vector<SymbolId> nonterminals_;
    std::vector<SymbolId> terminals_;
};

// Parses the one-rule-per-line text format `LHS -> sym1 sym2 ... [prob]`.
// `#` starts a comment and blank lines are skipped. The start symbol is the
// first rule's left-hand side unless start_override names another
// nonterminal.
Grammar parse_grammar(std::string_view text, std::string_view start_override = {});

// Per-LHS probability sums must be 1 within tolerance and right-hand sides
// must be non-empty. An empty result means the grammar is usable.
std::vector<Diagnostic> validate(const Grammar& g, double tolerance = 1e-6);

// Rescales every LHS block so its probabilities sum to exactly 1.
Grammar renormalized(const Grammar& g);

// Writes the grammar back in the input format. Parsing the output
// reproduces the rule multiset exactly.
std::string serialize(const Grammar& g);

}  // namespace scfg
