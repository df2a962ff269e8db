#include "scfg/grammar.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>

namespace scfg {

SymbolId SymbolTable::intern(std::string_view name) {
    auto it = ids_.find(std::string(name));
    if (it != ids_.end()) return it->second;
    SymbolId id = static_cast<SymbolId>(names_.size());
    names_.emplace_back(name);
    ids_.emplace(names_.back(), id);
    return id;
}

SymbolId SymbolTable::find(std::string_view name) const {
    auto it = ids_.find(std::string(name));
    return it == ids_.end() ? -1 : it->second;
}

const std::string& SymbolTable::name(SymbolId id) const {
    return names_.at(static_cast<std::size_t>(id));
}

Grammar::Grammar(SymbolTable symbols, std::vector<Rule> rules, SymbolId start)
    : symbols_(std::move(symbols)), rules_(std::move(rules)), start_(start) {
    is_nonterminal_.assign(symbols_.size(), false);
    std::vector<bool> occurs(symbols_.size(), false);
    for (const auto& r : rules_) {
        is_nonterminal_[static_cast<std::size_t>(r.lhs)] = true;
        occurs[static_cast<std::size_t>(r.lhs)] = true;
        for (SymbolId s : r.rhs) occurs[static_cast<std::size_t>(s)] = true;
    }
    for (SymbolId id = 0; id < static_cast<SymbolId>(symbols_.size()); ++id) {
        if (!occurs[static_cast<std::size_t>(id)]) continue;  // e.g. all its rules had probability 0
        if (is_nonterminal_[static_cast<std::size_t>(id)])
            nonterminals_.push_back(id);
        else
            terminals_.push_back(id);
    }
}

bool Grammar::is_nonterminal(SymbolId id) const {
    return id >= 0 && id < static_cast<SymbolId>(is_nonterminal_.size()) &&
           is_nonterminal_[static_cast<std::size_t>(id)];
}

namespace {

struct Token {
    std::string text;
    int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        std::size_t begin = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        out.push_back({std::string(line.substr(begin, i - begin)), static_cast<int>(begin) + 1});
    }
    return out;
}

}  // namespace

Grammar parse_grammar(std::string_view text, std::string_view start_override) {
    SymbolTable symbols;
    std::vector<Rule> rules;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::vector<Token> tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 3)
            throw GrammarError("line " + std::to_string(line_no) +
                                   ": malformed rule (expected `LHS -> sym ... [prob]`)",
                               line_no, tokens[0].column);
        if (tokens[1].text != "->")
            throw GrammarError("line " + std::to_string(line_no) + ": expected `->` after rule left-hand side",
                               line_no, tokens[1].column);

        const Token& tail = tokens.back();
        if (tail.text.size() < 3 || tail.text.front() != '[' || tail.text.back() != ']')
            throw GrammarError("line " + std::to_string(line_no) +
                                   ": missing probability (rules end with `[p]`)",
                               line_no, tail.column);
        std::string body = tail.text.substr(1, tail.text.size() - 2);
        char* end = nullptr;
        double prob = std::strtod(body.c_str(), &end);
        if (end != body.c_str() + body.size() || body.empty())
            throw GrammarError("line " + std::to_string(line_no) + ": invalid probability `" + body + "`",
                               line_no, tail.column);
        if (!(prob >= 0.0) || prob > 1.0)
            throw GrammarError("line " + std::to_string(line_no) + ": probability " + body +
                                   " outside (0, 1]",
                               line_no, tail.column);

        Rule rule;
        rule.lhs = symbols.intern(tokens[0].text);
        for (std::size_t i = 2; i + 1 < tokens.size(); ++i) rule.rhs.push_back(symbols.intern(tokens[i].text));
        rule.prob = prob;
        if (prob > 0.0) rules.push_back(std::move(rule));  // zero-probability rules are dropped
    }

    if (rules.empty()) throw GrammarError("empty grammar: no rules found");

    SymbolId start = rules.front().lhs;
    if (!start_override.empty()) {
        SymbolId id = symbols.find(start_override);
        bool has_rule = false;
        if (id >= 0)
            for (const auto& r : rules)
                if (r.lhs == id) {
                    has_rule = true;
                    break;
                }
        if (!has_rule)
            throw GrammarError("start symbol `" + std::string(start_override) + "` has no rules");
        start = id;
    }
    return Grammar(std::move(symbols), std::move(rules), start);
}

std::vector<Diagnostic> validate(const Grammar& g, double tolerance) {
    std::vector<Diagnostic> out;
    for (const auto& r : g.rules()) {
        if (r.rhs.empty())
            out.push_back({Diagnostic::Kind::epsilon_rule, g.name(r.lhs),
                           "epsilon rule for `" + g.name(r.lhs) + "` (empty right-hand side)"});
    }
    std::map<SymbolId, double> sums;
    for (const auto& r : g.rules()) sums[r.lhs] += r.prob;
    for (const auto& [lhs, sum] : sums) {
        if (std::fabs(sum - 1.0) > tolerance) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", sum);
            out.push_back({Diagnostic::Kind::probability_sum, g.name(lhs),
                           "rules for `" + g.name(lhs) + "` sum to " + buf + " (expected 1)"});
        }
    }
    return out;
}

Grammar renormalized(const Grammar& g) {
    std::map<SymbolId, double> sums;
    for (const auto& r : g.rules()) sums[r.lhs] += r.prob;
    std::vector<Rule> rules = g.rules();
    for (auto& r : rules) r.prob /= sums[r.lhs];
    return Grammar(g.symbols(), std::move(rules), g.start());
}

std::string serialize(const Grammar& g) {
    std::string out;
    char buf[48];
    for (const auto& r : g.rules()) {
        out += g.name(r.lhs);
        out += " ->";
        for (SymbolId s : r.rhs) {
            out += ' ';
            out += g.name(s);
        }
        std::snprintf(buf, sizeof buf, " [%.17g]\n", r.prob);
        out += buf;
    }
    return out;
}

}  // namespace scfg
