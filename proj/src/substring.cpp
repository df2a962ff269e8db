#include "scfg/substring.hpp"

#include <algorithm>

#include "scfg/inside.hpp"

namespace scfg {

namespace {

DenseMatrix corner_coupling(const CnfGrammar& g, Side side) {
    DenseMatrix a(g.nonterminal_count());
    for (const auto& rule : g.binary_rules())
        a(rule.lhs, side == Side::left ? rule.left : rule.right) += rule.prob;
    return a;
}

}  // namespace

CornerSystem::CornerSystem(const CnfGrammar& g, Side side)
    : grammar_(&g), side_(side), coupling_(corner_coupling(g, side)),
      factorization_(lu_factor(identity_minus(coupling_))) {}

Vector corner_probs(const CornerSystem& cs, int word) {
    const CnfGrammar& g = cs.grammar();
    Vector t(static_cast<std::size_t>(g.nonterminal_count()), 0.0);
    if (word >= 0)
        for (const auto& lex : g.lexical_rules_for(word)) t[static_cast<std::size_t>(lex.lhs)] += lex.prob;
    return cs.factorization().solve(t);
}

Vector corner_probs(const CornerSystem& cs, std::string_view word) {
    return corner_probs(cs, cs.grammar().word_index(word));
}

SubstringProbs::SubstringProbs(const CnfGrammar& g)
    : grammar_(g),
      mirrored_(mirror(g)),
      left_{&grammar_, CornerSystem(grammar_, Side::left), {}},
      right_{&mirrored_, CornerSystem(mirrored_, Side::left), {}} {}

const Vector& SubstringProbs::compute(SideState& side, std::span<const int> words) {
    std::vector<int> key(words.begin(), words.end());
    if (auto it = side.memo.find(key); it != side.memo.end()) return it->second;

    const CnfGrammar& g = *side.grammar;
    const int n = g.nonterminal_count();
    const bool oov = std::any_of(words.begin(), words.end(), [](int w) { return w < 0; });
    if (words.empty() || oov) {
        Vector zero(static_cast<std::size_t>(n), 0.0);
        return side.memo.emplace(std::move(key), std::move(zero)).first->second;
    }

    Vector b(static_cast<std::size_t>(n), 0.0);
    if (words.size() == 1) {
        for (const auto& lex : g.lexical_rules_for(words[0])) b[static_cast<std::size_t>(lex.lhs)] += lex.prob;
    } else {
        InsideChart chart = inside_chart(g, words);
        for (std::size_t j = 1; j < words.size(); ++j) {
            const Vector& rest = compute(side, words.subspan(j));
            for (const auto& rule : g.binary_rules()) {
                double head = chart.value(0, static_cast<int>(j), rule.left);
                if (head == 0.0) continue;
                double tail = rest[static_cast<std::size_t>(rule.right)];
                if (tail == 0.0) continue;
                b[static_cast<std::size_t>(rule.lhs)] += rule.prob * head * tail;
            }
        }
    }
    Vector p = side.corners.factorization().solve(b);
    return side.memo.emplace(std::move(key), std::move(p)).first->second;
}

const Vector& SubstringProbs::prefix_probs(std::span<const int> words) { return compute(left_, words); }

const Vector& SubstringProbs::suffix_probs(std::span<const int> words) {
    std::vector<int> reversed(words.rbegin(), words.rend());
    return compute(right_, reversed);
}

Vector SubstringProbs::prefix_probs(std::span<const std::string> words) {
    std::vector<int> ids = word_ids(grammar_, words);
    return prefix_probs(std::span<const int>(ids));
}

Vector SubstringProbs::suffix_probs(std::span<const std::string> words) {
    std::vector<int> ids = word_ids(grammar_, words);
    return suffix_probs(std::span<const int>(ids));
}

}  // namespace scfg
