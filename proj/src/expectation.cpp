#include "scfg/expectation.hpp"

#include <algorithm>

#include "scfg/consistency.hpp"

namespace scfg {

DenseMatrix coefficient_matrix(const CnfGrammar& g) {
    // same accumulation as the consistency check's expectancy matrix
    return expectancy_matrix(g);
}

ExpectationEngine::ExpectationEngine(const CnfGrammar& g, SubstringProbs& substrings)
    : g_(g),
      substrings_(substrings),
      a_(coefficient_matrix(g)),
      factorization_(lu_factor(identity_minus(a_))) {}

Vector ExpectationEngine::rhs_vector(std::span<const int> words) {
    const int n = g_.nonterminal_count();
    Vector b(static_cast<std::size_t>(n), 0.0);
    if (words.empty() || std::any_of(words.begin(), words.end(), [](int w) { return w < 0; })) return b;

    if (words.size() == 1) {
        for (const auto& lex : g_.lexical_rules_for(words[0])) b[static_cast<std::size_t>(lex.lhs)] += lex.prob;
        return b;
    }
    for (std::size_t j = 1; j < words.size(); ++j) {
        const Vector& head = substrings_.suffix_probs(words.first(j));
        const Vector& tail = substrings_.prefix_probs(words.subspan(j));
        for (const auto& rule : g_.binary_rules()) {
            double h = head[static_cast<std::size_t>(rule.left)];
            if (h == 0.0) continue;
            double t = tail[static_cast<std::size_t>(rule.right)];
            if (t == 0.0) continue;
            b[static_cast<std::size_t>(rule.lhs)] += rule.prob * h * t;
        }
    }
    return b;
}

const Vector& ExpectationEngine::expectations(std::span<const int> words) {
    std::vector<int> key(words.begin(), words.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Vector c = factorization_.solve(rhs_vector(words));
    ++solves_;
    return memo_.emplace(std::move(key), std::move(c)).first->second;
}

double ExpectationEngine::language_expectation(std::span<const int> words) {
    return expectations(words)[static_cast<std::size_t>(g_.start())];
}

double ExpectationEngine::language_expectation(std::span<const std::string> words) {
    std::vector<int> ids = word_ids(g_, words);
    return language_expectation(std::span<const int>(ids));
}

}  // namespace scfg
