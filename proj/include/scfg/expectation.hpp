#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "scfg/cnf.hpp"
#include "scfg/linalg.hpp"
#include "scfg/substring.hpp"

namespace scfg {

// Coefficient matrix of the substring-expectation system: A(X, U) sums
// P(X -> Y Z) over each child slot equal to U. It coincides with the
// first-order expectancy matrix used for the consistency check, and
// crucially it does not depend on the queried string, so (I - A) is
// factored once per grammar and reused for every query.
DenseMatrix coefficient_matrix(const CnfGrammar& g);

// Solves (I - A) c = b for the expected number of (possibly overlapping)
// occurrences of a word string in a sentence derived from each nonterminal.
// The right-hand side collects the ways a single rule application completes
// the string: for one word, the lexical probability; for longer strings,
// every split of w across the two children, weighting the left child's
// chance of ending with the first part against the right child's chance of
// beginning with the rest.
class ExpectationEngine {
public:
    ExpectationEngine(const CnfGrammar& g, SubstringProbs& substrings);

    const CnfGrammar& grammar() const { return g_; }
    const DenseMatrix& coefficient() const { return a_; }
    const Factorization& factorization() const { return factorization_; }

    Vector rhs_vector(std::span<const int> words);
    const Vector& expectations(std::span<const int> words);      // memoized, one solve per string
    double language_expectation(std::span<const int> words);     // expectations(words)[start]
    double language_expectation(std::span<const std::string> words);

    std::uint64_t solve_count() const { return solves_; }

private:
    const CnfGrammar& g_;
    SubstringProbs& substrings_;
    DenseMatrix a_;
    Factorization factorization_;
    std::map<std::vector<int>, Vector> memo_;
    std::uint64_t solves_ = 0;
};

}  // namespace scfg
