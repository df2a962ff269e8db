#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "scfg/cnf.hpp"
#include "scfg/linalg.hpp"

namespace scfg {

enum class Side { left, right };

// Factored linear system for single-word corner probabilities. The coupling
// matrix sums rule probabilities onto the chosen child:
//   left:  A(X, Y) = sum of P(X -> Y Z)
//   right: A(X, Z) = sum of P(X -> Y Z)
// Solving (I - A) p = t with t(X) = P(X -> w) gives p(X) = probability that
// X derives a sentence whose first (left) or last (right) word is w.
class CornerSystem {
public:
    CornerSystem(const CnfGrammar& g, Side side);
    Side side() const { return side_; }
    const CnfGrammar& grammar() const { return *grammar_; }
    const DenseMatrix& coupling() const { return coupling_; }
    const Factorization& factorization() const { return factorization_; }

private:
    const CnfGrammar* grammar_;
    Side side_;
    DenseMatrix coupling_;
    Factorization factorization_;
};

// Per-nonterminal corner probabilities for one word (see CornerSystem).
Vector corner_probs(const CornerSystem& cs, int word);
Vector corner_probs(const CornerSystem& cs, std::string_view word);

// Memoized prefix and suffix generation probabilities for short word
// strings:
//   prefix_probs(w)(X) = P(X derives a sentence beginning with w),
//   suffix_probs(w)(X) = P(X derives a sentence ending with w),
// where "beginning/ending with" includes deriving exactly w. Multi-word
// strings are reduced by induction on length: conditioning on the top rule
// X -> Y Z, either Y's yield already begins with w (captured by the corner
// coupling on the left-hand side of the solve) or Y yields some proper
// prefix w[0, j) exactly — an inside probability — and Z continues with the
// remaining suffix. Suffixes are the same computation on the mirrored
// grammar with the string reversed.
class SubstringProbs {
public:
    explicit SubstringProbs(const CnfGrammar& g);

    const Vector& prefix_probs(std::span<const int> words);
    const Vector& suffix_probs(std::span<const int> words);
    Vector prefix_probs(std::span<const std::string> words);
    Vector suffix_probs(std::span<const std::string> words);

    const CnfGrammar& grammar() const { return grammar_; }
    const CnfGrammar& mirrored() const { return mirrored_; }

private:
    struct SideState {
        const CnfGrammar* grammar;
        CornerSystem corners;
        std::map<std::vector<int>, Vector> memo;
    };
    const Vector& compute(SideState& side, std::span<const int> words);

    const CnfGrammar& grammar_;
    CnfGrammar mirrored_;
    SideState left_;
    SideState right_;  // left corners of the mirrored grammar
};

}  // namespace scfg
