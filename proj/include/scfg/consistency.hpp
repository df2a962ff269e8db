#pragma once

#include <string>

#include "scfg/cnf.hpp"
#include "scfg/linalg.hpp"

namespace scfg {

// First-order expectancy matrix E: E(X, U) is the expected number of
// occurrences of U after rewriting X once, i.e. the sum over binary rules
// X -> Y Z of P(X -> Y Z) counting each child slot equal to U.
DenseMatrix expectancy_matrix(const CnfGrammar& g);

enum class Verdict { consistent, inconsistent, borderline };

const char* to_string(Verdict v);

struct ConsistencyReport {
    double spectral_radius = 0.0;
    Verdict verdict = Verdict::borderline;
    int iterations = 0;
    bool converged = false;
};

// A grammar is consistent (derivations terminate with probability 1) iff the
// spectral radius of its expectancy matrix is below 1. Estimates within
// `margin` below 1 are reported as borderline rather than guessed at;
// estimates at or above 1 are inconsistent.
ConsistencyReport check_consistency(const CnfGrammar& g, double margin = 1e-6);

}  // namespace scfg
