#include "scfg/consistency.hpp"

namespace scfg {

DenseMatrix expectancy_matrix(const CnfGrammar& g) {
    DenseMatrix e(g.nonterminal_count());
    for (const auto& rule : g.binary_rules()) {
        e(rule.lhs, rule.left) += rule.prob;
        e(rule.lhs, rule.right) += rule.prob;
    }
    return e;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::consistent: return "consistent";
        case Verdict::inconsistent: return "inconsistent";
        case Verdict::borderline: return "borderline";
    }
    return "borderline";
}

ConsistencyReport check_consistency(const CnfGrammar& g, double margin) {
    auto estimate = spectral_radius_estimate(expectancy_matrix(g), 1e-9, 10000);
    ConsistencyReport report;
    report.spectral_radius = estimate.value;
    report.iterations = estimate.iterations;
    report.converged = estimate.converged;
    if (estimate.value < 1.0 - margin)
        report.verdict = Verdict::consistent;
    else if (estimate.value >= 1.0)
        report.verdict = Verdict::inconsistent;
    else
        report.verdict = Verdict::borderline;
    return report;
}

}  // namespace scfg
