#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "scfg/cnf.hpp"
#include "scfg/consistency.hpp"
#include "scfg/grammar.hpp"
#include "scfg/ngram.hpp"

namespace scfg {

struct PipelineConfig {
    std::string grammar_path;   // read from disk when set...
    std::string grammar_text;   // ...otherwise taken verbatim
    std::string start_override;
    int order = 2;
    bool renormalize = false;   // rescale rule weights when sums drift from 1
    bool force = false;         // proceed when the consistency verdict is borderline
    double prune = 1e-15;
    double margin = 1e-6;
    std::string merge_path;     // optional observed-count file
    double pseudo_mass = 1.0;
    long samples = 100000;
    std::uint64_t seed = 1;
    int max_expansions = 10000;
};

// Raised when the grammar's expected branching makes derivations fail to
// terminate with probability one (or sits too close to call).
class InconsistentGrammarError : public std::runtime_error {
  public:
    InconsistentGrammarError(const std::string& message, ConsistencyReport report)
        : std::runtime_error(message), report_(report) {}
    const ConsistencyReport& report() const { return report_; }

  private:
    ConsistencyReport report_;
};

struct PreparedGrammar {
    Grammar grammar;
    CnfGrammar cnf;
    ConsistencyReport consistency;
    bool renormalized = false;
    double parse_seconds = 0.0;
    double transform_seconds = 0.0;
    double consistency_seconds = 0.0;
};

PreparedGrammar prepare_grammar(const PipelineConfig& config);

struct TableResult {
    NGramTable table;
    std::vector<std::string> warnings;
    double factor_seconds = 0.0;  // building the shared linear systems
    double solve_seconds = 0.0;   // per-n-gram right-hand sides and solves
    double merge_seconds = 0.0;
    long factorizations = 0;
    long solves = 0;
};

TableResult build_ngram_table(const PreparedGrammar& prepared, const PipelineConfig& config);

// machine-readable run report (JSON)
std::string diagnostics_json(const PipelineConfig& config, const PreparedGrammar& prepared,
                             const TableResult* result);

std::string read_text_file(const std::string& path);  // throws GrammarError if unreadable

}  // namespace scfg
