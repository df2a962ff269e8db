#include "scfg/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scfg/expectation.hpp"
#include "scfg/linalg.hpp"
#include "scfg/substring.hpp"

namespace scfg {

namespace {

class Timer {
  public:
    Timer() : begin_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin_).count();
    }

  private:
    std::chrono::steady_clock::time_point begin_;
};

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw GrammarError("cannot open file `" + path + "`");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

PreparedGrammar prepare_grammar(const PipelineConfig& config) {
    Timer parse_timer;
    std::string text =
        config.grammar_path.empty() ? config.grammar_text : read_text_file(config.grammar_path);
    Grammar grammar = parse_grammar(text, config.start_override);

    auto diagnostics = validate(grammar);
    bool renormalized = false;
    if (!diagnostics.empty() && config.renormalize) {
        bool fixable = true;
        for (const auto& d : diagnostics)
            if (d.kind != Diagnostic::Kind::probability_sum) fixable = false;
        if (fixable) {
            grammar = scfg::renormalized(grammar);
            diagnostics = validate(grammar);
            renormalized = true;
        }
    }
    if (!diagnostics.empty()) {
        std::string joined;
        for (const auto& d : diagnostics) {
            if (!joined.empty()) joined += "; ";
            joined += d.message;
        }
        throw GrammarError("grammar fails validation: " + joined);
    }
    double parse_seconds = parse_timer.seconds();

    Timer transform_timer;
    CnfGrammar cnf = to_cnf(grammar);
    double transform_seconds = transform_timer.seconds();

    Timer consistency_timer;
    ConsistencyReport report = check_consistency(cnf, config.margin);
    double consistency_seconds = consistency_timer.seconds();

    if (report.verdict == Verdict::inconsistent)
        throw InconsistentGrammarError("grammar is inconsistent: derivations are expected to grow "
                                       "without bound (spectral radius " +
                                           std::to_string(report.spectral_radius) + ")",
                                       report);
    if (report.verdict == Verdict::borderline && !config.force)
        throw InconsistentGrammarError("grammar is borderline: spectral radius " +
                                           std::to_string(report.spectral_radius) +
                                           " is too close to 1 (rerun with --force to proceed)",
                                       report);

    return PreparedGrammar{std::move(grammar), std::move(cnf),       report,
                           renormalized,       parse_seconds,        transform_seconds,
                           consistency_seconds};
}

TableResult build_ngram_table(const PreparedGrammar& prepared, const PipelineConfig& config) {
    if (config.order < 1) throw GrammarError("n-gram order must be at least 1");
    TableResult result;

    long factor_before = lu_factor_invocations();
    Timer factor_timer;
    SubstringProbs substrings(prepared.cnf);
    ExpectationEngine engine(prepared.cnf, substrings);
    result.factor_seconds = factor_timer.seconds();
    result.factorizations = lu_factor_invocations() - factor_before;

    Timer solve_timer;
    result.table = build_table(prepared.cnf, config.order, engine, substrings, config.prune);
    result.solve_seconds = solve_timer.seconds();
    result.solves = engine.solve_count();

    if (!config.merge_path.empty()) {
        Timer merge_timer;
        std::string text = read_text_file(config.merge_path);
        std::istringstream in(text);
        CountMergeSpec spec;
        spec.pseudo_mass = config.pseudo_mass;
        spec.corpus_counts = parse_counts(in);
        result.table = merge_counts(result.table, spec, &result.warnings);
        result.merge_seconds = merge_timer.seconds();
    }
    return result;
}

std::string diagnostics_json(const PipelineConfig& config, const PreparedGrammar& prepared,
                             const TableResult* result) {
    nlohmann::json j;
    j["grammar"] = {
        {"start", prepared.cnf.nonterminal_name(prepared.cnf.start())},
        {"nonterminals", prepared.cnf.nonterminal_count()},
        {"words", prepared.cnf.word_count()},
        {"binary_rules", prepared.cnf.binary_rules().size()},
        {"lexical_rules", prepared.cnf.lexical_rules().size()},
        {"renormalized", prepared.renormalized},
    };
    j["consistency"] = {
        {"spectral_radius", prepared.consistency.spectral_radius},
        {"verdict", to_string(prepared.consistency.verdict)},
        {"iterations", prepared.consistency.iterations},
        {"converged", prepared.consistency.converged},
    };
    j["stages"] = {
        {"parse_seconds", prepared.parse_seconds},
        {"transform_seconds", prepared.transform_seconds},
        {"consistency_seconds", prepared.consistency_seconds},
    };
    if (result) {
        j["stages"]["factor_seconds"] = result->factor_seconds;
        j["stages"]["solve_seconds"] = result->solve_seconds;
        if (!config.merge_path.empty()) j["stages"]["merge_seconds"] = result->merge_seconds;
        j["counters"] = {
            {"lu_factorizations", result->factorizations},
            {"linear_solves", result->solves},
        };
        nlohmann::json sizes = nlohmann::json::object();
        for (int k = 1; k <= result->table.order(); ++k)
            sizes[std::to_string(k)] = result->table.ngrams(k).size();
        j["counters"]["ngrams"] = sizes;
        j["order"] = result->table.order();
        if (!result->warnings.empty()) j["warnings"] = result->warnings;
    }
    return j.dump(2) + "\n";
}

}  // namespace scfg
