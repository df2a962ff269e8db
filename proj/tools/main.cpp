#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scfg/linalg.hpp"
#include "scfg/pipeline.hpp"
#include "scfg/sample.hpp"

namespace {

using namespace scfg;

struct Options {
    PipelineConfig config;
    std::string output_path;
    std::string diagnostics_path;
    bool compare = false;
};

void write_file_or_stdout(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GrammarError("cannot write to `" + path + "`");
    out << content;
}

void write_diagnostics_file(const std::string& path, const std::string& json) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw GrammarError("cannot write to `" + path + "`");
    out << json;
}

int run_check(const Options& opt) {
    try {
        PreparedGrammar prepared = prepare_grammar(opt.config);
        std::printf("nonterminals: %d\n", prepared.cnf.nonterminal_count());
        std::printf("words: %d\n", prepared.cnf.word_count());
        std::printf("binary rules: %zu\n", prepared.cnf.binary_rules().size());
        std::printf("lexical rules: %zu\n", prepared.cnf.lexical_rules().size());
        std::printf("spectral radius: %.10f\n", prepared.consistency.spectral_radius);
        std::printf("verdict: %s (%d iterations)\n", to_string(prepared.consistency.verdict),
                    prepared.consistency.iterations);
        if (!opt.diagnostics_path.empty())
            write_diagnostics_file(opt.diagnostics_path,
                                   diagnostics_json(opt.config, prepared, nullptr));
        return prepared.consistency.verdict == Verdict::consistent ? 0 : 3;
    } catch (const InconsistentGrammarError& e) {
        const ConsistencyReport& r = e.report();
        std::printf("spectral radius: %.10f\n", r.spectral_radius);
        std::printf("verdict: %s (%d iterations)\n", to_string(r.verdict), r.iterations);
        std::cerr << "error: " << e.what() << "\n";
        if (!opt.diagnostics_path.empty()) {
            nlohmann::json j;
            j["consistency"] = {
                {"spectral_radius", r.spectral_radius},
                {"verdict", to_string(r.verdict)},
                {"iterations", r.iterations},
                {"converged", r.converged},
            };
            write_diagnostics_file(opt.diagnostics_path, j.dump(2) + "\n");
        }
        return 3;
    }
}

int run_ngrams(const Options& opt) {
    PreparedGrammar prepared = prepare_grammar(opt.config);
    TableResult result = build_ngram_table(prepared, opt.config);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    std::ostringstream arpa;
    export_arpa(result.table, arpa);
    write_file_or_stdout(opt.output_path, arpa.str());
    if (!opt.diagnostics_path.empty())
        write_diagnostics_file(opt.diagnostics_path, diagnostics_json(opt.config, prepared, &result));
    return 0;
}

int run_sample(const Options& opt) {
    PreparedGrammar prepared = prepare_grammar(opt.config);
    SampleBatch batch =
        sample_batch(prepared.cnf, opt.config.samples, opt.config.seed, opt.config.max_expansions);
    auto empirical = empirical_ngrams(batch, prepared.cnf, opt.config.order);

    std::ostringstream out;
    char buf[256];
    double rate = batch.requested > 0
                      ? static_cast<double>(batch.truncated) / static_cast<double>(batch.requested)
                      : 0.0;
    std::snprintf(buf, sizeof buf,
                  "requested %ld samples (seed %llu), kept %zu, truncated %ld (rate %.6f)\n",
                  batch.requested, static_cast<unsigned long long>(batch.seed),
                  batch.sentences.size(), batch.truncated, rate);
    out << buf;
    out << "count\trel_freq\tstd_err\tngram\n";
    for (const auto& [tokens, e] : empirical) {
        std::snprintf(buf, sizeof buf, "%.0f\t%.8f\t%.8f\t", e.count, e.rel_freq, e.std_err);
        out << buf;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i) out << ' ';
            out << tokens[i];
        }
        out << "\n";
    }

    if (opt.compare) {
        TableResult result = build_ngram_table(prepared, opt.config);
        double worst = 0.0;
        std::string worst_event = "(none)";
        bool missing = false;
        for (const auto& [tokens, e] : empirical) {
            if (e.count < 5.0) continue;
            double exact = result.table.prob(tokens);
            if (exact <= 0.0) {
                missing = true;
                worst_event = "unexpected event";
                continue;
            }
            if (e.std_err <= 0.0) continue;
            double z = std::fabs(e.rel_freq - exact) / e.std_err;
            if (z > worst) {
                worst = z;
                worst_event.clear();
                for (std::size_t i = 0; i < tokens.size(); ++i) {
                    if (i) worst_event += ' ';
                    worst_event += tokens[i];
                }
            }
        }
        std::snprintf(buf, sizeof buf, "compare: largest deviation %.2f standard errors (%s)\n", worst,
                      worst_event.c_str());
        out << buf;
        if (missing) out << "compare: saw an n-gram the exact table assigns zero probability\n";
    }
    write_file_or_stdout(opt.output_path, out.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact n-gram language models from stochastic context-free grammars"};
    app.require_subcommand(1);
    Options opt;

    auto add_grammar = [&](CLI::App* cmd) {
        cmd->add_option("-g,--grammar", opt.config.grammar_path, "grammar file")->required();
        cmd->add_option("--start", opt.config.start_override, "override the start symbol");
        cmd->add_flag("--renormalize", opt.config.renormalize,
                      "rescale rule weights whose sums drift from 1");
        cmd->add_flag("--force", opt.config.force, "proceed on a borderline consistency verdict");
        cmd->add_option("--diagnostics", opt.diagnostics_path, "write a JSON run report here");
    };
    auto add_table = [&](CLI::App* cmd, bool require_merge) {
        cmd->add_option("-n,--order", opt.config.order, "n-gram order")->check(CLI::PositiveNumber);
        cmd->add_option("-o,--output", opt.output_path, "output path (default: stdout)");
        cmd->add_option("--prune", opt.config.prune, "drop events with weight at or below this");
        auto* merge = cmd->add_option("--merge-counts", opt.config.merge_path,
                                      "blend in observed counts of the top order");
        cmd->add_option("--pseudo-mass", opt.config.pseudo_mass,
                        "weight (in sentences) of the exact table when merging");
        if (require_merge) merge->required();
    };

    CLI::App* check = app.add_subcommand("check", "parse a grammar and judge its consistency");
    add_grammar(check);

    CLI::App* ngrams = app.add_subcommand("ngrams", "compute an exact n-gram table");
    add_grammar(ngrams);
    add_table(ngrams, false);

    CLI::App* mix = app.add_subcommand("mix", "blend the exact table with observed counts");
    add_grammar(mix);
    add_table(mix, true);

    CLI::App* sample = app.add_subcommand("sample", "sample sentences and tally n-gram frequencies");
    add_grammar(sample);
    sample->add_option("-n,--order", opt.config.order, "n-gram order")->check(CLI::PositiveNumber);
    sample->add_option("--samples", opt.config.samples, "number of sentences to draw")
        ->check(CLI::NonNegativeNumber);
    sample->add_option("--seed", opt.config.seed, "random seed");
    sample->add_option("--max-expansions", opt.config.max_expansions,
                       "per-sentence derivation budget")
        ->check(CLI::PositiveNumber);
    sample->add_flag("--compare", opt.compare, "report deviation from the exact table");
    sample->add_option("-o,--output", opt.output_path, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(check)) return run_check(opt);
        if (app.got_subcommand(ngrams)) return run_ngrams(opt);
        if (app.got_subcommand(mix)) return run_ngrams(opt);
        return run_sample(opt);
    } catch (const InconsistentGrammarError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const GrammarError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
