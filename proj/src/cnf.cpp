#include "scfg/cnf.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "scfg/linalg.hpp"

namespace scfg {

CnfGrammar::CnfGrammar(std::vector<std::string> nonterminal_names, std::vector<std::string> word_names,
                       int start, std::vector<BinaryRule> binary, std::vector<LexicalRule> lexical,
                       std::vector<FreshOrigin> origins)
    : nt_names_(std::move(nonterminal_names)),
      word_names_(std::move(word_names)),
      start_(start),
      binary_(std::move(binary)),
      lexical_(std::move(lexical)),
      origins_(std::move(origins)) {
    by_word_.resize(word_names_.size());
    for (const auto& lex : lexical_) by_word_[static_cast<std::size_t>(lex.word)].push_back(lex);
    for (std::size_t i = 0; i < nt_names_.size(); ++i) nt_ids_[nt_names_[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < word_names_.size(); ++i) word_ids_[word_names_[i]] = static_cast<int>(i);
}

int CnfGrammar::nonterminal_index(std::string_view name) const {
    auto it = nt_ids_.find(std::string(name));
    return it == nt_ids_.end() ? -1 : it->second;
}

int CnfGrammar::word_index(std::string_view name) const {
    auto it = word_ids_.find(std::string(name));
    return it == word_ids_.end() ? -1 : it->second;
}

namespace {

struct NameRule {
    std::string lhs;
    std::vector<std::string> rhs;
    double prob;
};

std::string fresh_name(const std::string& lhs, std::size_t rule_index, std::size_t position,
                       std::set<std::string>& used) {
    std::string name = lhs + "@" + std::to_string(rule_index) + "@" + std::to_string(position);
    while (used.count(name)) name += "_";  // a user symbol may collide with the schema
    used.insert(name);
    return name;
}

}  // namespace

CnfGrammar to_cnf(const Grammar& g) {
    if (auto diagnostics = validate(g); !diagnostics.empty())
        throw GrammarError("grammar fails validation: " + diagnostics.front().message);

    std::set<std::string> used_names;
    std::set<std::string> nts;
    std::vector<std::string> nt_order;
    for (SymbolId id : g.nonterminals()) {
        nt_order.push_back(g.name(id));
        nts.insert(g.name(id));
        used_names.insert(g.name(id));
    }
    for (SymbolId id : g.terminals()) used_names.insert(g.name(id));

    std::vector<CnfGrammar::FreshOrigin> origins;
    std::vector<NameRule> norm;

    const auto& rules = g.rules();
    for (std::size_t i = 0; i < rules.size(); ++i) {
        NameRule r;
        r.lhs = g.name(rules[i].lhs);
        for (SymbolId s : rules[i].rhs) r.rhs.push_back(g.name(s));
        r.prob = rules[i].prob;

        if (r.rhs.size() >= 2) {
            // terminals inside long right-hand sides get preterminal wrappers
            for (std::size_t p = 0; p < r.rhs.size(); ++p) {
                if (nts.count(r.rhs[p])) continue;
                std::string wrapper = fresh_name(r.lhs, i, p, used_names);
                nts.insert(wrapper);
                nt_order.push_back(wrapper);
                origins.push_back({wrapper, r.lhs, static_cast<int>(i), static_cast<int>(p)});
                norm.push_back({wrapper, {r.rhs[p]}, 1.0});
                r.rhs[p] = wrapper;
            }
        }
        if (r.rhs.size() <= 2) {
            norm.push_back(std::move(r));
        } else {
            // binarize: X -> s0 s1 ... sm  becomes a right-branching chain of
            // continuations, each carrying probability 1.
            std::string cur_lhs = r.lhs;
            double cur_prob = r.prob;
            for (std::size_t p = 1; p + 1 < r.rhs.size(); ++p) {
                std::string cont = fresh_name(r.lhs, i, p, used_names);
                nts.insert(cont);
                nt_order.push_back(cont);
                origins.push_back({cont, r.lhs, static_cast<int>(i), static_cast<int>(p)});
                norm.push_back({cur_lhs, {r.rhs[p - 1], cont}, cur_prob});
                cur_lhs = cont;
                cur_prob = 1.0;
            }
            norm.push_back({cur_lhs, {r.rhs[r.rhs.size() - 2], r.rhs.back()}, cur_prob});
        }
    }

    std::map<std::string, int> nt_index;
    for (std::size_t i = 0; i < nt_order.size(); ++i) nt_index[nt_order[i]] = static_cast<int>(i);
    const int n0 = static_cast<int>(nt_order.size());

    std::vector<NameRule> nonunit;
    std::vector<NameRule> units;
    for (auto& r : norm) {
        if (r.rhs.size() == 1 && nts.count(r.rhs[0]))
            units.push_back(std::move(r));
        else
            nonunit.push_back(std::move(r));
    }

    // Fold unit productions into the non-unit rules they reach. The weight
    // from X to Y is the summed probability of all unit-rule chains X => Y,
    // i.e. the (X, Y) entry of the closure (I - U)^-1.
    std::map<std::pair<std::string, std::vector<std::string>>, double> merged;
    if (units.empty()) {
        for (auto& r : nonunit) merged[{r.lhs, r.rhs}] += r.prob;
    } else {
        DenseMatrix u(n0);
        for (const auto& r : units) u(nt_index[r.lhs], nt_index[r.rhs[0]]) += r.prob;
        auto radius = spectral_radius_estimate(u, 1e-12, 10000);
        if (radius.value >= 1.0 - 1e-9) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6g", radius.value);
            throw GrammarError(std::string("unit-production cycle diverges (unit-rule mass has spectral radius ") +
                               buf + ")");
        }
        Factorization f = lu_factor(identity_minus(u));
        DenseMatrix closure(n0);
        for (int y = 0; y < n0; ++y) {
            Vector e(static_cast<std::size_t>(n0), 0.0);
            e[static_cast<std::size_t>(y)] = 1.0;
            Vector col = f.solve(e);
            for (int x = 0; x < n0; ++x) closure(x, y) = col[static_cast<std::size_t>(x)];
        }
        for (const auto& r : nonunit) {
            int y = nt_index[r.lhs];
            for (int x = 0; x < n0; ++x) {
                double w = closure(x, y);
                if (w > 1e-14) merged[{nt_order[static_cast<std::size_t>(x)], r.rhs}] += w * r.prob;
            }
        }
    }

    // drop everything unreachable from the start symbol
    const std::string start_name = g.name(g.start());
    std::set<std::string> reachable{start_name};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [key, prob] : merged) {
            (void)prob;
            if (!reachable.count(key.first)) continue;
            for (const auto& s : key.second)
                if (nts.count(s) && reachable.insert(s).second) changed = true;
        }
    }

    std::vector<std::string> final_nts;
    std::map<std::string, int> final_index;
    for (const auto& name : nt_order)
        if (reachable.count(name)) {
            final_index[name] = static_cast<int>(final_nts.size());
            final_nts.push_back(name);
        }

    std::vector<std::string> words;
    std::map<std::string, int> word_index;
    for (SymbolId id : g.terminals()) {
        word_index[g.name(id)] = static_cast<int>(words.size());
        words.push_back(g.name(id));
    }

    std::map<std::string, double> lhs_sum;
    for (const auto& [key, prob] : merged)
        if (reachable.count(key.first)) lhs_sum[key.first] += prob;

    std::vector<BinaryRule> binary;
    std::vector<LexicalRule> lexical;
    for (const auto& [key, prob] : merged) {
        if (!reachable.count(key.first)) continue;
        double p = prob / lhs_sum[key.first];
        int lhs = final_index[key.first];
        if (key.second.size() == 1) {
            lexical.push_back({lhs, word_index.at(key.second[0]), p});
        } else {
            binary.push_back({lhs, final_index.at(key.second[0]), final_index.at(key.second[1]), p});
        }
    }

    std::vector<CnfGrammar::FreshOrigin> kept_origins;
    for (auto& o : origins)
        if (reachable.count(o.fresh)) kept_origins.push_back(std::move(o));

    return CnfGrammar(std::move(final_nts), std::move(words), final_index.at(start_name),
                      std::move(binary), std::move(lexical), std::move(kept_origins));
}

CnfGrammar mirror(const CnfGrammar& g) {
    std::vector<BinaryRule> binary = g.binary_rules();
    for (auto& r : binary) std::swap(r.left, r.right);
    std::vector<std::string> nts;
    for (int i = 0; i < g.nonterminal_count(); ++i) nts.push_back(g.nonterminal_name(i));
    return CnfGrammar(std::move(nts), g.word_names(), g.start(), std::move(binary),
                      g.lexical_rules(), g.fresh_origins());
}

std::vector<int> word_ids(const CnfGrammar& g, std::span<const std::string> words) {
    std::vector<int> out;
    out.reserve(words.size());
    for (const auto& w : words) out.push_back(g.word_index(w));
    return out;
}

}  // namespace scfg
