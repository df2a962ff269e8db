#include "scfg/inside.hpp"

namespace scfg {

InsideChart inside_chart(const CnfGrammar& g, std::span<const int> words) {
    const int n = static_cast<int>(words.size());
    InsideChart chart(n, g.nonterminal_count());
    for (int i = 0; i < n; ++i) {
        if (words[static_cast<std::size_t>(i)] < 0) continue;
        for (const auto& lex : g.lexical_rules_for(words[static_cast<std::size_t>(i)]))
            chart.at(i, 1, lex.lhs) += lex.prob;
    }
    for (int len = 2; len <= n; ++len) {
        for (int start = 0; start + len <= n; ++start) {
            for (int split = 1; split < len; ++split) {
                for (const auto& rule : g.binary_rules()) {
                    double lv = chart.value(start, split, rule.left);
                    if (lv == 0.0) continue;
                    double rv = chart.value(start + split, len - split, rule.right);
                    if (rv == 0.0) continue;
                    chart.at(start, len, rule.lhs) += rule.prob * lv * rv;
                }
            }
        }
    }
    return chart;
}

double sentence_inside(const CnfGrammar& g, std::span<const int> words) {
    if (words.empty()) return 0.0;
    InsideChart chart = inside_chart(g, words);
    return chart.value(0, static_cast<int>(words.size()), g.start());
}

double sentence_inside(const CnfGrammar& g, std::span<const std::string> sentence) {
    std::vector<int> ids = word_ids(g, sentence);
    return sentence_inside(g, std::span<const int>(ids));
}

}  // namespace scfg
