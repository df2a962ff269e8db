#pragma once

#include <span>
#include <string>
#include <vector>

#include "scfg/cnf.hpp"

namespace scfg {

// Inside probabilities for every span of a word sequence:
// value(start, len, nt) = P(nt derives exactly words[start, start+len)).
class InsideChart {
public:
    InsideChart(int words, int nonterminals)
        : words_(words),
          nonterminals_(nonterminals),
          cell_(static_cast<std::size_t>(words) * words * nonterminals, 0.0) {}

    double value(int start, int len, int nt) const { return cell_[index(start, len, nt)]; }
    double& at(int start, int len, int nt) { return cell_[index(start, len, nt)]; }
    int length() const { return words_; }

private:
    std::size_t index(int start, int len, int nt) const {
        return (static_cast<std::size_t>(len - 1) * words_ + start) * nonterminals_ + nt;
    }
    int words_;
    int nonterminals_;
    std::vector<double> cell_;
};

// Bottom-up chart fill; out-of-vocabulary ids (-1) simply contribute zero.
InsideChart inside_chart(const CnfGrammar& g, std::span<const int> words);

// Probability that the start symbol derives exactly this sentence.
// Unknown words give probability 0; the empty sentence has probability 0.
double sentence_inside(const CnfGrammar& g, std::span<const int> words);
double sentence_inside(const CnfGrammar& g, std::span<const std::string> sentence);

}  // namespace scfg
