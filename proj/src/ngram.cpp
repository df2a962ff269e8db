#include "scfg/ngram.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <set>

#include "scfg/inside.hpp"

namespace scfg {

double NGramTable::prob(const Tokens& tokens) const {
    int k = static_cast<int>(tokens.size());
    if (k < 1 || k > order_) return 0.0;
    const auto& section = sections_[static_cast<std::size_t>(k)];
    auto it = section.find(tokens);
    return it == section.end() ? 0.0 : it->second.prob;
}

double NGramTable::count(const Tokens& tokens) const {
    int k = static_cast<int>(tokens.size());
    if (k < 1 || k > order_) return 0.0;
    const auto& section = sections_[static_cast<std::size_t>(k)];
    auto it = section.find(tokens);
    return it == section.end() ? 0.0 : it->second.count;
}

namespace {

using Tokens = NGramTable::Tokens;

Tokens to_tokens(const CnfGrammar& g, const std::vector<int>& words) {
    Tokens out;
    out.reserve(words.size());
    for (int w : words) out.push_back(g.word_name(w));
    return out;
}

std::vector<int> extend(const std::vector<int>& words, int w) {
    std::vector<int> out = words;
    out.push_back(w);
    return out;
}

}  // namespace

NGramTable build_table(const CnfGrammar& g, int order, ExpectationEngine& engine,
                       SubstringProbs& substrings, double prune) {
    if (order < 1) throw std::invalid_argument("n-gram order must be >= 1");

    NGramTable t;
    t.order_ = order;
    t.sections_.resize(static_cast<std::size_t>(order) + 1);
    t.context_counts_.resize(static_cast<std::size_t>(order) + 1);
    t.vocabulary_ = g.word_names();

    const int start = g.start();
    const int vocab = g.word_count();
    const std::string start_tok(NGramTable::kSentenceStart);
    const std::string end_tok(NGramTable::kSentenceEnd);

    // expected occurrences per sentence of interior word strings, by length
    std::vector<std::map<std::vector<int>, double>> interior(static_cast<std::size_t>(order) + 1);
    for (int w = 0; w < vocab; ++w) {
        std::vector<int> u{w};
        double c = engine.language_expectation(u);
        if (c > prune) interior[1][u] = c;
    }
    for (int k = 2; k <= order; ++k) {
        for (const auto& [u, cu] : interior[static_cast<std::size_t>(k - 1)]) {
            (void)cu;
            for (int w = 0; w < vocab; ++w) {
                std::vector<int> uw = extend(u, w);
                double c = engine.language_expectation(uw);
                if (c > prune) interior[static_cast<std::size_t>(k)][std::move(uw)] = c;
            }
        }
    }

    // sentence-initial strings v with P(sentence begins with v) above prune,
    // needed as start-marker contexts for levels 3..order
    std::vector<std::map<std::vector<int>, double>> viable(std::max(order - 1, 1));
    if (order >= 3) {
        for (int w = 0; w < vocab; ++w) {
            std::vector<int> v{w};
            double p = substrings.prefix_probs(v)[static_cast<std::size_t>(start)];
            if (p > prune) viable[1][v] = p;
        }
        for (int j = 2; j <= order - 2; ++j) {
            for (const auto& [v, pv] : viable[static_cast<std::size_t>(j - 1)]) {
                (void)pv;
                for (int w = 0; w < vocab; ++w) {
                    std::vector<int> vw = extend(v, w);
                    double p = substrings.prefix_probs(vw)[static_cast<std::size_t>(start)];
                    if (p > prune) viable[static_cast<std::size_t>(j)][std::move(vw)] = p;
                }
            }
        }
    }

    // unigram section: the empty context emits each word or the end marker;
    // its count mass is the expected sentence length plus the one end event
    {
        double total = 1.0;
        for (const auto& [u, cu] : interior[1]) {
            (void)u;
            total += cu;
        }
        t.context_counts_[1][Tokens{}] = total;
        for (const auto& [u, cu] : interior[1])
            t.sections_[1][to_tokens(g, u)] = {cu, cu / total};
        t.sections_[1][Tokens{end_tok}] = {1.0, 1.0 / total};
    }

    for (int k = 2; k <= order; ++k) {
        auto& section = t.sections_[static_cast<std::size_t>(k)];
        auto& contexts = t.context_counts_[static_cast<std::size_t>(k)];

        // interior contexts: u of k-1 words with expectation above prune
        for (const auto& [u, cu] : interior[static_cast<std::size_t>(k - 1)]) {
            Tokens ctx = to_tokens(g, u);
            bool any = false;
            for (int w = 0; w < vocab; ++w) {
                auto it = interior[static_cast<std::size_t>(k)].find(extend(u, w));
                if (it == interior[static_cast<std::size_t>(k)].end()) continue;
                Tokens tokens = ctx;
                tokens.push_back(g.word_name(w));
                section[std::move(tokens)] = {it->second, it->second / cu};
                any = true;
            }
            double ends = substrings.suffix_probs(u)[static_cast<std::size_t>(start)];
            if (ends > prune) {
                Tokens tokens = ctx;
                tokens.push_back(end_tok);
                section[std::move(tokens)] = {ends, ends / cu};
                any = true;
            }
            if (any) contexts[std::move(ctx)] = cu;
        }

        // start-marker contexts: <s> v with |v| = k-2
        std::map<std::vector<int>, double> start_contexts;
        if (k == 2)
            start_contexts[{}] = 1.0;  // every sentence begins exactly once
        else
            start_contexts = viable[static_cast<std::size_t>(k - 2)];
        for (const auto& [v, pv] : start_contexts) {
            Tokens ctx{std::string(start_tok)};
            for (int w : v) ctx.push_back(g.word_name(w));
            bool any = false;
            for (int w = 0; w < vocab; ++w) {
                std::vector<int> vw = extend(v, w);
                double p = substrings.prefix_probs(vw)[static_cast<std::size_t>(start)];
                if (p <= prune) continue;
                Tokens tokens = ctx;
                tokens.push_back(g.word_name(w));
                section[std::move(tokens)] = {p, p / pv};
                any = true;
            }
            if (!v.empty()) {
                // the sentence may also end right here: it must equal v exactly
                double exact = sentence_inside(g, std::span<const int>(v));
                if (exact > prune) {
                    Tokens tokens = ctx;
                    tokens.push_back(end_tok);
                    section[std::move(tokens)] = {exact, exact / pv};
                    any = true;
                }
            }
            if (any) contexts[std::move(ctx)] = pv;
        }
    }
    return t;
}

NGramTable merge_counts(const NGramTable& t, const CountMergeSpec& spec,
                        std::vector<std::string>* warnings) {
    if (spec.pseudo_mass < 0.0) throw std::invalid_argument("pseudo mass must be non-negative");
    const int n = t.order();

    NGramTable out;
    out.order_ = t.order_;
    out.sections_ = t.sections_;
    out.context_counts_ = t.context_counts_;
    out.vocabulary_ = t.vocabulary_;

    // every model event stays a candidate even at pseudo-mass zero, so that
    // contexts losing all their mass are reported rather than silently gone
    std::map<Tokens, double> counts;
    for (const auto& [tokens, entry] : t.sections_[static_cast<std::size_t>(n)])
        counts[tokens] = spec.pseudo_mass * entry.count;
    std::set<std::string> vocab(out.vocabulary_.begin(), out.vocabulary_.end());
    for (const auto& [tokens, c] : spec.corpus_counts) {
        if (static_cast<int>(tokens.size()) != n)
            throw GrammarError("corpus n-gram has " + std::to_string(tokens.size()) +
                               " tokens but the table order is " + std::to_string(n));
        if (!(c >= 0.0)) throw GrammarError("corpus count must be non-negative");
        counts[tokens] += c;
        for (const auto& tok : tokens)
            if (tok != NGramTable::kSentenceStart && tok != NGramTable::kSentenceEnd) vocab.insert(tok);
    }
    out.vocabulary_.assign(vocab.begin(), vocab.end());

    std::map<Tokens, double> totals;
    for (const auto& [tokens, c] : counts) {
        Tokens ctx(tokens.begin(), tokens.end() - 1);
        totals[ctx] += c;
    }

    auto& section = out.sections_[static_cast<std::size_t>(n)];
    auto& contexts = out.context_counts_[static_cast<std::size_t>(n)];
    section.clear();
    contexts.clear();
    for (const auto& [ctx, total] : totals) {
        if (total > 0.0) {
            contexts[ctx] = total;
            continue;
        }
        if (warnings) {
            std::string joined;
            for (const auto& tok : ctx) {
                if (!joined.empty()) joined += ' ';
                joined += tok;
            }
            warnings->push_back("context `" + joined + "` has zero merged mass; dropped");
        }
    }
    for (const auto& [tokens, c] : counts) {
        if (c <= 0.0) continue;
        Tokens ctx(tokens.begin(), tokens.end() - 1);
        section[tokens] = {c, c / totals[ctx]};
    }
    return out;
}

namespace {

std::string format_log10(double prob) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.7f", std::log10(prob));
    return buf;
}

}  // namespace

void export_arpa(const NGramTable& t, std::ostream& out) {
    const int n = t.order();

    // unigram listing: real entries plus -99 placeholders for tokens that
    // only occur inside higher-order n-grams (the start marker, and corpus
    // words introduced by merging)
    std::map<std::string, std::optional<double>> unigrams;
    for (const auto& [tokens, entry] : t.ngrams(1)) unigrams[tokens[0]] = entry.prob;
    unigrams.emplace(std::string(NGramTable::kSentenceStart), std::nullopt);
    for (int k = 2; k <= n; ++k)
        for (const auto& [tokens, entry] : t.ngrams(k)) {
            (void)entry;
            for (const auto& tok : tokens) unigrams.emplace(tok, std::nullopt);
        }

    out << "\\data\\\n";
    out << "ngram 1=" << unigrams.size() << "\n";
    for (int k = 2; k <= n; ++k) out << "ngram " << k << "=" << t.ngrams(k).size() << "\n";
    out << "\n";

    out << "\\1-grams:\n";
    for (const auto& [token, prob] : unigrams) {
        out << (prob ? format_log10(*prob) : std::string("-99")) << "\t" << token;
        if (n > 1) out << "\t0.0000000";
        out << "\n";
    }
    for (int k = 2; k <= n; ++k) {
        out << "\n\\" << k << "-grams:\n";
        for (const auto& [tokens, entry] : t.ngrams(k)) {
            out << format_log10(entry.prob) << "\t";
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                if (i) out << ' ';
                out << tokens[i];
            }
            if (k < n) out << "\t0.0000000";
            out << "\n";
        }
    }
    out << "\n\\end\\\n";
}

std::map<NGramTable::Tokens, double> parse_counts(std::istream& in) {
    std::map<Tokens, double> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw GrammarError("count line " + std::to_string(line_no) + ": expected `count<TAB>w1 w2 ...`",
                               line_no);
        std::string count_text = line.substr(0, tab);
        char* end = nullptr;
        double count = std::strtod(count_text.c_str(), &end);
        if (end != count_text.c_str() + count_text.size() || count_text.empty() || !(count >= 0.0) ||
            !std::isfinite(count))
            throw GrammarError("count line " + std::to_string(line_no) + ": invalid count `" + count_text + "`",
                               line_no);
        Tokens tokens;
        std::size_t i = tab + 1;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t begin = i;
            while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            if (i > begin) tokens.push_back(line.substr(begin, i - begin));
        }
        if (tokens.empty())
            throw GrammarError("count line " + std::to_string(line_no) + ": no words after count", line_no);
        out[tokens] += count;
    }
    return out;
}

}  // namespace scfg
