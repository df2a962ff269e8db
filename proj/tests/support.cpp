#include "support.hpp"

#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

namespace oracle {

const char* kToyGrammarText = R"(
S   -> NP VP    [1.0]
NP  -> N        [0.4]
NP  -> Det N    [0.6]
VP  -> V        [0.8]
VP  -> V NP     [0.2]
Det -> the      [0.4]
Det -> a        [0.6]
N   -> book     [1.0]
V   -> close    [0.3]
V   -> open     [0.7]
)";

std::string self_recursive_text(double p) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "S -> x [%.17g]\nS -> S S [%.17g]\n", p, 1.0 - p);
    return buf;
}

namespace {

struct MiniRule {
    Sentence rhs;
    double prob;
};

using MiniGrammar = std::map<std::string, std::vector<MiniRule>>;

MiniGrammar parse_mini(const std::string& text, std::string* first_lhs) {
    MiniGrammar rules;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (tokens.size() < 3 || tokens[1] != "->") throw std::runtime_error("oracle: bad rule line");
        std::string& last = tokens.back();
        if (last.size() < 3 || last.front() != '[' || last.back() != ']')
            throw std::runtime_error("oracle: missing probability");
        double prob = std::strtod(last.substr(1, last.size() - 2).c_str(), nullptr);
        if (prob <= 0.0) continue;
        Sentence rhs(tokens.begin() + 2, tokens.end() - 1);
        if (first_lhs && first_lhs->empty()) *first_lhs = tokens[0];
        rules[tokens[0]].push_back({std::move(rhs), prob});
    }
    return rules;
}

void expand(const MiniGrammar& rules, Sentence form, double prob, int steps_left, Language& out) {
    std::size_t nt_pos = form.size();
    for (std::size_t i = 0; i < form.size(); ++i)
        if (rules.count(form[i])) {
            nt_pos = i;
            break;
        }
    if (nt_pos == form.size()) {
        out[form] += prob;
        return;
    }
    if (steps_left <= 0) throw std::runtime_error("oracle: language is not finite within the step budget");
    const auto& options = rules.at(form[nt_pos]);
    for (const auto& rule : options) {
        Sentence next;
        next.reserve(form.size() - 1 + rule.rhs.size());
        next.insert(next.end(), form.begin(), form.begin() + static_cast<std::ptrdiff_t>(nt_pos));
        next.insert(next.end(), rule.rhs.begin(), rule.rhs.end());
        next.insert(next.end(), form.begin() + static_cast<std::ptrdiff_t>(nt_pos) + 1, form.end());
        expand(rules, std::move(next), prob * rule.prob, steps_left - 1, out);
    }
}

}  // namespace

Language enumerate_language(const std::string& grammar_text, const std::string& start, int max_steps) {
    std::string first_lhs;
    MiniGrammar rules = parse_mini(grammar_text, &first_lhs);
    std::string s = start.empty() ? first_lhs : start;
    Language out;
    expand(rules, {s}, 1.0, max_steps, out);
    return out;
}

double total_mass(const Language& language) {
    double total = 0.0;
    for (const auto& [sentence, p] : language) {
        (void)sentence;
        total += p;
    }
    return total;
}

double expected_occurrences(const Language& language, const Sentence& words) {
    double total = 0.0;
    for (const auto& [sentence, p] : language) {
        if (sentence.size() < words.size()) continue;
        for (std::size_t i = 0; i + words.size() <= sentence.size(); ++i) {
            bool match = true;
            for (std::size_t j = 0; j < words.size(); ++j)
                if (sentence[i + j] != words[j]) {
                    match = false;
                    break;
                }
            if (match) total += p;
        }
    }
    return total;
}

double prefix_mass(const Language& language, const Sentence& words) {
    double total = 0.0;
    for (const auto& [sentence, p] : language) {
        if (sentence.size() < words.size()) continue;
        bool match = true;
        for (std::size_t j = 0; j < words.size(); ++j)
            if (sentence[j] != words[j]) {
                match = false;
                break;
            }
        if (match) total += p;
    }
    return total;
}

double suffix_mass(const Language& language, const Sentence& words) {
    double total = 0.0;
    for (const auto& [sentence, p] : language) {
        if (sentence.size() < words.size()) continue;
        std::size_t off = sentence.size() - words.size();
        bool match = true;
        for (std::size_t j = 0; j < words.size(); ++j)
            if (sentence[off + j] != words[j]) {
                match = false;
                break;
            }
        if (match) total += p;
    }
    return total;
}

double exact_mass(const Language& language, const Sentence& words) {
    auto it = language.find(words);
    return it == language.end() ? 0.0 : it->second;
}

WindowTables windowed_counts(const Language& language, int order) {
    WindowTables tables;
    for (const auto& [sentence, p] : language) {
        Sentence padded;
        if (order > 1) padded.push_back("<s>");
        padded.insert(padded.end(), sentence.begin(), sentence.end());
        padded.push_back("</s>");
        if (static_cast<int>(padded.size()) < order) continue;
        for (std::size_t i = 0; i + static_cast<std::size_t>(order) <= padded.size(); ++i) {
            Sentence window(padded.begin() + static_cast<std::ptrdiff_t>(i),
                            padded.begin() + static_cast<std::ptrdiff_t>(i) + order);
            Sentence context(window.begin(), window.end() - 1);
            tables.events[window] += p;
            tables.contexts[context] += p;
        }
    }
    return tables;
}

std::string random_grammar_text(int nonterminals, int words, int max_binary, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> nt_pick(0, nonterminals - 1);
    std::uniform_int_distribution<int> count_pick(1, max_binary);
    std::ostringstream out;
    char buf[128];
    for (int i = 0; i < nonterminals; ++i) {
        int binary = count_pick(rng);
        double share = 0.4 / binary;
        for (int r = 0; r < binary; ++r) {
            int left = r == 0 ? (i + 1) % nonterminals : nt_pick(rng);
            int right = r == 0 ? (i + 2) % nonterminals : nt_pick(rng);
            std::snprintf(buf, sizeof buf, "A%d -> A%d A%d [%.17g]\n", i, left, right, share);
            out << buf;
        }
        // Words are assigned round-robin so that every one of the `words`
        // terminals is reachable whenever 3 * nonterminals >= words.
        for (int r = 0; r < 3; ++r) {
            std::snprintf(buf, sizeof buf, "A%d -> w%d [0.2]\n", i, (3 * i + r) % words);
            out << buf;
        }
    }
    return out.str();
}

ArpaModel parse_arpa(const std::string& text) {
    ArpaModel model;
    std::istringstream in(text);
    std::string line;
    enum class State { preamble, header, body } state = State::preamble;
    int order = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "\\data\\") {
            state = State::header;
            continue;
        }
        if (line == "\\end\\") break;
        if (line.size() > 2 && line.front() == '\\' && line.back() == ':') {
            order = std::atoi(line.c_str() + 1);
            if (order < 1) throw std::runtime_error("oracle: bad section header " + line);
            state = State::body;
            continue;
        }
        if (state == State::header) {
            int k = 0;
            long count = 0;
            if (std::sscanf(line.c_str(), "ngram %d=%ld", &k, &count) != 2)
                throw std::runtime_error("oracle: bad header line " + line);
            model.declared[k] = count;
            continue;
        }
        if (state != State::body) throw std::runtime_error("oracle: unexpected line " + line);
        std::vector<std::string> fields;
        std::size_t begin = 0;
        while (begin <= line.size()) {
            std::size_t tab = line.find('\t', begin);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(begin));
                break;
            }
            fields.push_back(line.substr(begin, tab - begin));
            begin = tab + 1;
        }
        if (fields.size() != 2 && fields.size() != 3)
            throw std::runtime_error("oracle: bad entry line " + line);
        double logp = std::strtod(fields[0].c_str(), nullptr);
        Sentence tokens;
        std::istringstream ts(fields[1]);
        std::string tok;
        while (ts >> tok) tokens.push_back(tok);
        if (static_cast<int>(tokens.size()) != order)
            throw std::runtime_error("oracle: entry arity mismatch in " + line);
        model.logprob[order][tokens] = logp;
        if (fields.size() == 3) model.backoff[order][tokens] = std::strtod(fields[2].c_str(), nullptr);
    }
    return model;
}

}  // namespace oracle
