#include "scfg/sample.hpp"

#include <cmath>
#include <stdexcept>

#include "scfg/ngram.hpp"

namespace scfg {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr long kChunkSize = 8192;

}  // namespace

RandomStream RandomStream::substream(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(splitmix64(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1))));
}

DerivationSampler::DerivationSampler(const CnfGrammar& g) : grammar_(&g) {
    choices_.resize(static_cast<std::size_t>(g.nonterminal_count()));
    std::vector<double> mass(choices_.size(), 0.0);
    for (const auto& r : g.binary_rules()) {
        mass[static_cast<std::size_t>(r.lhs)] += r.prob;
        choices_[static_cast<std::size_t>(r.lhs)].push_back(
            {mass[static_cast<std::size_t>(r.lhs)], r.left, r.right, -1});
    }
    for (const auto& r : g.lexical_rules()) {
        mass[static_cast<std::size_t>(r.lhs)] += r.prob;
        choices_[static_cast<std::size_t>(r.lhs)].push_back(
            {mass[static_cast<std::size_t>(r.lhs)], -1, -1, r.word});
    }
    // normalize the cumulative tables so the last slot always covers 1.0
    for (std::size_t nt = 0; nt < choices_.size(); ++nt) {
        if (choices_[nt].empty()) continue;
        double total = mass[nt];
        if (total <= 0.0) throw std::invalid_argument("nonterminal has no probability mass");
        for (auto& c : choices_[nt]) c.cumulative /= total;
        choices_[nt].back().cumulative = 1.0;
    }
}

std::optional<std::vector<int>> DerivationSampler::sample_sentence(RandomStream& rng,
                                                                   int max_expansions) const {
    std::vector<int> stack{grammar_->start()};  // nonterminals still to expand, top = leftmost
    std::vector<int> words;
    int expansions = 0;
    while (!stack.empty()) {
        if (expansions >= max_expansions) return std::nullopt;
        ++expansions;
        int nt = stack.back();
        stack.pop_back();
        const auto& table = choices_[static_cast<std::size_t>(nt)];
        if (table.empty()) throw std::logic_error("expanding a nonterminal with no rules");
        double u = rng.uniform();
        std::size_t lo = 0, hi = table.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (table[mid].cumulative > u)
                hi = mid;
            else
                lo = mid + 1;
        }
        const Choice& c = table[lo];
        if (c.word >= 0) {
            words.push_back(c.word);
        } else {
            stack.push_back(c.right);  // push right first so the left child expands next
            stack.push_back(c.left);
        }
    }
    return words;
}

SampleBatch sample_batch(const CnfGrammar& g, long count, std::uint64_t seed, int max_expansions) {
    if (count < 0) throw std::invalid_argument("sample count must be non-negative");
    DerivationSampler sampler(g);
    SampleBatch batch;
    batch.seed = seed;
    batch.requested = count;
    batch.sentences.reserve(static_cast<std::size_t>(count));
    long done = 0;
    for (std::uint64_t chunk = 0; done < count; ++chunk) {
        RandomStream rng = RandomStream::substream(seed, chunk);
        long quota = std::min(kChunkSize, count - done);
        for (long i = 0; i < quota; ++i, ++done) {
            auto sentence = sampler.sample_sentence(rng, max_expansions);
            if (sentence)
                batch.sentences.push_back(std::move(*sentence));
            else
                ++batch.truncated;
        }
    }
    return batch;
}

std::map<std::vector<std::string>, EmpiricalEntry> empirical_ngrams(const SampleBatch& batch,
                                                                    const CnfGrammar& g, int order) {
    if (order < 1) throw std::invalid_argument("n-gram order must be >= 1");
    const std::string start_tok(NGramTable::kSentenceStart);
    const std::string end_tok(NGramTable::kSentenceEnd);

    std::map<std::vector<std::string>, double> counts;
    std::map<std::vector<std::string>, double> contexts;
    for (const auto& sentence : batch.sentences) {
        std::vector<std::string> padded;
        padded.reserve(sentence.size() + 2);
        if (order > 1) padded.push_back(start_tok);
        for (int w : sentence) padded.push_back(g.word_name(w));
        padded.push_back(end_tok);
        if (static_cast<int>(padded.size()) < order) continue;
        for (std::size_t i = 0; i + static_cast<std::size_t>(order) <= padded.size(); ++i) {
            std::vector<std::string> window(padded.begin() + static_cast<std::ptrdiff_t>(i),
                                            padded.begin() + static_cast<std::ptrdiff_t>(i) + order);
            std::vector<std::string> ctx(window.begin(), window.end() - 1);
            counts[std::move(window)] += 1.0;
            contexts[std::move(ctx)] += 1.0;
        }
    }

    std::map<std::vector<std::string>, EmpiricalEntry> out;
    for (const auto& [window, c] : counts) {
        std::vector<std::string> ctx(window.begin(), window.end() - 1);
        double total = contexts[ctx];
        double p = c / total;
        out[window] = {c, p, std::sqrt(std::max(0.0, p * (1.0 - p)) / total)};
    }
    return out;
}

}  // namespace scfg
