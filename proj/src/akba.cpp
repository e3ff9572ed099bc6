/*
   Copyright 2026 the authsim authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include "authsim/akba.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <set>

namespace authsim::akba {

void QuantizerConfig::validate() const {
    if (levels < 2) throw ConfigError("levels: quantizer needs at least 2 levels");
    if (!(v_sat > 0.0)) throw ConfigError("v_sat: saturation value must be > 0");
}

std::vector<double> QuantizerConfig::interior_thresholds() const {
    validate();
    if (levels == 2) return {0.0};
    std::vector<double> ts(levels - 1);
    const double step = 2.0 * v_sat / (levels - 2);
    for (int j = 0; j < levels - 1; ++j) ts[j] = -v_sat + j * step;
    return ts;
}

int quantize_component(double x, const QuantizerConfig& q) {
    const std::vector<double> ts = q.interior_thresholds();
    // Cell k iff tau_k < x <= tau_{k+1}; count thresholds strictly below x.
    int cell = 1;
    for (double t : ts)
        if (t < x) ++cell;
    return cell;
}

int bits_per_level(const QuantizerConfig& q) {
    int bits = 1;
    while ((1 << bits) < q.levels) ++bits;
    return bits;
}

std::vector<uint8_t> pack_word(const QuantizedWord& word, const QuantizerConfig& q) {
    const int width = bits_per_level(q);
    std::vector<uint8_t> out((word.levels.size() * width + 7) / 8, 0);
    size_t bit = 0;
    for (int level : word.levels) {
        if (level < 1 || level > q.levels) throw std::invalid_argument("pack_word: level out of range");
        const uint32_t v = static_cast<uint32_t>(level - 1);
        for (int j = width - 1; j >= 0; --j, ++bit)
            if ((v >> j) & 1) out[bit / 8] |= static_cast<uint8_t>(0x80 >> (bit % 8));
    }
    return out;
}

QuantizedWord unpack_word(std::span<const uint8_t> bytes, int components, const QuantizerConfig& q) {
    const int width = bits_per_level(q);
    if (bytes.size() * 8 < static_cast<size_t>(components) * width)
        throw std::invalid_argument("unpack_word: buffer too short");
    QuantizedWord word;
    word.levels.reserve(components);
    size_t bit = 0;
    for (int c = 0; c < components; ++c) {
        uint32_t v = 0;
        for (int j = 0; j < width; ++j, ++bit)
            v = (v << 1) | ((bytes[bit / 8] >> (7 - bit % 8)) & 1);
        word.levels.push_back(static_cast<int>(v) + 1);
    }
    return word;
}

QuantizedWord bits_from_estimate(const CVector& estimate, const QuantizerConfig& q) {
    QuantizedWord word;
    word.levels.reserve(2 * estimate.size());
    for (const Complex& v : estimate) word.levels.push_back(quantize_component(v.real(), q));
    for (const Complex& v : estimate) word.levels.push_back(quantize_component(v.imag(), q));
    return word;
}

digest::Digest derive_key(const QuantizedWord& word, const QuantizerConfig& q,
                          const digest::HashConfig& hash) {
    std::vector<uint8_t> buf;
    buf.push_back(static_cast<uint8_t>(word.levels.size()));
    buf.push_back(static_cast<uint8_t>(bits_per_level(q)));
    const std::vector<uint8_t> packed = pack_word(word, q);
    buf.insert(buf.end(), packed.begin(), packed.end());
    return digest::hash_bytes(buf, hash);
}

numerics::GaussianLinearModel build_regression_akba(std::span<const channel::Transmitter> observed,
                                                    const channel::ScenarioParams& params) {
    return pla::build_regression(observed, params);
}

namespace {

// erf(hi) - erf(lo) without cancellation in the tails.
double erf_difference(double lo, double hi) {
    if (lo >= 0.0) return std::erfc(lo) - std::erfc(hi);
    if (hi <= 0.0) return std::erfc(-hi) - std::erfc(-lo);
    return std::erf(hi) + std::erf(-lo);
}

} // namespace

double ScalarPosterior::cell_log_probability(int cell, const QuantizerConfig& q) const {
    if (!(a > 0.0)) throw NumericalError("cell_log_probability: nonpositive quadratic coefficient");
    const std::vector<double> ts = q.interior_thresholds();
    if (cell < 1 || cell > q.levels) throw std::invalid_argument("cell index out of range");
    const double lo = cell == 1 ? -std::numeric_limits<double>::infinity() : ts[cell - 2];
    const double hi = cell == q.levels ? std::numeric_limits<double>::infinity() : ts[cell - 1];

    // int exp(-(a h^2 + b h)) dh over (lo, hi]
    //   = e^(b^2/4a) sqrt(pi/a) [erf(sqrt(a) h + b/(2 sqrt(a)))]/2
    const double sa = std::sqrt(a);
    const double shift = b / (2.0 * sa);
    const double ylo = std::isinf(lo) ? lo : sa * lo + shift;
    const double yhi = std::isinf(hi) ? hi : sa * hi + shift;
    const double diff = erf_difference(ylo, yhi);
    return b * b / (4.0 * a) + 0.5 * std::log(std::numbers::pi / a) - std::numbers::ln2 +
           std::log(diff);
}

int ScalarPosterior::argmax_cell(const QuantizerConfig& q) const {
    int best = 1;
    double best_lp = cell_log_probability(1, q);
    for (int k = 2; k <= q.levels; ++k) {
        const double lp = cell_log_probability(k, q);
        if (lp > best_lp) {
            best = k;
            best_lp = lp;
        }
    }
    return best;
}

PosteriorBuilder::PosteriorBuilder(const numerics::GaussianLinearModel& model) {
    for (const Complex& c : model.w)
        if (c.imag() != 0.0)
            throw std::invalid_argument("PosteriorBuilder: regression coefficients must be real");
    const CholeskyFactor chol(model.k.entries());
    const CVector s = chol.solve(model.w);
    kinv_w_.reserve(s.size());
    double quad = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
        kinv_w_.push_back(s[i].real());
        quad += model.w[i].real() * s[i].real();
    }
    a_ = 1.0 + quad; // the 1 is the N(0, 1/2) prior on each real component
    if (!(a_ > 0.0)) throw NumericalError("PosteriorBuilder: nonpositive posterior precision");
}

ScalarPosterior PosteriorBuilder::posterior(std::span<const Complex> g_stack, ComponentPart part) const {
    if (g_stack.size() != kinv_w_.size())
        throw std::invalid_argument("posterior: stack length differs from model dimension");
    double b = 0.0;
    for (size_t i = 0; i < g_stack.size(); ++i) {
        const double x = part == ComponentPart::Real ? g_stack[i].real() : g_stack[i].imag();
        b += kinv_w_[i] * x;
    }
    return {a_, -2.0 * b};
}

double cell_log_posterior(int cell, const numerics::GaussianLinearModel& model,
                          std::span<const Complex> g_stack, ComponentPart part,
                          const QuantizerConfig& q) {
    return PosteriorBuilder(model).posterior(g_stack, part).cell_log_probability(cell, q);
}

QuantizedWord optimal_attack(const pla::EveObservationStack& stack, const QuantizerConfig& q) {
    const PosteriorBuilder builder(stack.model);
    QuantizedWord word;
    word.levels.reserve(2 * stack.per_entry.size());
    for (const CVector& g : stack.per_entry)
        word.levels.push_back(builder.posterior(g, ComponentPart::Real).argmax_cell(q));
    for (const CVector& g : stack.per_entry)
        word.levels.push_back(builder.posterior(g, ComponentPart::Imag).argmax_cell(q));
    return word;
}

QuantizedWord naive_attack(const pla::EveObservationStack& stack, const QuantizerConfig& q) {
    const numerics::GlsSolver solver(stack.model);
    CVector point(stack.per_entry.size());
    for (size_t i = 0; i < stack.per_entry.size(); ++i) point[i] = solver.estimate(stack.per_entry[i]);
    return bits_from_estimate(point, q);
}

std::vector<ScoredWord> enumerate_attacks(const pla::EveObservationStack& stack,
                                          const QuantizerConfig& q, uint64_t max_words) {
    q.validate();
    if (max_words < 1) throw std::invalid_argument("enumerate_attacks: max_words must be >= 1");
    const size_t components = 2 * stack.per_entry.size();

    // Per-component cells sorted by (log prob desc, cell asc); rank 0 is the
    // componentwise argmax.
    const PosteriorBuilder builder(stack.model);
    std::vector<std::vector<std::pair<double, int>>> ranked(components);
    for (size_t c = 0; c < components; ++c) {
        const bool real_part = c < stack.per_entry.size();
        const size_t entry = real_part ? c : c - stack.per_entry.size();
        const ScalarPosterior post = builder.posterior(
            stack.per_entry[entry], real_part ? ComponentPart::Real : ComponentPart::Imag);
        auto& cells = ranked[c];
        cells.reserve(q.levels);
        for (int k = 1; k <= q.levels; ++k) cells.emplace_back(post.cell_log_probability(k, q), k);
        std::sort(cells.begin(), cells.end(), [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first > y.first;
            return x.second < y.second;
        });
    }

    double feasible = 1.0;
    for (size_t c = 0; c < components; ++c) feasible *= q.levels;
    const uint64_t limit =
        feasible < 1e18 ? std::min<uint64_t>(max_words, static_cast<uint64_t>(feasible)) : max_words;

    struct Node {
        double score;
        std::vector<int> ranks;
        std::vector<int> levels;
    };
    auto worse = [](const Node& x, const Node& y) {
        if (x.score != y.score) return x.score < y.score;
        return x.levels > y.levels; // equal scores: lexicographically smaller word first
    };
    auto materialize = [&](const std::vector<int>& ranks) {
        Node node;
        node.ranks = ranks;
        node.score = 0.0;
        node.levels.reserve(components);
        for (size_t c = 0; c < components; ++c) {
            node.score += ranked[c][ranks[c]].first;
            node.levels.push_back(ranked[c][ranks[c]].second);
        }
        return node;
    };

    std::priority_queue<Node, std::vector<Node>, decltype(worse)> frontier(worse);
    std::set<std::vector<int>> seen;
    std::vector<int> root(components, 0);
    frontier.push(materialize(root));
    seen.insert(root);

    std::vector<ScoredWord> out;
    out.reserve(limit);
    while (!frontier.empty() && out.size() < limit) {
        Node best = frontier.top();
        frontier.pop();
        out.push_back({QuantizedWord{best.levels}, best.score});
        for (size_t c = 0; c < components; ++c) {
            if (best.ranks[c] + 1 >= q.levels) continue;
            std::vector<int> next = best.ranks;
            ++next[c];
            if (seen.insert(next).second) frontier.push(materialize(next));
        }
    }
    return out;
}

McEstimate md_probability_mc(const channel::ScenarioParams& params, const QuantizerConfig& q,
                             uint64_t trials, int attack_depth) {
    q.validate();
    if (trials < 1) throw std::invalid_argument("md_probability_mc: trials must be >= 1");
    if (attack_depth < 1) throw std::invalid_argument("md_probability_mc: attack_depth must be >= 1");
    if (params.schedule.length() < 2 || params.schedule.tx_at(1) != channel::Transmitter::Alice)
        throw ConfigError("schedule: Alice must transmit at slot 1 for the key extraction");

    uint64_t events = 0;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        const channel::ChannelTrace trace = channel::generate_trace(params, trial);
        const QuantizedWord bob = bits_from_estimate(trace.bob_estimate(1), q);
        const pla::EveObservationStack stack = pla::build_observation_stack(trace, params, 2);
        if (attack_depth == 1) {
            if (optimal_attack(stack, q) == bob) ++events;
        } else {
            for (const ScoredWord& guess : enumerate_attacks(stack, q, attack_depth)) {
                if (guess.word == bob) {
                    ++events;
                    break;
                }
            }
        }
    }
    return make_mc_estimate(events, trials);
}

} // namespace authsim::akba
