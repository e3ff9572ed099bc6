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
#include "authsim/skba.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <queue>
#include <set>

#include "authsim/pla.hpp"

namespace authsim::skba {

void CodebookConfig::validate() const {
    if (kind == CodebookKind::RandomGaussian) {
        if (size < 2) throw ConfigError("codebook size: explicit codebooks need at least 2 words");
        if (!(scale > 0.0)) throw ConfigError("codebook scale: must be > 0");
    } else {
        if (!(step > 0.0)) throw ConfigError("codebook step: lattice spacing must be > 0");
    }
}

Codebook Codebook::make(int entries, const CodebookConfig& config) {
    config.validate();
    return config.kind == CodebookKind::RandomGaussian
               ? random_gaussian(entries, config.size, config.scale, config.seed)
               : lattice(entries, config.step);
}

Codebook Codebook::random_gaussian(int entries, uint64_t size, double scale, uint64_t seed) {
    if (size < 2) throw ConfigError("codebook size: explicit codebooks need at least 2 words");
    Codebook cb;
    cb.kind_ = CodebookKind::RandomGaussian;
    cb.entries_ = entries;
    cb.scale_ = scale;
    RngStream rng(seed, 0, purpose::kCodebook);
    cb.words_.reserve(size);
    std::set<std::vector<uint8_t>> distinct;
    for (uint64_t i = 0; i < size; ++i) {
        CVector w(entries);
        for (auto& v : w) v = scale * rng.cnormal();
        std::vector<uint8_t> bytes(w.size() * sizeof(Complex));
        std::memcpy(bytes.data(), w.data(), bytes.size());
        if (!distinct.insert(std::move(bytes)).second)
            throw NumericalError("codebook: duplicate codeword drawn");
        cb.words_.push_back(std::move(w));
    }
    return cb;
}

Codebook Codebook::lattice(int entries, double step) {
    if (!(step > 0.0)) throw ConfigError("codebook step: lattice spacing must be > 0");
    Codebook cb;
    cb.kind_ = CodebookKind::Lattice;
    cb.entries_ = entries;
    cb.step_ = step;
    return cb;
}

namespace {

double distance2(const CVector& a, const CVector& b) {
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
    return acc;
}

// Nearest multiple of step; halfway points round toward the lower coordinate.
int64_t round_component(double x, double step) {
    return static_cast<int64_t>(std::ceil(x / step - 0.5));
}

// r-th closest integer to x (r = 0 is the nearest); candidates alternate
// around the rounded value, lower coordinate first on exact ties.
int64_t ranked_component(double x, double step, int r) {
    const int64_t m0 = round_component(x, step);
    if (r == 0) return m0;
    const double frac = x / step - static_cast<double>(m0);
    const int side = frac > 0.0 ? 1 : -1; // frac == 0: lower first
    const int k = (r + 1) / 2;
    return r % 2 == 1 ? m0 + side * k : m0 - side * k;
}

} // namespace

DecodeResult Codebook::nearest(const CVector& v) const {
    if (static_cast<int>(v.size()) != entries_)
        throw std::invalid_argument("nearest: vector length differs from codeword length");
    if (kind_ == CodebookKind::Lattice) {
        DecodeResult r;
        r.index.is_lattice = true;
        r.codeword.resize(v.size());
        r.index.coords.reserve(2 * v.size());
        for (size_t i = 0; i < v.size(); ++i) {
            const int64_t re = round_component(v[i].real(), step_);
            const int64_t im = round_component(v[i].imag(), step_);
            r.codeword[i] = {re * step_, im * step_};
            r.index.coords.push_back(re);
            r.index.coords.push_back(im);
        }
        r.distance2 = distance2(v, r.codeword);
        return r;
    }
    uint64_t best = 0;
    double best_d = distance2(v, words_[0]);
    for (uint64_t i = 1; i < words_.size(); ++i) {
        const double d = distance2(v, words_[i]);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    return {words_[best], KeyIndex{false, best, {}}, best_d};
}

std::vector<DecodeResult> Codebook::nearest_list(const CVector& v, uint64_t count) const {
    if (count < 1) throw std::invalid_argument("nearest_list: count must be >= 1");
    if (kind_ == CodebookKind::RandomGaussian) {
        count = std::min<uint64_t>(count, words_.size());
        std::vector<std::pair<double, uint64_t>> all;
        all.reserve(words_.size());
        for (uint64_t i = 0; i < words_.size(); ++i) all.emplace_back(distance2(v, words_[i]), i);
        std::partial_sort(all.begin(), all.begin() + count, all.end());
        std::vector<DecodeResult> out;
        out.reserve(count);
        for (uint64_t j = 0; j < count; ++j)
            out.push_back({words_[all[j].second], KeyIndex{false, all[j].second, {}}, all[j].first});
        return out;
    }

    // Lattice: best-first search over per-component candidate ranks; the
    // joint squared distance is the sum of per-component squared offsets.
    const size_t comps = 2 * v.size();
    auto component_value = [&](size_t c) { return c % 2 == 0 ? v[c / 2].real() : v[c / 2].imag(); };
    struct Node {
        double dist2;
        std::vector<int> ranks;
        std::vector<int64_t> coords;
    };
    auto offset2 = [&](size_t c, int rank) {
        const double x = component_value(c);
        const double p = static_cast<double>(ranked_component(x, step_, rank)) * step_;
        return (x - p) * (x - p);
    };
    auto materialize = [&](const std::vector<int>& ranks) {
        Node n;
        n.ranks = ranks;
        n.dist2 = 0.0;
        n.coords.reserve(comps);
        for (size_t c = 0; c < comps; ++c) {
            n.dist2 += offset2(c, ranks[c]);
            n.coords.push_back(ranked_component(component_value(c), step_, ranks[c]));
        }
        return n;
    };
    auto worse = [](const Node& a, const Node& b) {
        if (a.dist2 != b.dist2) return a.dist2 > b.dist2;
        return a.coords > b.coords;
    };
    std::priority_queue<Node, std::vector<Node>, decltype(worse)> frontier(worse);
    std::set<std::vector<int>> seen;
    std::vector<int> root(comps, 0);
    frontier.push(materialize(root));
    seen.insert(root);

    std::vector<DecodeResult> out;
    out.reserve(count);
    while (!frontier.empty() && out.size() < count) {
        Node best = frontier.top();
        frontier.pop();
        DecodeResult r;
        r.index.is_lattice = true;
        r.index.coords = best.coords;
        r.distance2 = best.dist2;
        r.codeword.resize(v.size());
        for (size_t i = 0; i < v.size(); ++i)
            r.codeword[i] = {best.coords[2 * i] * step_, best.coords[2 * i + 1] * step_};
        out.push_back(std::move(r));
        for (size_t c = 0; c < comps; ++c) {
            std::vector<int> next = best.ranks;
            ++next[c];
            if (seen.insert(next).second) frontier.push(materialize(next));
        }
    }
    return out;
}

ReconcileResult reconcile_alice(const CVector& h_hat_a2, const Codebook& cb) {
    DecodeResult d = cb.nearest(h_hat_a2);
    ReconciliationMessage msg;
    msg.epsilon.resize(h_hat_a2.size());
    for (size_t i = 0; i < h_hat_a2.size(); ++i) msg.epsilon[i] = h_hat_a2[i] - d.codeword[i];
    return {std::move(d.codeword), std::move(d.index), std::move(msg)};
}

namespace {

CVector subtract(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector size mismatch");
    CVector out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

} // namespace

DecodeResult decode_bob(const CVector& h_hat_b1, const ReconciliationMessage& msg, const Codebook& cb) {
    return cb.nearest(subtract(h_hat_b1, msg.epsilon));
}

CVector eve_ml_estimate(const CVector& g_hat_slot1, const CVector& g_hat_slot2,
                        const channel::ScenarioParams& params) {
    if (g_hat_slot1.size() != g_hat_slot2.size())
        throw std::invalid_argument("eve_ml_estimate: observation length mismatch");
    const channel::Transmitter handshake[2] = {channel::Transmitter::Alice, channel::Transmitter::Bob};
    const auto model = pla::build_regression(handshake, params);
    const numerics::GlsSolver solver(model);
    CVector est(g_hat_slot1.size());
    for (size_t i = 0; i < est.size(); ++i) {
        const Complex stack[2] = {g_hat_slot1[i], g_hat_slot2[i]};
        est[i] = solver.estimate(stack);
    }
    return est;
}

DecodeResult decode_eve(const CVector& h_tilde_e, const ReconciliationMessage& msg, const Codebook& cb) {
    return cb.nearest(subtract(h_tilde_e, msg.epsilon));
}

std::vector<DecodeResult> enumerate_codewords(const CVector& v, const Codebook& cb, uint64_t count) {
    return cb.nearest_list(v, count);
}

double log_likelihood_ratio(const CVector& c_star, const CVector& h_tilde,
                            double effective_noise_variance, double codeword_variance) {
    if (!(effective_noise_variance > 0.0))
        throw std::domain_error("log_likelihood_ratio: effective noise variance must be > 0");
    if (codeword_variance < 0.0)
        throw std::domain_error("log_likelihood_ratio: codeword variance must be >= 0");
    if (c_star.size() != h_tilde.size())
        throw std::invalid_argument("log_likelihood_ratio: vector size mismatch");
    const double v = effective_noise_variance;
    const double m = codeword_variance + v; // marginal per-entry variance
    double acc = 0.0;
    for (size_t i = 0; i < c_star.size(); ++i)
        acc += std::log(m / v) - std::norm(h_tilde[i] - c_star[i]) / v + std::norm(h_tilde[i]) / m;
    return acc / static_cast<double>(c_star.size());
}

TrialOutcome run_trial(const channel::ScenarioParams& params, const Codebook& cb, uint64_t trial,
                       const SkbaOptions& options) {
    if (params.schedule.length() < 2 || params.schedule.tx_at(1) != channel::Transmitter::Alice ||
        params.schedule.tx_at(2) != channel::Transmitter::Bob)
        throw ConfigError("schedule: the key handshake needs Alice at slot 1 and Bob at slot 2");
    channel::TraceOptions topt;
    topt.hold_first_pair = options.static_handshake;
    const channel::ChannelTrace trace = channel::generate_trace(params, trial, topt);

    const ReconcileResult alice = reconcile_alice(trace.alice_estimate(2), cb);
    const DecodeResult bob = decode_bob(trace.bob_estimate(1), alice.message, cb);
    const CVector eve_est = eve_ml_estimate(trace.eve_estimate(1), trace.eve_estimate(2), params);

    TrialOutcome out;
    out.bob_ok = bob.index == alice.index;
    out.eve_rank = 0;
    const CVector eve_target = subtract(eve_est, alice.message.epsilon);
    if (options.attack_depth == 1) {
        if (cb.nearest(eve_target).index == alice.index) out.eve_rank = 1;
    } else {
        const auto guesses = cb.nearest_list(eve_target, options.attack_depth);
        for (size_t j = 0; j < guesses.size(); ++j) {
            if (guesses[j].index == alice.index) {
                out.eve_rank = static_cast<int>(j) + 1;
                break;
            }
        }
    }
    return out;
}

FaMdResult fa_md_mc(const channel::ScenarioParams& params, const Codebook& cb, uint64_t trials,
                    const SkbaOptions& options) {
    if (trials < 1) throw std::invalid_argument("fa_md_mc: trials must be >= 1");
    if (options.attack_depth < 1) throw std::invalid_argument("fa_md_mc: attack_depth must be >= 1");
    uint64_t fa_events = 0;
    std::vector<uint64_t> md_events(options.attack_depth, 0);
    for (uint64_t trial = 0; trial < trials; ++trial) {
        const TrialOutcome t = run_trial(params, cb, trial, options);
        if (!t.bob_ok) ++fa_events;
        if (t.eve_rank >= 1)
            for (int depth = t.eve_rank; depth <= options.attack_depth; ++depth)
                ++md_events[depth - 1];
    }
    FaMdResult out;
    out.fa = make_mc_estimate(fa_events, trials);
    out.md_by_depth.reserve(options.attack_depth);
    for (int depth = 1; depth <= options.attack_depth; ++depth)
        out.md_by_depth.push_back(make_mc_estimate(md_events[depth - 1], trials));
    out.md = out.md_by_depth.back();
    return out;
}

std::vector<bool> key_from_index(const KeyIndex& index, int key_bits, const digest::HashConfig& hash) {
    if (key_bits < 0 || key_bits > 256)
        throw std::invalid_argument("key_from_index: key_bits must lie in [0,256]");
    std::vector<uint8_t> buf;
    buf.push_back(index.is_lattice ? 1 : 0);
    if (index.is_lattice) {
        for (int64_t c : index.coords)
            for (int j = 0; j < 8; ++j) buf.push_back(static_cast<uint8_t>(static_cast<uint64_t>(c) >> (8 * j)));
    } else {
        for (int j = 0; j < 8; ++j) buf.push_back(static_cast<uint8_t>(index.flat >> (8 * j)));
    }
    return digest::truncate_bits(digest::hash_bytes(buf, hash), key_bits);
}

KeyRateBound key_rate_bound(double lambda, int entries, double codeword_variance,
                            double effective_noise_variance, uint64_t trials, uint64_t seed) {
    if (entries < 1) throw std::invalid_argument("key_rate_bound: entries must be >= 1");
    if (trials < 1) throw std::invalid_argument("key_rate_bound: trials must be >= 1");
    if (!(effective_noise_variance > 0.0))
        throw std::domain_error("key_rate_bound: effective noise variance must be > 0");
    const double s_code = std::sqrt(std::max(0.0, codeword_variance));
    const double s_marg = std::sqrt(codeword_variance + effective_noise_variance);
    uint64_t events = 0;
    for (uint64_t trial = 0; trial < trials; ++trial) {
        RngStream rng(seed, trial, purpose::kOracle);
        CVector c_star(entries), h_tilde(entries);
        for (auto& v : c_star) v = s_code * rng.cnormal();
        for (auto& v : h_tilde) v = s_marg * rng.cnormal(); // marginal law, independent of c*
        if (log_likelihood_ratio(c_star, h_tilde, effective_noise_variance, codeword_variance) > lambda)
            ++events;
    }
    KeyRateBound out;
    out.pi_fa = make_mc_estimate(events, trials);
    out.bound = events == 0 ? std::numeric_limits<double>::infinity()
                            : -std::log2(out.pi_fa.estimate) / static_cast<double>(entries);
    return out;
}

} // namespace authsim::skba
