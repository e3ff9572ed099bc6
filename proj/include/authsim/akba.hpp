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
#pragma once

#include <span>

#include "authsim/channel.hpp"
#include "authsim/digest.hpp"
#include "authsim/numerics.hpp"
#include "authsim/pla.hpp"
#include "authsim/stats.hpp"

namespace authsim::akba {

/// Saturating uniform quantizer. Cells are (tau_k, tau_{k+1}] with
/// tau_1 = -inf, tau_{K+1} = +inf, and the K-1 interior thresholds uniformly
/// spaced on [-v_sat, v_sat] (a single threshold at 0 when K = 2), so the two
/// extreme cells are the saturation tails.
struct QuantizerConfig {
    int levels = 4;     // K_Q
    double v_sat = 2.0;

    void validate() const;
    std::vector<double> interior_thresholds() const;
};

/// 1-based index of the cell containing x.
int quantize_component(double x, const QuantizerConfig& q);

/// Quantized channel word: 2N cell indices, real parts of all entries first,
/// then imaginary parts.
struct QuantizedWord {
    std::vector<int> levels;
    bool operator==(const QuantizedWord&) const = default;
};

int bits_per_level(const QuantizerConfig& q);
std::vector<uint8_t> pack_word(const QuantizedWord& word, const QuantizerConfig& q);
QuantizedWord unpack_word(std::span<const uint8_t> bytes, int components, const QuantizerConfig& q);

QuantizedWord bits_from_estimate(const CVector& estimate, const QuantizerConfig& q);

/// Digest of the packed word; key agreement is modeled as digest equality.
digest::Digest derive_key(const QuantizedWord& word, const QuantizerConfig& q,
                          const digest::HashConfig& hash = {});

/// Same model construction as pla::build_regression; named separately because
/// the schedule convention differs (Alice transmits on odd slots).
numerics::GaussianLinearModel build_regression_akba(std::span<const channel::Transmitter> observed,
                                                    const channel::ScenarioParams& params);

enum class ComponentPart { Real, Imag };

/// Posterior of one real-valued component of h(1) given Eve's stack:
/// density proportional to exp(-(a h^2 + b h)), a > 0. Includes the CN(0,1)
/// prior on h(1), so with no usable observations (w = 0) it reduces to the
/// prior.
struct ScalarPosterior {
    double a;
    double b;

    /// log integral of exp(-(a h^2 + b h)) over cell k.
    double cell_log_probability(int cell, const QuantizerConfig& q) const;
    /// Most probable cell; ties break toward the lower index.
    int argmax_cell(const QuantizerConfig& q) const;
};

/// Factors K once; serves per-component posteriors for many stacks.
class PosteriorBuilder {
  public:
    explicit PosteriorBuilder(const numerics::GaussianLinearModel& model);
    ScalarPosterior posterior(std::span<const Complex> g_stack, ComponentPart part) const;

  private:
    std::vector<double> kinv_w_;
    double a_;
};

double cell_log_posterior(int cell, const numerics::GaussianLinearModel& model,
                          std::span<const Complex> g_stack, ComponentPart part,
                          const QuantizerConfig& q);

/// Componentwise posterior-argmax word: Eve's best single guess of the word
/// Bob extracted at slot 1.
QuantizedWord optimal_attack(const pla::EveObservationStack& stack, const QuantizerConfig& q);

/// Quantizes Eve's GLS point estimate instead of maximizing cell mass;
/// the baseline the optimal attack is measured against.
QuantizedWord naive_attack(const pla::EveObservationStack& stack, const QuantizerConfig& q);

struct ScoredWord {
    QuantizedWord word;
    double log_posterior;
};

/// The `max_words` most probable words in nonincreasing joint posterior
/// (components are independent given the observations). Best-first search
/// over single-component substitutions; ties order lexicographically.
/// Requests beyond the K_Q^(2N) possible words are truncated.
std::vector<ScoredWord> enumerate_attacks(const pla::EveObservationStack& stack,
                                          const QuantizerConfig& q, uint64_t max_words);

/// Missed-detection probability: fraction of trials in which Eve's slot-3
/// attack word (after observing slots 1 and 2) matches Bob's slot-1 word.
/// With attack_depth > 1 a trial counts when any of the first `attack_depth`
/// enumerated words matches. The false-alarm probability of the scheme is
/// identically zero.
McEstimate md_probability_mc(const channel::ScenarioParams& params, const QuantizerConfig& q,
                             uint64_t trials, int attack_depth = 1);

} // namespace authsim::akba
