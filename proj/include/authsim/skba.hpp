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
#include <vector>

#include "authsim/channel.hpp"
#include "authsim/digest.hpp"
#include "authsim/numerics.hpp"
#include "authsim/stats.hpp"

namespace authsim::skba {

enum class CodebookKind { RandomGaussian, Lattice };

struct CodebookConfig {
    CodebookKind kind = CodebookKind::RandomGaussian;
    uint64_t size = 64;  // explicit codebooks
    double scale = 1.0;  // per-entry deviation of random codewords
    double step = 1.0;   // lattice spacing
    uint64_t seed = 0;

    void validate() const;
};

/// Identity of a decoded codeword: a flat index into an explicit codebook, or
/// the integer coordinates of a lattice point.
struct KeyIndex {
    bool is_lattice = false;
    uint64_t flat = 0;
    std::vector<int64_t> coords; // interleaved re/im per entry, lattice only

    bool operator==(const KeyIndex&) const = default;
};

struct DecodeResult {
    CVector codeword;
    KeyIndex index;
    double distance2;
};

/// Shared codebook over the 2N-real flattened channel space. Explicit random
/// Gaussian books decode by exhaustive scan; the scaled integer lattice
/// decodes by componentwise rounding.
class Codebook {
  public:
    static Codebook make(int entries, const CodebookConfig& config);
    static Codebook random_gaussian(int entries, uint64_t size, double scale, uint64_t seed);
    static Codebook lattice(int entries, double step);

    CodebookKind kind() const { return kind_; }
    int entries() const { return entries_; }
    uint64_t size() const { return words_.size(); } // 0 for the (infinite) lattice
    double scale() const { return scale_; }
    double step() const { return step_; }
    const CVector& word(uint64_t index) const { return words_.at(index); }

    /// Globally nearest codeword in squared Euclidean distance over the
    /// flattened reals; ties break to the lowest index (lattice: the lower
    /// coordinate).
    DecodeResult nearest(const CVector& v) const;

    /// The `count` nearest codewords in nondecreasing distance.
    std::vector<DecodeResult> nearest_list(const CVector& v, uint64_t count) const;

  private:
    Codebook() = default;

    CodebookKind kind_ = CodebookKind::RandomGaussian;
    int entries_ = 0;
    double scale_ = 1.0;
    double step_ = 1.0;
    std::vector<CVector> words_;
};

struct ReconciliationMessage {
    CVector epsilon; // h_hat_A(2) - c*_A, published
};

struct ReconcileResult {
    CVector c_star;
    KeyIndex index;
    ReconciliationMessage message;
};

/// Alice's side: select the nearest codeword and publish the offset.
ReconcileResult reconcile_alice(const CVector& h_hat_a2, const Codebook& cb);

/// Bob decodes h_hat_B(1) - epsilon.
DecodeResult decode_bob(const CVector& h_hat_b1, const ReconciliationMessage& msg, const Codebook& cb);

/// Eve's GLS estimate of h(1) from her slot-1 and slot-2 observations
/// (Alice transmits at slot 1, Bob at slot 2).
CVector eve_ml_estimate(const CVector& g_hat_slot1, const CVector& g_hat_slot2,
                        const channel::ScenarioParams& params);

/// Eve decodes h_tilde_E - epsilon.
DecodeResult decode_eve(const CVector& h_tilde_e, const ReconciliationMessage& msg, const Codebook& cb);

/// The `count` most probable codewords given v (distance order equals
/// posterior order under the Gaussian residual model).
std::vector<DecodeResult> enumerate_codewords(const CVector& v, const Codebook& cb, uint64_t count);

/// (1/N) ln p(h_tilde | c_star) / p(h_tilde): complex Gaussian with the
/// effective per-entry noise variance around c_star in the numerator, the
/// codeword-plus-noise marginal in the denominator.
double log_likelihood_ratio(const CVector& c_star, const CVector& h_tilde,
                            double effective_noise_variance, double codeword_variance);

struct SkbaOptions {
    bool static_handshake = false; // freeze the channel between slots 1 and 2
    int attack_depth = 1;          // Eve tries the L most probable codewords
};

struct TrialOutcome {
    bool bob_ok;  // Bob decoded c*_A
    int eve_rank; // 1-based rank of c*_A in Eve's list, 0 if beyond depth
};

TrialOutcome run_trial(const channel::ScenarioParams& params, const Codebook& cb, uint64_t trial,
                       const SkbaOptions& options = {});

struct FaMdResult {
    McEstimate fa;                       // P[Bob decodes something else]
    McEstimate md;                       // P[Eve finds c*_A within attack_depth]
    std::vector<McEstimate> md_by_depth; // MD at depths 1..attack_depth
};

FaMdResult fa_md_mc(const channel::ScenarioParams& params, const Codebook& cb, uint64_t trials,
                    const SkbaOptions& options = {});

/// R_n-bit key from a decoded index.
std::vector<bool> key_from_index(const KeyIndex& index, int key_bits,
                                 const digest::HashConfig& hash = {});

struct KeyRateBound {
    McEstimate pi_fa; // P[Lambda > lambda] under the unconditioned model
    double bound;     // -(1/N) log2(pi_fa); +inf when no events were seen
};

KeyRateBound key_rate_bound(double lambda, int entries, double codeword_variance,
                            double effective_noise_variance, uint64_t trials, uint64_t seed);

} // namespace authsim::skba
