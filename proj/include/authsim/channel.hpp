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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "authsim/linalg.hpp"
#include "authsim/rng.hpp"

namespace authsim::channel {

enum class Transmitter { Alice, Bob };

/// Who sends pilots in each slot. Slots are 1-based throughout, matching the
/// t-1 exponents of the AR model.
struct PilotSchedule {
    std::vector<Transmitter> tx;

    int length() const { return static_cast<int>(tx.size()); }
    Transmitter tx_at(int slot) const { return tx.at(static_cast<size_t>(slot) - 1); }

    /// Bob transmits on odd slots, Alice on even slots.
    static PilotSchedule pla_default(int slots);
    /// Alice transmits on odd slots, Bob on even slots.
    static PilotSchedule akba_default(int slots);
    static PilotSchedule by_name(const std::string& name, int slots);
};

struct ScenarioParams {
    int antennas = 1; // M; channels have N = M^2 entries
    double alpha = 0.9;
    double beta1 = 0.5;
    double beta2 = 0.5;
    double sigma_a = 0.1;
    double sigma_b = 0.1;
    double sigma_e = 0.1;
    PilotSchedule schedule;
    uint64_t seed = 0;

    int entries() const { return antennas * antennas; }
    double beta_of(Transmitter t) const { return t == Transmitter::Alice ? beta1 : beta2; }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct TraceOptions {
    /// Freeze the channel between slots 1 and 2 (h(2) = h(1)); used by the
    /// SKBA static-handshake mode. Later slots evolve normally.
    bool hold_first_pair = false;
};

/// One slot of simulated state: true channels plus whichever noisy estimates
/// the schedule produces. Eve always estimates the channel to the current
/// transmitter.
struct SlotRecord {
    CVector h;  // Alice-Bob
    CVector g1; // Alice-Eve
    CVector g2; // Bob-Eve
    std::optional<CVector> h_hat_alice;
    std::optional<CVector> h_hat_bob;
    CVector g_hat_eve;
};

class ChannelTrace {
  public:
    ChannelTrace(int entries, PilotSchedule schedule, std::vector<SlotRecord> slots)
        : entries_(entries), schedule_(std::move(schedule)), slots_(std::move(slots)) {}

    int entries() const { return entries_; }
    int length() const { return static_cast<int>(slots_.size()); }
    const PilotSchedule& schedule() const { return schedule_; }

    const CVector& h(int slot) const { return at(slot).h; }
    const CVector& g1(int slot) const { return at(slot).g1; }
    const CVector& g2(int slot) const { return at(slot).g2; }
    const CVector& eve_estimate(int slot) const { return at(slot).g_hat_eve; }
    /// Alice's estimate of h at `slot`; present only when Bob transmitted.
    const CVector& alice_estimate(int slot) const;
    /// Bob's estimate of h at `slot`; present only when Alice transmitted.
    const CVector& bob_estimate(int slot) const;
    bool has_alice_estimate(int slot) const { return at(slot).h_hat_alice.has_value(); }
    bool has_bob_estimate(int slot) const { return at(slot).h_hat_bob.has_value(); }

  private:
    const SlotRecord& at(int slot) const { return slots_.at(static_cast<size_t>(slot) - 1); }

    int entries_;
    PilotSchedule schedule_;
    std::vector<SlotRecord> slots_;
};

/// Fresh iid CN(0,1) vector: the slot-1 channel state.
CVector init_channel(int entries, RngStream& rng);

/// AR step alpha * prev + sqrt(1 - alpha^2) * z. The innovation is drawn even
/// when alpha = 1 so sweeps over alpha reuse identical noise.
CVector evolve(const CVector& prev, double alpha, RngStream& rng);

/// Correlated side channel beta * h + sqrt(1 - beta^2) * z with fresh z.
CVector derive_eve_channel(const CVector& h, double beta, RngStream& rng);

/// Noisy pilot estimate: truth + sigma * w.
CVector observe(const CVector& truth, double sigma, RngStream& rng);

/// Runs the slot loop for one trial. Fully determined by (params.seed, trial).
ChannelTrace generate_trace(const ScenarioParams& params, uint64_t trial = 0,
                            const TraceOptions& options = {});

/// One CSV row per (slot, entry); absent estimates are empty fields.
void write_trace_csv(const ChannelTrace& trace, std::ostream& out);

} // namespace authsim::channel
