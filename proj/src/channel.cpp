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
#include "authsim/channel.hpp"

#include <cmath>
#include <ostream>

#include "authsim/format.hpp"

namespace authsim::channel {

PilotSchedule PilotSchedule::pla_default(int slots) {
    PilotSchedule s;
    for (int t = 1; t <= slots; ++t)
        s.tx.push_back(t % 2 == 1 ? Transmitter::Bob : Transmitter::Alice);
    return s;
}

PilotSchedule PilotSchedule::akba_default(int slots) {
    PilotSchedule s;
    for (int t = 1; t <= slots; ++t)
        s.tx.push_back(t % 2 == 1 ? Transmitter::Alice : Transmitter::Bob);
    return s;
}

PilotSchedule PilotSchedule::by_name(const std::string& name, int slots) {
    if (name == "pla-default") return pla_default(slots);
    if (name == "akba-default") return akba_default(slots);
    throw ConfigError("unknown schedule preset '" + name + "' (expected pla-default or akba-default)");
}

void ScenarioParams::validate() const {
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0 && !std::isnan(v); };
    if (antennas < 1) throw ConfigError("M: antennas per device must be a positive integer");
    if (!in_unit(alpha)) throw ConfigError("alpha: correlation factor must lie in [0,1]");
    if (!in_unit(beta1)) throw ConfigError("beta1: correlation factor must lie in [0,1]");
    if (!in_unit(beta2)) throw ConfigError("beta2: correlation factor must lie in [0,1]");
    if (!(sigma_a >= 0.0)) throw ConfigError("sigma_a: noise deviation must be >= 0");
    if (!(sigma_b >= 0.0)) throw ConfigError("sigma_b: noise deviation must be >= 0");
    if (!(sigma_e >= 0.0)) throw ConfigError("sigma_e: noise deviation must be >= 0");
    if (schedule.length() < 1) throw ConfigError("schedule: at least one slot is required");
}

CVector init_channel(int entries, RngStream& rng) {
    CVector h(entries);
    for (auto& v : h) v = rng.cnormal();
    return h;
}

CVector evolve(const CVector& prev, double alpha, RngStream& rng) {
    if (std::abs(alpha) > 1.0) throw std::domain_error("evolve: |alpha| must be <= 1");
    const double innov = std::sqrt(1.0 - alpha * alpha);
    CVector next(prev.size());
    for (size_t i = 0; i < prev.size(); ++i) next[i] = alpha * prev[i] + innov * rng.cnormal();
    return next;
}

CVector derive_eve_channel(const CVector& h, double beta, RngStream& rng) {
    if (beta < 0.0 || beta > 1.0) throw std::domain_error("derive_eve_channel: beta must lie in [0,1]");
    const double innov = std::sqrt(1.0 - beta * beta);
    CVector g(h.size());
    for (size_t i = 0; i < h.size(); ++i) g[i] = beta * h[i] + innov * rng.cnormal();
    return g;
}

CVector observe(const CVector& truth, double sigma, RngStream& rng) {
    if (!(sigma >= 0.0)) throw std::domain_error("observe: sigma must be >= 0");
    CVector y(truth.size());
    for (size_t i = 0; i < truth.size(); ++i) y[i] = truth[i] + sigma * rng.cnormal();
    return y;
}

ChannelTrace generate_trace(const ScenarioParams& params, uint64_t trial, const TraceOptions& options) {
    params.validate();
    const int n = params.entries();
    const uint64_t seed = params.seed;

    RngStream ch(seed, trial, purpose::kChannel);
    RngStream z1(seed, trial, purpose::kEveAlice);
    RngStream z2(seed, trial, purpose::kEveBob);
    RngStream wa(seed, trial, purpose::kAliceNoise);
    RngStream wb(seed, trial, purpose::kBobNoise);
    RngStream we(seed, trial, purpose::kEveNoise);

    std::vector<SlotRecord> slots;
    slots.reserve(params.schedule.length());
    CVector h;
    for (int t = 1; t <= params.schedule.length(); ++t) {
        if (t == 1) {
            h = init_channel(n, ch);
        } else {
            const double a = (options.hold_first_pair && t == 2) ? 1.0 : params.alpha;
            h = evolve(h, a, ch);
        }
        SlotRecord rec;
        rec.h = h;
        rec.g1 = derive_eve_channel(h, params.beta1, z1);
        rec.g2 = derive_eve_channel(h, params.beta2, z2);
        const Transmitter tx = params.schedule.tx_at(t);
        if (tx == Transmitter::Bob) {
            rec.h_hat_alice = observe(h, params.sigma_a, wa);
            rec.g_hat_eve = observe(rec.g2, params.sigma_e, we);
        } else {
            rec.h_hat_bob = observe(h, params.sigma_b, wb);
            rec.g_hat_eve = observe(rec.g1, params.sigma_e, we);
        }
        slots.push_back(std::move(rec));
    }
    return ChannelTrace(n, params.schedule, std::move(slots));
}

const CVector& ChannelTrace::alice_estimate(int slot) const {
    const auto& e = at(slot).h_hat_alice;
    if (!e) throw std::invalid_argument("no Alice estimate at slot " + std::to_string(slot));
    return *e;
}

const CVector& ChannelTrace::bob_estimate(int slot) const {
    const auto& e = at(slot).h_hat_bob;
    if (!e) throw std::invalid_argument("no Bob estimate at slot " + std::to_string(slot));
    return *e;
}

void write_trace_csv(const ChannelTrace& trace, std::ostream& out) {
    out << "slot,n,h_re,h_im,g1_re,g1_im,g2_re,g2_im,"
           "h_hat_alice_re,h_hat_alice_im,h_hat_bob_re,h_hat_bob_im,g_hat_eve_re,g_hat_eve_im\n";
    auto cell = [](const Complex& v, int part) { return format_double(part == 0 ? v.real() : v.imag()); };
    for (int t = 1; t <= trace.length(); ++t) {
        for (int i = 0; i < trace.entries(); ++i) {
            out << t << ',' << (i + 1);
            out << ',' << cell(trace.h(t)[i], 0) << ',' << cell(trace.h(t)[i], 1);
            out << ',' << cell(trace.g1(t)[i], 0) << ',' << cell(trace.g1(t)[i], 1);
            out << ',' << cell(trace.g2(t)[i], 0) << ',' << cell(trace.g2(t)[i], 1);
            if (trace.has_alice_estimate(t))
                out << ',' << cell(trace.alice_estimate(t)[i], 0) << ',' << cell(trace.alice_estimate(t)[i], 1);
            else
                out << ",,";
            if (trace.has_bob_estimate(t))
                out << ',' << cell(trace.bob_estimate(t)[i], 0) << ',' << cell(trace.bob_estimate(t)[i], 1);
            else
                out << ",,";
            out << ',' << cell(trace.eve_estimate(t)[i], 0) << ',' << cell(trace.eve_estimate(t)[i], 1);
            out << '\n';
        }
    }
}

} // namespace authsim::channel
