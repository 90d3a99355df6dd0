#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/config.hpp"
#include "wpcn/constants.hpp"
#include "wpcn/controller.hpp"
#include "wpcn/state.hpp"

namespace wpcn {

// Everything observable about one slot. State snapshots are taken at the
// start of the slot (what the controller saw); flows and drops are what the
// slot realized.
struct SlotRecord {
    long long slot = 0;
    bool energy_slot = false;
    double e_ap = 0.0;  // joules transmitted by the E-AP this slot

    std::vector<double> u_virt, u_real;          // N*S
    std::vector<double> e_virt, b_real, z;       // N
    std::vector<double> e_recv, phi_in, phi_out; // N (phi_out = scheduled drain)
    std::vector<double> link_power;              // L
    std::vector<double> link_rate_sched;         // L bits/s
    std::vector<double> link_rate_real;          // L bits/s
    std::vector<int> link_stream;                // L
    double drop_buffer_bits = 0.0;
    double drop_energy_bits = 0.0;
};

enum class TraceDetail { none, state, full };

using Trace = std::vector<SlotRecord>;

struct RunSummary {
    long long slots = 0;
    long long warmup_slots = 0;
    double avg_energy_per_slot_j = 0.0;
    double avg_backlog_bits = 0.0;          // real queues, post warmup
    double avg_virtual_backlog_bits = 0.0;
    double energy_slot_fraction = 0.0;
    double total_eap_energy_j = 0.0;        // whole run
    double total_stored_energy_j = 0.0;     // sum of phi_in over nodes/slots
    double dropped_buffer_bits = 0.0;
    double dropped_energy_bits = 0.0;
    double drop_fraction = 0.0;             // dropped / arrived payload bits
    double arrived_bits = 0.0;
    std::vector<double> delivered_bits;     // per stream, payload only
    std::vector<double> link_throughput_bps;  // payload, post warmup
    bool stable = false;
    double backlog_slope_bits_per_slot = 0.0;
    double backlog_slope_stderr = 0.0;
};

struct RunOptions {
    TraceDetail detail = TraceDetail::none;
    // called for every slot regardless of trace detail; return value ignored
    std::function<void(const SlotRecord&)> observer;
};

// Bernoulli packet arrivals: A_m bits with probability lambda*tau/A_m at the
// stream's source node, zero elsewhere.
std::vector<double> sample_arrivals(std::mt19937_64& rng, const SimConfig& cfg,
                                    const Topology& topo);

struct Realization {
    FlowRealization flow;
    std::vector<double> e_recv;          // N joules under true CSI
    std::vector<double> link_rate_real;  // L bits/s
    double e_ap = 0.0;
};

// Applies a control action to the true channel: received energy through the
// beam, realized link rates capped by what the true gains support.
Realization realize_transfer(const ControlAction& action, const ChannelState& truth,
                             const RateModel& model, const Topology& topo,
                             double tau_f_s);

struct RunResult {
    Trace trace;
    RunSummary summary;
    NetworkState final_state;
};

RunResult run(const Scenario& scenario, const RunOptions& options = {});

// ---- parameter sweeps ----

struct SweepAxis {
    std::string name;  // v | arrival_kbps | buffer_kbytes | battery_mj |
                       // codeword_length | eap_power_w | pilot_energy_uj |
                       // eap_antennas
    std::vector<double> values;
};

struct SweepPoint {
    double axis_value = 0.0;
    double axis2_value = 0.0;
    int runs = 0;
    double energy_mean = 0.0, energy_se = 0.0;
    double backlog_mean = 0.0, backlog_se = 0.0;
    double drop_mean = 0.0, drop_se = 0.0;
    int stable_runs = 0;
};

Scenario apply_axis(Scenario sc, const std::string& axis, double value);

std::vector<SweepPoint> sweep(const Scenario& base, const SweepAxis& axis,
                              const std::optional<SweepAxis>& axis2, int runs,
                              int threads);

unsigned long long mix_seed(unsigned long long seed, unsigned long long stream);

}  // namespace wpcn
