#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wpcn/constants.hpp"
#include "wpcn/topology.hpp"

namespace wpcn {

// Thrown when a property the policy guarantees is violated at runtime
// (battery overdraw, imbalance below mu_max, ...). Carries the slot.
struct InvariantFault : std::runtime_error {
    long long slot;
    InvariantFault(long long slot_, const std::string& what)
        : std::runtime_error("slot " + std::to_string(slot_) + ": " + what),
          slot(slot_) {}
};

// Queue backlogs, battery levels and the controller-side virtual counters.
// In unlimited mode the virtual counters mirror the real ones exactly; in
// limited mode the controller keeps driving the virtual counters while the
// real buffers/batteries saturate at their caps and drop the difference.
struct NetworkState {
    long long slot = 0;
    int nodes = 0;
    int streams = 0;

    std::vector<double> u_virt;  // N*S, bits
    std::vector<double> e_virt;  // N, joules
    std::vector<double> u_real;  // N*S, bits
    std::vector<double> b_real;  // N, joules
    std::vector<double> u_dummy; // N*S, dummy-bit portion of u_real

    // cumulative accounting
    std::vector<double> drop_buffer;  // N*S, bits lost to full buffers
    std::vector<double> drop_energy;  // N*S, bits lost to energy outages
    std::vector<double> delivered;    // S, real payload bits absorbed at sinks
    std::vector<double> delivered_dummy;  // S
    std::vector<double> arrived;      // S, external payload bits
    double dropped_dummy_bits = 0.0;
    double energy_spill_j = 0.0;

    double& uv(int n, int s) { return u_virt[static_cast<size_t>(n) * streams + s]; }
    double uv(int n, int s) const { return u_virt[static_cast<size_t>(n) * streams + s]; }
    double& ur(int n, int s) { return u_real[static_cast<size_t>(n) * streams + s]; }
    double ur(int n, int s) const { return u_real[static_cast<size_t>(n) * streams + s]; }
};

NetworkState init_state(const Topology& topo, const DerivedConstants& kc);

// Per-slot transfer realization handed to the state step. link_bits[l] is
// the nominal number of bits the unlimited process moves over link l this
// slot (tau_d times the realized rate); conservation across a link is by
// construction: the same amount leaves the head and enters the tail.
struct FlowRealization {
    std::vector<double> link_bits;      // L
    std::vector<int> link_stream;       // L, -1 when idle
    std::vector<double> phi_out_sched;  // N, joules the schedule drains
    std::vector<double> phi_in;         // N, joules stored (post intake cap)
    std::vector<double> arrivals;       // N*S, external bits

    double arrival(int n, int s, int streams) const {
        return arrivals[static_cast<size_t>(n) * streams + s];
    }
};

struct StepResult {
    std::vector<double> phi_in_applied;  // N, after the ulp intake clamp
    double drop_buffer_bits = 0.0;       // this slot
    double drop_energy_bits = 0.0;       // this slot
};

// Idealized dynamics: U' = [U - mu_out]+ + mu_in, B' = B - phi_out + phi_in.
// Faults if a node drains more than its battery holds (unreachable under the
// policy). Virtual counters mirror the real state exactly.
StepResult step_unlimited(NetworkState& st, FlowRealization flow,
                          const Topology& topo, const DerivedConstants& kc);

// Limited-capacity dynamics: virtual counters evolve exactly as the
// unlimited run would, real buffers cap at buffer_cap_bits (overflow bits
// counted per queue), real batteries cap at battery_cap_j, and a node whose
// real battery cannot cover the scheduled drain drops its scheduled outgoing
// data for the slot without spending energy.
StepResult step_limited(NetworkState& st, FlowRealization flow,
                        double buffer_cap_bits, double battery_cap_j,
                        const Topology& topo, const DerivedConstants& kc);

// Z_n = sum_s u_virt(n, s) - C * e_virt(n)
std::vector<double> imbalance_vector(const NetworkState& st, double conv);

}  // namespace wpcn
