#include "wpcn/state.hpp"

#include <algorithm>
#include <cmath>

namespace wpcn {

namespace {

bool is_sink(const Topology& topo, int node, int stream) {
    return topo.sink_of(stream) == node;
}

// Nominal per-queue totals for one slot, summed in ascending link order so
// that the limited-mode virtual counters and the unlimited real queues go
// through bit-identical arithmetic.
struct NominalFlows {
    std::vector<double> out;  // N*S bits
    std::vector<double> in;   // N*S bits (includes external arrivals)
};

NominalFlows aggregate(const FlowRealization& flow, const Topology& topo) {
    const int s_count = topo.num_streams();
    NominalFlows f;
    f.out.assign(static_cast<size_t>(topo.node_count) * s_count, 0.0);
    f.in = flow.arrivals;
    for (int l = 0; l < topo.num_links(); ++l) {
        const int s = flow.link_stream[l];
        if (s < 0 || flow.link_bits[l] == 0.0) continue;
        f.out[static_cast<size_t>(topo.head_of(l)) * s_count + s] += flow.link_bits[l];
        f.in[static_cast<size_t>(topo.tail_of(l)) * s_count + s] += flow.link_bits[l];
    }
    return f;
}

// U' = [U - out]+ + in per queue (sinks absorb their own stream's inflow),
// E' = (E - phi_out) + phi_in. Shared by the unlimited step and the
// limited-mode virtual counters.
void apply_nominal(std::vector<double>& u, std::vector<double>& e,
                   const NominalFlows& f, const FlowRealization& flow,
                   const Topology& topo) {
    const int s_count = topo.num_streams();
    for (int n = 0; n < topo.node_count; ++n) {
        for (int s = 0; s < s_count; ++s) {
            const size_t i = static_cast<size_t>(n) * s_count + s;
            double v = u[i] - f.out[i];
            if (v < 0.0) v = 0.0;
            if (!is_sink(topo, n, s)) v += f.in[i];
            u[i] = v;
        }
        e[n] = (e[n] - flow.phi_out_sched[n]) + flow.phi_in[n];
    }
}

// Keeps the imbalance indicator at or above mu_max in floating point when
// the intake cap binds exactly. The analytical guarantee has zero slack in
// that case, so the stored energy is trimmed by ulps until the recomputed
// Z' clears the bound.
void clamp_intake(const NetworkState& st, FlowRealization& flow,
                  const NominalFlows& f, const Topology& topo,
                  const DerivedConstants& kc) {
    const int s_count = topo.num_streams();
    for (int n = 0; n < topo.node_count; ++n) {
        if (!(flow.phi_in[n] > 0.0)) continue;
        double u_sum = 0.0;
        for (int s = 0; s < s_count; ++s) {
            const size_t i = static_cast<size_t>(n) * s_count + s;
            double v = st.u_virt[i] - f.out[i];
            if (v < 0.0) v = 0.0;
            if (!is_sink(topo, n, s)) v += f.in[i];
            u_sum += v;
        }
        for (int guard = 0; guard < 128; ++guard) {
            const double e_next = (st.e_virt[n] - flow.phi_out_sched[n]) + flow.phi_in[n];
            if (u_sum - kc.conv * e_next >= kc.mu_max) break;
            flow.phi_in[n] = std::nextafter(flow.phi_in[n], 0.0);
            if (flow.phi_in[n] <= 0.0) {
                flow.phi_in[n] = 0.0;
                break;
            }
        }
    }
}

struct RealMove {
    // bits actually leaving real queues per link, with their dummy portion
    std::vector<double> sent;
    std::vector<double> sent_dummy;
};

}  // namespace

NetworkState init_state(const Topology& topo, const DerivedConstants& kc) {
    NetworkState st;
    st.nodes = topo.node_count;
    st.streams = topo.num_streams();
    const size_t q = static_cast<size_t>(st.nodes) * st.streams;
    st.u_virt.assign(q, kc.u0);
    st.u_real.assign(q, kc.u0);
    st.u_dummy.assign(q, kc.u0);
    st.e_virt.assign(st.nodes, 0.0);
    st.b_real.assign(st.nodes, 0.0);
    st.drop_buffer.assign(q, 0.0);
    st.drop_energy.assign(q, 0.0);
    st.delivered.assign(st.streams, 0.0);
    st.delivered_dummy.assign(st.streams, 0.0);
    st.arrived.assign(st.streams, 0.0);
    return st;
}

std::vector<double> imbalance_vector(const NetworkState& st, double conv) {
    std::vector<double> z(st.nodes, 0.0);
    for (int n = 0; n < st.nodes; ++n) {
        double u_sum = 0.0;
        for (int s = 0; s < st.streams; ++s) u_sum += st.uv(n, s);
        z[n] = u_sum - conv * st.e_virt[n];
    }
    return z;
}

StepResult step_unlimited(NetworkState& st, FlowRealization flow,
                          const Topology& topo, const DerivedConstants& kc) {
    const int s_count = topo.num_streams();
    for (int n = 0; n < topo.node_count; ++n)
        if (flow.phi_out_sched[n] > st.b_real[n])
            throw InvariantFault(st.slot, "battery constraint violated at node " +
                                              std::to_string(n + 1));

    const NominalFlows f = aggregate(flow, topo);
    clamp_intake(st, flow, f, topo, kc);

    // dummy-bit bookkeeping rides along the real movement (dummy bits drain
    // first; they were enqueued at t = 0)
    for (int l = 0; l < topo.num_links(); ++l) {
        const int s = flow.link_stream[l];
        if (s < 0 || flow.link_bits[l] == 0.0) continue;
        const int head = topo.head_of(l);
        const int tail = topo.tail_of(l);
        const size_t hi = static_cast<size_t>(head) * s_count + s;
        const double sent = std::min(flow.link_bits[l], st.u_real[hi]);
        const double d = std::min(st.u_dummy[hi], sent);
        st.u_dummy[hi] -= d;
        if (is_sink(topo, tail, s)) {
            st.delivered[s] += flow.link_bits[l] - d;
            st.delivered_dummy[s] += d;
        } else {
            st.u_dummy[static_cast<size_t>(tail) * s_count + s] += d;
        }
    }
    for (int s = 0; s < s_count; ++s)
        st.arrived[s] += flow.arrival(topo.source_of(s), s, s_count);

    apply_nominal(st.u_virt, st.e_virt, f, flow, topo);
    st.u_real = st.u_virt;
    st.b_real = st.e_virt;
    for (size_t i = 0; i < st.u_dummy.size(); ++i)
        st.u_dummy[i] = std::min(st.u_dummy[i], st.u_real[i]);
    ++st.slot;

    StepResult res;
    res.phi_in_applied = flow.phi_in;
    return res;
}

StepResult step_limited(NetworkState& st, FlowRealization flow,
                        double buffer_cap_bits, double battery_cap_j,
                        const Topology& topo, const DerivedConstants& kc) {
    const int s_count = topo.num_streams();
    const NominalFlows f = aggregate(flow, topo);
    clamp_intake(st, flow, f, topo, kc);

    StepResult res;

    // ---- real side: serve (or drop on energy outage) ----
    RealMove mv;
    mv.sent.assign(topo.num_links(), 0.0);
    mv.sent_dummy.assign(topo.num_links(), 0.0);
    for (int n = 0; n < topo.node_count; ++n) {
        const bool outage = st.b_real[n] < flow.phi_out_sched[n];
        for (int l : topo.out_links[n]) {
            const int s = flow.link_stream[l];
            if (s < 0 || flow.link_bits[l] == 0.0) continue;
            const size_t hi = static_cast<size_t>(n) * s_count + s;
            const double taken = std::min(flow.link_bits[l], st.u_real[hi]);
            const double d = std::min(st.u_dummy[hi], taken);
            st.u_real[hi] -= taken;
            st.u_dummy[hi] -= d;
            if (outage) {
                st.drop_energy[hi] += taken;
                st.dropped_dummy_bits += d;
                res.drop_energy_bits += taken;
            } else {
                mv.sent[l] = taken;
                mv.sent_dummy[l] = d;
            }
        }
        if (!outage && flow.phi_out_sched[n] > 0.0) st.b_real[n] -= flow.phi_out_sched[n];
    }

    // ---- real side: charge, then fill queues ----
    for (int n = 0; n < topo.node_count; ++n) {
        const double charged = st.b_real[n] + flow.phi_in[n];
        if (charged > battery_cap_j) {
            st.energy_spill_j += charged - battery_cap_j;
            st.b_real[n] = battery_cap_j;
        } else {
            st.b_real[n] = charged;
        }
    }
    std::vector<double> in_bits(st.u_real.size(), 0.0);
    std::vector<double> in_dummy(st.u_real.size(), 0.0);
    for (int l = 0; l < topo.num_links(); ++l) {
        const int s = flow.link_stream[l];
        if (s < 0 || mv.sent[l] == 0.0) continue;
        const size_t ti = static_cast<size_t>(topo.tail_of(l)) * s_count + s;
        in_bits[ti] += mv.sent[l];
        in_dummy[ti] += mv.sent_dummy[l];
    }
    for (int n = 0; n < topo.node_count; ++n) {
        for (int s = 0; s < s_count; ++s) {
            const size_t i = static_cast<size_t>(n) * s_count + s;
            double in = in_bits[i] + flow.arrival(n, s, s_count);
            if (in == 0.0) continue;
            if (is_sink(topo, n, s)) {
                st.delivered[s] += in - in_dummy[i];
                st.delivered_dummy[s] += in_dummy[i];
                continue;
            }
            const double space = buffer_cap_bits - st.u_real[i];
            const double admitted = std::min(in, space > 0.0 ? space : 0.0);
            const double overflow = in - admitted;
            const double admitted_dummy = std::min(in_dummy[i], admitted);
            st.u_real[i] += admitted;
            st.u_dummy[i] += admitted_dummy;
            if (overflow > 0.0) {
                st.drop_buffer[i] += overflow;
                st.dropped_dummy_bits += in_dummy[i] - admitted_dummy;
                res.drop_buffer_bits += overflow;
            }
        }
    }
    for (int s = 0; s < s_count; ++s)
        st.arrived[s] += flow.arrival(topo.source_of(s), s, s_count);

    // ---- virtual side: exactly the unlimited trajectory ----
    apply_nominal(st.u_virt, st.e_virt, f, flow, topo);
    ++st.slot;

    res.phi_in_applied = flow.phi_in;
    return res;
}

}  // namespace wpcn
