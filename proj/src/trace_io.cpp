#include "wpcn/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#ifndef WPCN_BUILD_ID
#define WPCN_BUILD_ID "unknown"
#endif

namespace wpcn {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string build_id() { return WPCN_BUILD_ID; }

void write_trace_csv(std::ostream& os, const Trace& trace, const Topology& topo) {
    const int n = topo.node_count;
    const int s_count = topo.num_streams();
    const int l_count = topo.num_links();

    os << "slot,mode,e_ap,drop_buf,drop_energy";
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < s_count; ++s) os << ",uv_" << i + 1 << '_' << s + 1;
    for (int i = 0; i < n; ++i)
        for (int s = 0; s < s_count; ++s) os << ",ur_" << i + 1 << '_' << s + 1;
    for (int i = 0; i < n; ++i) os << ",ev_" << i + 1;
    for (int i = 0; i < n; ++i) os << ",br_" << i + 1;
    for (int i = 0; i < n; ++i) os << ",z_" << i + 1;
    for (int i = 0; i < n; ++i) os << ",erx_" << i + 1;
    for (int i = 0; i < n; ++i) os << ",phi_i_" << i + 1;
    for (int i = 0; i < n; ++i) os << ",phi_o_" << i + 1;
    for (int l = 0; l < l_count; ++l) os << ",p_" << topo.links[l].id;
    for (int l = 0; l < l_count; ++l) os << ",sl_" << topo.links[l].id;
    for (int l = 0; l < l_count; ++l) os << ",rs_" << topo.links[l].id;
    for (int l = 0; l < l_count; ++l) os << ",rr_" << topo.links[l].id;
    os << '\n';

    auto row_vec = [&os](const std::vector<double>& v, size_t expect) {
        for (size_t i = 0; i < expect; ++i)
            os << ',' << fmt(i < v.size() ? v[i] : 0.0);
    };
    for (const SlotRecord& r : trace) {
        os << r.slot << ',' << (r.energy_slot ? 'e' : 'd') << ',' << fmt(r.e_ap) << ','
           << fmt(r.drop_buffer_bits) << ',' << fmt(r.drop_energy_bits);
        row_vec(r.u_virt, static_cast<size_t>(n) * s_count);
        row_vec(r.u_real, static_cast<size_t>(n) * s_count);
        row_vec(r.e_virt, n);
        row_vec(r.b_real, n);
        row_vec(r.z, n);
        row_vec(r.e_recv, n);
        row_vec(r.phi_in, n);
        row_vec(r.phi_out, n);
        row_vec(r.link_power, l_count);
        for (int l = 0; l < l_count; ++l) {
            const int s = l < static_cast<int>(r.link_stream.size()) ? r.link_stream[l] : -1;
            os << ',' << (s >= 0 ? topo.streams[s].id : 0);
        }
        row_vec(r.link_rate_sched, l_count);
        row_vec(r.link_rate_real, l_count);
        os << '\n';
    }
}

void write_trace_csv_file(const std::string& path, const Trace& trace,
                          const Topology& topo) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_trace_csv(os, trace, topo);
}

Trace read_trace_csv(std::istream& is, const Topology& topo) {
    const int n = topo.node_count;
    const int s_count = topo.num_streams();
    const int l_count = topo.num_links();
    const size_t expected = 5 + 2 * static_cast<size_t>(n) * s_count + 6 * n + 4 * l_count;

    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("trace: empty file");
    if (split(line).size() != expected)
        throw std::invalid_argument("trace: header does not match the topology");

    Trace trace;
    size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line);
        if (f.size() != expected)
            throw std::invalid_argument("trace: malformed row at line " +
                                        std::to_string(lineno));
        size_t i = 0;
        auto next_d = [&]() {
            try {
                return std::stod(f.at(i++));
            } catch (const std::exception&) {
                throw std::invalid_argument("trace: bad number at line " +
                                            std::to_string(lineno));
            }
        };
        SlotRecord r;
        r.slot = static_cast<long long>(next_d());
        const std::string& mode = f.at(i++);
        if (mode != "e" && mode != "d")
            throw std::invalid_argument("trace: bad mode at line " + std::to_string(lineno));
        r.energy_slot = mode == "e";
        r.e_ap = next_d();
        r.drop_buffer_bits = next_d();
        r.drop_energy_bits = next_d();
        auto read_vec = [&](std::vector<double>& v, size_t count) {
            v.resize(count);
            for (size_t k = 0; k < count; ++k) v[k] = next_d();
        };
        read_vec(r.u_virt, static_cast<size_t>(n) * s_count);
        read_vec(r.u_real, static_cast<size_t>(n) * s_count);
        read_vec(r.e_virt, n);
        read_vec(r.b_real, n);
        read_vec(r.z, n);
        read_vec(r.e_recv, n);
        read_vec(r.phi_in, n);
        read_vec(r.phi_out, n);
        read_vec(r.link_power, l_count);
        r.link_stream.resize(l_count);
        for (int l = 0; l < l_count; ++l) {
            const int sid = static_cast<int>(next_d());
            int idx = -1;
            for (int s = 0; s < s_count; ++s)
                if (topo.streams[s].id == sid) idx = s;
            r.link_stream[l] = idx;
        }
        read_vec(r.link_rate_sched, l_count);
        read_vec(r.link_rate_real, l_count);
        trace.push_back(std::move(r));
    }
    return trace;
}

Trace read_trace_csv_file(const std::string& path, const Topology& topo) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("trace: cannot open " + path);
    return read_trace_csv(is, topo);
}

std::string summary_to_json(const RunSummary& s, const Scenario& scenario) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["build"] = build_id();
    j["slots"] = s.slots;
    j["warmup_slots"] = s.warmup_slots;
    j["avg_energy_per_slot_j"] = s.avg_energy_per_slot_j;
    j["avg_backlog_bits"] = s.avg_backlog_bits;
    j["avg_virtual_backlog_bits"] = s.avg_virtual_backlog_bits;
    j["energy_slot_fraction"] = s.energy_slot_fraction;
    j["total_eap_energy_j"] = s.total_eap_energy_j;
    j["total_stored_energy_j"] = s.total_stored_energy_j;
    j["dropped_buffer_bits"] = s.dropped_buffer_bits;
    j["dropped_energy_bits"] = s.dropped_energy_bits;
    j["drop_fraction"] = s.drop_fraction;
    j["arrived_bits"] = s.arrived_bits;
    j["delivered_bits"] = s.delivered_bits;
    j["link_throughput_bps"] = s.link_throughput_bps;
    j["stable"] = s.stable;
    j["backlog_slope_bits_per_slot"] = s.backlog_slope_bits_per_slot;
    j["backlog_slope_stderr"] = s.backlog_slope_stderr;
    j["config"] = nlohmann::json::parse(config_to_json(scenario));
    return j.dump(2);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points,
                     const std::string& axis, const std::string& axis2) {
    os << axis;
    if (!axis2.empty()) os << ',' << axis2;
    os << ",runs,energy_mean_j,energy_se_j,backlog_mean_bits,backlog_se_bits,"
          "drop_mean,drop_se,stable_runs\n";
    for (const SweepPoint& p : points) {
        os << fmt(p.axis_value);
        if (!axis2.empty()) os << ',' << fmt(p.axis2_value);
        os << ',' << p.runs << ',' << fmt(p.energy_mean) << ',' << fmt(p.energy_se)
           << ',' << fmt(p.backlog_mean) << ',' << fmt(p.backlog_se) << ','
           << fmt(p.drop_mean) << ',' << fmt(p.drop_se) << ',' << p.stable_runs
           << '\n';
    }
}

}  // namespace wpcn
