#pragma once

#include <iosfwd>
#include <string>

#include "wpcn/engine.hpp"

namespace wpcn {

// Stable CSV trace layout (one row per slot, %.17g doubles so values
// round-trip bit-exactly):
//   slot, mode, e_ap, drop_buf, drop_energy,
//   uv_<n>_<s>..., ur_<n>_<s>..., ev_<n>..., br_<n>..., z_<n>...,
//   erx_<n>..., phi_i_<n>..., phi_o_<n>...,
//   p_<l>..., sl_<l>..., rs_<l>..., rr_<l>...
// mode is "e" or "d"; sl_<l> is the 1-based selected stream id or 0.
void write_trace_csv(std::ostream& os, const Trace& trace, const Topology& topo);
void write_trace_csv_file(const std::string& path, const Trace& trace,
                          const Topology& topo);

// Parses a trace written by write_trace_csv. Throws std::invalid_argument on
// malformed headers or rows.
Trace read_trace_csv(std::istream& is, const Topology& topo);
Trace read_trace_csv_file(const std::string& path, const Topology& topo);

std::string summary_to_json(const RunSummary& summary, const Scenario& scenario);

void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points,
                     const std::string& axis, const std::string& axis2);

std::string build_id();

}  // namespace wpcn
