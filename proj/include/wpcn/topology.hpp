#pragma once

#include <string>
#include <vector>

namespace wpcn {

// Directed data link between two nodes. Ids are 1-based in config files and
// kept that way here; index() gives the 0-based position used internally.
struct Link {
    int id = 0;
    int head = 0;  // transmitting node id
    int tail = 0;  // receiving node id
    double length_m = 0.0;
};

struct Stream {
    int id = 0;
    int source = 0;
    int sink = 0;
};

// Static network description: nodes, directed data links, streams and the
// energy-AP geometry. Immutable after build_topology().
struct Topology {
    int node_count = 0;
    int eap_antennas = 0;
    std::vector<Link> links;
    std::vector<Stream> streams;
    std::vector<double> eap_distance_m;  // per node

    // per-node link index sets (0-based link indices)
    std::vector<std::vector<int>> out_links;
    std::vector<std::vector<int>> in_links;
    // conflict[l] = 0-based indices of links sharing a node with link l
    // (node-exclusive interference; includes l itself)
    std::vector<std::vector<int>> conflicts;

    int num_links() const { return static_cast<int>(links.size()); }
    int num_streams() const { return static_cast<int>(streams.size()); }

    int head_of(int link_idx) const { return links[link_idx].head - 1; }
    int tail_of(int link_idx) const { return links[link_idx].tail - 1; }
    int source_of(int stream_idx) const { return streams[stream_idx].source - 1; }
    int sink_of(int stream_idx) const { return streams[stream_idx].sink - 1; }

    bool share_node(int la, int lb) const;
};

// Validates and indexes a topology description. Throws std::invalid_argument
// on duplicate link ids, dangling node references, self-loops or
// non-positive lengths/distances.
Topology build_topology(int nodes, int eap_antennas,
                        std::vector<Link> links, std::vector<Stream> streams,
                        std::vector<double> eap_distance_m);

// 9-node / 12-link two-stream demo network used by the presets.
Topology demo_topology(int eap_antennas, double hop_length_m,
                       const std::vector<double>& eap_distance_m = {});

// Small regression topologies.
Topology line_topology(int nodes, int eap_antennas, double hop_length_m,
                       double eap_distance_m);
Topology ring_topology(int nodes, int eap_antennas, double hop_length_m,
                       double eap_distance_m);

}  // namespace wpcn
