#include "wpcn/topology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace wpcn {

bool Topology::share_node(int la, int lb) const {
    const Link& a = links[la];
    const Link& b = links[lb];
    return a.head == b.head || a.head == b.tail || a.tail == b.head ||
           a.tail == b.tail;
}

Topology build_topology(int nodes, int eap_antennas, std::vector<Link> links,
                        std::vector<Stream> streams,
                        std::vector<double> eap_distance_m) {
    if (nodes < 1) throw std::invalid_argument("topology: node count must be >= 1");
    if (eap_antennas < 1)
        throw std::invalid_argument("topology: eap_antennas must be >= 1");
    if (eap_distance_m.size() != static_cast<size_t>(nodes))
        throw std::invalid_argument("topology: eap_distances_m must have one entry per node");
    for (double d : eap_distance_m)
        if (!(d > 0.0))
            throw std::invalid_argument("topology: eap distances must be positive");

    std::set<int> link_ids;
    for (const Link& l : links) {
        if (!link_ids.insert(l.id).second)
            throw std::invalid_argument("topology: duplicate link id " + std::to_string(l.id));
        if (l.head < 1 || l.head > nodes || l.tail < 1 || l.tail > nodes)
            throw std::invalid_argument("topology: link " + std::to_string(l.id) +
                                        " references a missing node");
        if (l.head == l.tail)
            throw std::invalid_argument("topology: link " + std::to_string(l.id) +
                                        " is a self-loop");
        if (!(l.length_m > 0.0))
            throw std::invalid_argument("topology: link " + std::to_string(l.id) +
                                        " has non-positive length");
    }
    std::set<int> stream_ids;
    for (const Stream& s : streams) {
        if (!stream_ids.insert(s.id).second)
            throw std::invalid_argument("topology: duplicate stream id " + std::to_string(s.id));
        if (s.source < 1 || s.source > nodes || s.sink < 1 || s.sink > nodes)
            throw std::invalid_argument("topology: stream " + std::to_string(s.id) +
                                        " references a missing node");
        if (s.source == s.sink)
            throw std::invalid_argument("topology: stream " + std::to_string(s.id) +
                                        " has identical source and sink");
    }

    // canonical order: ascending ids
    std::sort(links.begin(), links.end(),
              [](const Link& a, const Link& b) { return a.id < b.id; });
    std::sort(streams.begin(), streams.end(),
              [](const Stream& a, const Stream& b) { return a.id < b.id; });

    Topology t;
    t.node_count = nodes;
    t.eap_antennas = eap_antennas;
    t.links = std::move(links);
    t.streams = std::move(streams);
    t.eap_distance_m = std::move(eap_distance_m);

    t.out_links.assign(nodes, {});
    t.in_links.assign(nodes, {});
    for (int i = 0; i < t.num_links(); ++i) {
        t.out_links[t.head_of(i)].push_back(i);
        t.in_links[t.tail_of(i)].push_back(i);
    }
    t.conflicts.assign(t.num_links(), {});
    for (int a = 0; a < t.num_links(); ++a)
        for (int b = 0; b < t.num_links(); ++b)
            if (t.share_node(a, b)) t.conflicts[a].push_back(b);
    return t;
}

Topology demo_topology(int eap_antennas, double hop_length_m,
                       const std::vector<double>& eap_distance_m) {
    // Two streams: 1 -> 6 and 2 -> 9. Stream 1 can go 1-3-4-5-6, 1-4-6 or
    // 1-4-5-6; stream 2 has a 2-3-4-5-9 path and a 2-7-8-9 path with a
    // 7-5 cross link.
    const double h = hop_length_m;
    std::vector<Link> links = {
        {1, 1, 3, h}, {2, 1, 4, h},  {3, 2, 3, h},  {4, 2, 7, h},
        {5, 3, 4, h}, {6, 4, 5, h},  {7, 5, 6, h},  {8, 4, 6, h},
        {9, 5, 9, h}, {10, 7, 8, h}, {11, 8, 9, h}, {12, 7, 5, h},
    };
    std::vector<Stream> streams = {{1, 1, 6}, {2, 2, 9}};
    std::vector<double> dist = eap_distance_m;
    if (dist.empty()) {
        // node 1 is the farthest from the energy AP
        const double base = 60.0;
        dist = {base * 1.30, base * 1.15, base * 1.00, base * 0.90, base * 0.95,
                base * 1.10, base * 1.00, base * 0.95, base * 1.10};
    }
    return build_topology(9, eap_antennas, std::move(links), std::move(streams),
                          std::move(dist));
}

Topology line_topology(int nodes, int eap_antennas, double hop_length_m,
                       double eap_distance_m) {
    std::vector<Link> links;
    for (int n = 1; n < nodes; ++n)
        links.push_back({n, n, n + 1, hop_length_m});
    std::vector<Stream> streams = {{1, 1, nodes}};
    return build_topology(nodes, eap_antennas, std::move(links), std::move(streams),
                          std::vector<double>(nodes, eap_distance_m));
}

Topology ring_topology(int nodes, int eap_antennas, double hop_length_m,
                       double eap_distance_m) {
    std::vector<Link> links;
    for (int n = 1; n <= nodes; ++n)
        links.push_back({n, n, n % nodes + 1, hop_length_m});
    // one stream halfway around the ring
    std::vector<Stream> streams = {{1, 1, nodes / 2 + 1}};
    return build_topology(nodes, eap_antennas, std::move(links), std::move(streams),
                          std::vector<double>(nodes, eap_distance_m));
}

}  // namespace wpcn
