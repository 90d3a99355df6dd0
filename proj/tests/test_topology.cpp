#include "doctest.h"

#include "wpcn/topology.hpp"

using namespace wpcn;

TEST_CASE("demo network has the documented shape") {
    const Topology t = demo_topology(20, 4.0);
    CHECK(t.node_count == 9);
    CHECK(t.num_links() == 12);
    CHECK(t.num_streams() == 2);
    CHECK(t.eap_antennas == 20);
    CHECK(t.streams[0].source == 1);
    CHECK(t.streams[0].sink == 6);
    CHECK(t.streams[1].source == 2);
    CHECK(t.streams[1].sink == 9);
    // sinks only receive
    CHECK(t.out_links[5].empty());
    CHECK(t.out_links[8].empty());
    for (const Link& l : t.links) CHECK(l.length_m == 4.0);
}

TEST_CASE("degenerate single-node network is valid") {
    const Topology t = build_topology(1, 1, {}, {}, {1.0});
    CHECK(t.node_count == 1);
    CHECK(t.num_links() == 0);
    CHECK(t.num_streams() == 0);
}

TEST_CASE("self-loops are rejected") {
    CHECK_THROWS_AS(build_topology(3, 1, {{1, 2, 2, 1.0}}, {}, {1.0, 1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("duplicate link ids are rejected") {
    CHECK_THROWS_AS(
        build_topology(3, 1, {{1, 1, 2, 1.0}, {1, 2, 3, 1.0}}, {}, {1.0, 1.0, 1.0}),
        std::invalid_argument);
}

TEST_CASE("dangling references are rejected") {
    CHECK_THROWS_AS(build_topology(3, 1, {{1, 1, 7, 1.0}}, {}, {1.0, 1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_topology(3, 1, {}, {{1, 1, 9}}, {1.0, 1.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("non-positive lengths and distances are rejected") {
    CHECK_THROWS_AS(build_topology(2, 1, {{1, 1, 2, 0.0}}, {}, {1.0, 1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_topology(2, 1, {{1, 1, 2, 1.0}}, {}, {1.0, -2.0}),
                    std::invalid_argument);
}

TEST_CASE("incoming and outgoing index sets are consistent") {
    const Topology t = demo_topology(8, 4.0);
    int total_out = 0, total_in = 0;
    for (int n = 0; n < t.node_count; ++n) {
        total_out += static_cast<int>(t.out_links[n].size());
        total_in += static_cast<int>(t.in_links[n].size());
        for (int l : t.out_links[n]) CHECK(t.head_of(l) == n);
        for (int l : t.in_links[n]) CHECK(t.tail_of(l) == n);
    }
    CHECK(total_out == t.num_links());
    CHECK(total_in == t.num_links());
}

TEST_CASE("conflict sets are symmetric and reflexive") {
    const Topology t = demo_topology(8, 4.0);
    for (int a = 0; a < t.num_links(); ++a) {
        bool self = false;
        for (int b : t.conflicts[a]) {
            if (b == a) self = true;
            bool back = false;
            for (int c : t.conflicts[b])
                if (c == a) back = true;
            CHECK(back);
        }
        CHECK(self);
    }
}

TEST_CASE("line and ring helpers") {
    const Topology line = line_topology(3, 4, 5.0, 10.0);
    CHECK(line.num_links() == 2);
    CHECK(line.streams[0].sink == 3);
    const Topology ring = ring_topology(5, 4, 5.0, 10.0);
    CHECK(ring.num_links() == 5);
    CHECK(ring.head_of(4) == 4);
    CHECK(ring.tail_of(4) == 0);
}
