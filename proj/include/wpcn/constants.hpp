#pragma once

#include <vector>

#include "wpcn/config.hpp"
#include "wpcn/rate.hpp"
#include "wpcn/topology.hpp"

namespace wpcn {

// Per-link / per-node large-scale attenuation (linear power gains).
struct LinkBudget {
    std::vector<double> beta_g;  // per data link
    std::vector<double> beta_h;  // per node (energy link)
};

// Policy constants derived from the configuration:
//   delta   - bits-per-joule bound on the rate-power slope over the clipped
//             gain range (dR/dp with R in bits/s and p in watts)
//   conv    - energy-to-data factor C = 2*delta / (1 - 1/alpha)
//   u0      - dummy-bit initialization level max{phi_max*(C + alpha*delta), mu_max}
//   mu_max  - per-slot per-queue data movement bound (bits)
//   phi_max - per-slot per-node energy movement bound (joules)
// Deterministic: identical inputs give bit-identical outputs.
struct DerivedConstants {
    double delta = 0.0;
    double conv = 0.0;
    double u0 = 0.0;
    double mu_max = 0.0;
    double phi_max = 0.0;
    std::vector<double> g_cap;  // clipped power-gain cap per data link
    std::vector<double> h_cap;  // clipped per-antenna power-gain cap per node
};

LinkBudget compute_link_budget(const SimConfig& cfg, const Topology& topo);

DerivedConstants derive_constants(const SimConfig& cfg, const Topology& topo,
                                  const RateModel& model, const LinkBudget& budget);

}  // namespace wpcn
