#pragma once

#include <random>
#include <vector>

#include "wpcn/config.hpp"
#include "wpcn/linalg.hpp"
#include "wpcn/topology.hpp"

namespace wpcn {

// Free-space path loss at the given carrier: (c / (4 pi f d))^exponent.
double path_loss(double distance_m, double carrier_hz, double exponent);

// Complex channel realization for one slot. g[l] is the data-link amplitude
// gain, h(n, m) the gain from E-AP antenna m to node n. Instantaneous power
// is clipped at fading_cap times the mean so that all policy constants stay
// finite.
struct ChannelState {
    long long slot = 0;
    CVec g;   // L
    CMat h;   // N x M
};

struct EstimatedChannelState {
    ChannelState value;
    std::vector<double> sigma2_g;  // per link, estimation error variance
    std::vector<double> sigma2_h;  // per node
};

// Rician sampler with per-run deterministic line-of-sight components: a
// uniform-linear-array steering vector per node and a fixed unit phase per
// link, both drawn once from the run seed.
class ChannelSampler {
  public:
    ChannelSampler(const Topology& topo, const SimConfig& cfg,
                   std::vector<double> beta_g, std::vector<double> beta_h,
                   std::mt19937_64& rng);

    ChannelState sample(std::mt19937_64& rng, long long slot);
    EstimatedChannelState estimate(const ChannelState& truth, std::mt19937_64& rng);

    bool perfect_csi() const;
    const std::vector<double>& beta_g() const { return beta_g_; }
    const std::vector<double>& beta_h() const { return beta_h_; }

  private:
    const Topology& topo_;
    double k_;           // Rician K (linear)
    double f_cap_;
    double psi_h_, psi_g_, sigma_n_;
    std::vector<double> beta_g_, beta_h_;
    CVec los_g_;         // per link, unit modulus
    CMat los_h_;         // N x M, unit modulus entries
    std::vector<double> sigma2_g_, sigma2_h_;  // precomputed error variances

    void clip(ChannelState& cs) const;
};

}  // namespace wpcn
