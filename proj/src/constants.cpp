#include "wpcn/constants.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wpcn/channel.hpp"

namespace wpcn {

namespace {
constexpr double kLn2 = 0.69314718055994530942;

// deterministic low-state PRNG for the slope grid check
struct SplitMix {
    unsigned long long s;
    double next01() {
        s += 0x9e3779b97f4a7c15ULL;
        unsigned long long z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};
}  // namespace

LinkBudget compute_link_budget(const SimConfig& cfg, const Topology& topo) {
    LinkBudget b;
    b.beta_g.reserve(topo.num_links());
    for (const Link& l : topo.links)
        b.beta_g.push_back(path_loss(l.length_m, cfg.carrier_hz, cfg.path_loss_exponent));
    b.beta_h.reserve(topo.node_count);
    for (double d : topo.eap_distance_m)
        b.beta_h.push_back(path_loss(d, cfg.carrier_hz, cfg.path_loss_exponent));
    return b;
}

DerivedConstants derive_constants(const SimConfig& cfg, const Topology& topo,
                                  const RateModel& model, const LinkBudget& budget) {
    if (!(cfg.alpha > 1.0)) throw std::invalid_argument("derive_constants: alpha must be > 1");

    DerivedConstants k;
    for (double b : budget.beta_g) k.g_cap.push_back(b * cfg.fading_cap);
    for (double b : budget.beta_h) k.h_cap.push_back(b * cfg.fading_cap);

    const double g_cap_max =
        k.g_cap.empty() ? 0.0 : *std::max_element(k.g_cap.begin(), k.g_cap.end());
    const double h_cap_max =
        k.h_cap.empty() ? 0.0 : *std::max_element(k.h_cap.begin(), k.h_cap.end());

    // Slope bound: the Shannon rate has its maximum derivative at p = 0 and
    // gain at the clip cap, dR/dp = g2 / (N0 ln 2); the dispersion penalty of
    // the finite-blocklength form only ever lowers the slope. Verified on a
    // grid below.
    k.delta = g_cap_max / (model.noise_w_per_hz * kLn2);
    if (!std::isfinite(k.delta))
        throw std::invalid_argument("derive_constants: non-finite rate slope bound");

    SplitMix rng{0x5eedULL};
    const double eps = cfg.p_node_max_w * 1e-9;
    for (int i = 0; i < 1000; ++i) {
        const double p = rng.next01() * cfg.p_node_max_w;
        const double g2 = rng.next01() * g_cap_max;
        const double slope = (model.rate(p + eps, g2) - model.rate(p, g2)) / eps;
        if (!std::isfinite(slope))
            throw std::invalid_argument("derive_constants: non-finite derivative estimate");
        if (slope > k.delta * (1.0 + 1e-6))
            throw std::invalid_argument("derive_constants: rate slope exceeds delta bound");
    }

    k.conv = 2.0 * k.delta / (1.0 - 1.0 / cfg.alpha);
    k.mu_max = cfg.max_arrival_bits + cfg.tau_f_s * model.rate(cfg.p_node_max_w, g_cap_max);
    k.phi_max = std::max(cfg.tau_f_s * cfg.p_node_max_w,
                         cfg.tau_f_s * cfg.p_eap_max_w * topo.eap_antennas * h_cap_max);
    k.u0 = std::max(k.phi_max * (k.conv + cfg.alpha * k.delta), k.mu_max);
    return k;
}

}  // namespace wpcn
