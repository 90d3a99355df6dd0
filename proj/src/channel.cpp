#include "wpcn/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {

namespace {
constexpr double kSpeedOfLight = 2.998e8;  // m/s

cxd sample_cscg(std::mt19937_64& rng) {
    // circularly symmetric complex normal, unit total variance
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    const double re = n(rng);
    const double im = n(rng);
    return {re, im};
}
}  // namespace

double path_loss(double distance_m, double carrier_hz, double exponent) {
    if (!(distance_m > 0.0)) throw std::invalid_argument("path_loss: distance must be positive");
    const double ratio = kSpeedOfLight / (4.0 * M_PI * carrier_hz * distance_m);
    return std::pow(ratio, exponent);
}

ChannelSampler::ChannelSampler(const Topology& topo, const SimConfig& cfg,
                               std::vector<double> beta_g, std::vector<double> beta_h,
                               std::mt19937_64& rng)
    : topo_(topo),
      k_(cfg.rician_k),
      f_cap_(cfg.fading_cap),
      psi_h_(cfg.pilot_energy_h_j),
      psi_g_(cfg.pilot_energy_g_j),
      sigma_n_(cfg.pilot_noise_w),
      beta_g_(std::move(beta_g)),
      beta_h_(std::move(beta_h)) {
    const int n = topo.node_count;
    const int m = topo.eap_antennas;
    const int l = topo.num_links();

    // line-of-sight: ULA steering vector with a per-node azimuth, unit phase
    // per data link; drawn once per run
    std::uniform_real_distribution<double> azim(-M_PI / 2.0, M_PI / 2.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    los_h_ = CMat(n, m);
    for (int ni = 0; ni < n; ++ni) {
        const double theta = azim(rng);
        for (int mi = 0; mi < m; ++mi) {
            const double arg = M_PI * mi * std::sin(theta);
            los_h_(ni, mi) = cxd(std::cos(arg), std::sin(arg));
        }
    }
    los_g_.resize(l);
    for (int li = 0; li < l; ++li) {
        const double arg = phase(rng);
        los_g_[li] = cxd(std::cos(arg), std::sin(arg));
    }

    const double inf = std::numeric_limits<double>::infinity();
    sigma2_g_.resize(l, 0.0);
    sigma2_h_.resize(n, 0.0);
    for (int li = 0; li < l; ++li)
        sigma2_g_[li] = psi_g_ == inf
                            ? 0.0
                            : 1.0 / (beta_g_[li] * psi_g_ / (sigma_n_ * (k_ + 1.0)) + 1.0);
    for (int ni = 0; ni < n; ++ni)
        sigma2_h_[ni] = psi_h_ == inf
                            ? 0.0
                            : 1.0 / (beta_h_[ni] * psi_h_ / (sigma_n_ * (k_ + 1.0)) + 1.0);
}

bool ChannelSampler::perfect_csi() const {
    const double inf = std::numeric_limits<double>::infinity();
    return psi_h_ == inf && psi_g_ == inf;
}

void ChannelSampler::clip(ChannelState& cs) const {
    for (int li = 0; li < topo_.num_links(); ++li) {
        const double cap = beta_g_[li] * f_cap_;
        const double p = std::norm(cs.g[li]);
        if (p > cap) cs.g[li] *= std::sqrt(cap / p);
    }
    const int m = topo_.eap_antennas;
    for (int ni = 0; ni < topo_.node_count; ++ni) {
        const double cap = beta_h_[ni] * f_cap_ * m;  // cap on ||h_n||^2
        double p = 0.0;
        for (int mi = 0; mi < m; ++mi) p += std::norm(cs.h(ni, mi));
        if (p > cap) {
            const double s = std::sqrt(cap / p);
            for (int mi = 0; mi < m; ++mi) cs.h(ni, mi) *= s;
        }
    }
}

ChannelState ChannelSampler::sample(std::mt19937_64& rng, long long slot) {
    const int n = topo_.node_count;
    const int m = topo_.eap_antennas;
    const int l = topo_.num_links();
    ChannelState cs;
    cs.slot = slot;
    cs.h = CMat(n, m);
    cs.g.resize(l);

    const bool pure_los = std::isinf(k_);
    const double los_w = pure_los ? 1.0 : std::sqrt(k_ / (k_ + 1.0));
    const double scat_w = pure_los ? 0.0 : std::sqrt(1.0 / (k_ + 1.0));
    for (int ni = 0; ni < n; ++ni) {
        const double a = std::sqrt(beta_h_[ni]);
        for (int mi = 0; mi < m; ++mi)
            cs.h(ni, mi) = a * (los_w * los_h_(ni, mi) + scat_w * sample_cscg(rng));
    }
    for (int li = 0; li < l; ++li) {
        const double a = std::sqrt(beta_g_[li]);
        cs.g[li] = a * (los_w * los_g_[li] + scat_w * sample_cscg(rng));
    }
    clip(cs);
    return cs;
}

EstimatedChannelState ChannelSampler::estimate(const ChannelState& truth,
                                               std::mt19937_64& rng) {
    EstimatedChannelState est;
    est.sigma2_g = sigma2_g_;
    est.sigma2_h = sigma2_h_;
    if (perfect_csi() || std::isinf(k_)) {
        est.value = truth;
        return est;
    }

    // The controller knows the deterministic component; the scattered part is
    // replaced by its estimate: scat_hat = (1 - s2) * scat + sqrt(s2 (1 - s2)) * xi,
    // which leaves truth = estimate + error with independent parts of variance
    // (1 - s2) and s2.
    const int n = topo_.node_count;
    const int m = topo_.eap_antennas;
    const int l = topo_.num_links();
    est.value.slot = truth.slot;
    est.value.h = CMat(n, m);
    est.value.g.resize(l);

    const double los_w = std::sqrt(k_ / (k_ + 1.0));
    const double scat_w = std::sqrt(1.0 / (k_ + 1.0));
    for (int ni = 0; ni < n; ++ni) {
        const double a = std::sqrt(beta_h_[ni]);
        const double s2 = sigma2_h_[ni];
        const double shrink = 1.0 - s2;
        const double noise = std::sqrt(s2 * (1.0 - s2));
        for (int mi = 0; mi < m; ++mi) {
            // reconstruct the scattered component of the (unclipped) truth;
            // clipping is rare and the controller only ever sees the clipped
            // estimate, so reconstruct from the clipped value directly
            const cxd scat = (truth.h(ni, mi) / a - los_w * los_h_(ni, mi)) / scat_w;
            const cxd scat_hat = shrink * scat + noise * sample_cscg(rng);
            est.value.h(ni, mi) = a * (los_w * los_h_(ni, mi) + scat_w * scat_hat);
        }
    }
    for (int li = 0; li < l; ++li) {
        const double a = std::sqrt(beta_g_[li]);
        const double s2 = sigma2_g_[li];
        const double shrink = 1.0 - s2;
        const double noise = std::sqrt(s2 * (1.0 - s2));
        const cxd scat = (truth.g[li] / a - los_w * los_g_[li]) / scat_w;
        const cxd scat_hat = shrink * scat + noise * sample_cscg(rng);
        est.value.g[li] = a * (los_w * los_g_[li] + scat_w * scat_hat);
    }
    clip(est.value);
    return est;
}

}  // namespace wpcn
