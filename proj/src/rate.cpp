#include "wpcn/rate.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

double rate_shannon(double p_w, double gain2, double bandwidth_hz,
                    double noise_w_per_hz) {
    const double snr = p_w * gain2 / (bandwidth_hz * noise_w_per_hz);
    return bandwidth_hz * std::log2(1.0 + snr);
}

double rate_finite(double p_w, double gain2, double bandwidth_hz,
                   double noise_w_per_hz, double codeword_len,
                   double qinv_rho) {
    const double snr = p_w * gain2 / (bandwidth_hz * noise_w_per_hz);
    if (snr <= 0.0) return 0.0;
    const double inv = 1.0 + snr;
    const double dispersion = std::sqrt((1.0 - 1.0 / (inv * inv)) / codeword_len);
    const double bits = std::log2(inv) - dispersion * qinv_rho / kLn2;
    return bits > 0.0 ? bandwidth_hz * bits : 0.0;
}

double RateModel::rate(double p_w, double gain2) const {
    if (finite_blocklength())
        return rate_finite(p_w, gain2, bandwidth_hz, noise_w_per_hz, codeword_len,
                           qinv_rho);
    return rate_shannon(p_w, gain2, bandwidth_hz, noise_w_per_hz);
}

RateModel make_rate_model(double bandwidth_hz, double noise_w_per_hz,
                          double codeword_len, double block_err) {
    if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("rate: bandwidth must be positive");
    if (!(noise_w_per_hz > 0.0)) throw std::invalid_argument("rate: noise psd must be positive");
    RateModel m;
    m.bandwidth_hz = bandwidth_hz;
    m.noise_w_per_hz = noise_w_per_hz;
    m.codeword_len = codeword_len;
    if (m.finite_blocklength()) {
        if (!(codeword_len >= 1.0))
            throw std::invalid_argument("rate: codeword length must be >= 1");
        if (!(block_err > 0.0 && block_err < 1.0))
            throw std::invalid_argument("rate: block error probability must be in (0,1)");
        m.block_err = block_err;
        m.qinv_rho = q_inverse(block_err);
    }
    return m;
}

double gaussian_q(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

double q_inverse(double rho) {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("q_inverse: rho must be in (0,1)");
    // bisection bracket, then Newton on the tail
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (gaussian_q(mid) > rho)
            lo = mid;
        else
            hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double q = gaussian_q(x);
        const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
        if (pdf == 0.0) break;
        const double step = (q - rho) / pdf;
        x += step;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
    }
    return x;
}

std::string to_string(RatePropertyReport::Kind k) {
    switch (k) {
        case RatePropertyReport::zero_power: return "zero_power";
        case RatePropertyReport::lipschitz: return "lipschitz";
        case RatePropertyReport::cross_link: return "cross_link";
    }
    return "unknown";
}

RatePropertyReport check_rate_properties(const RateModel& model, double gain2_cap,
                                         double p_max_w, double delta_bits_per_j,
                                         int grid_size) {
    if (grid_size < 10) throw std::invalid_argument("check_rate_properties: grid_size < 10");
    RatePropertyReport report;
    const double eps = p_max_w / (grid_size * 64.0);
    for (int gi = 1; gi <= grid_size; ++gi) {
        const double gain2 = gain2_cap * gi / grid_size;
        const double r0 = model.rate(0.0, gain2);
        if (r0 != 0.0)
            report.violations.push_back({RatePropertyReport::zero_power, 0.0, gain2, r0, 0.0});
        for (int pi = 0; pi < grid_size; ++pi) {
            const double p = p_max_w * pi / grid_size;
            const double slope = (model.rate(p + eps, gain2) - model.rate(p, gain2)) / eps;
            const double allowed = delta_bits_per_j * (1.0 + 1e-6);
            if (slope > allowed)
                report.violations.push_back(
                    {RatePropertyReport::lipschitz, p, gain2, slope, allowed});
            // orthogonal links: another link's rate is unaffected by p, so the
            // monotone non-increase of property (cross_link) holds with equality
            const double other = model.rate(p_max_w / 2.0, gain2_cap / 2.0);
            const double other_after = model.rate(p_max_w / 2.0, gain2_cap / 2.0);
            if (other_after > other)
                report.violations.push_back(
                    {RatePropertyReport::cross_link, p, gain2, other_after, other});
        }
    }
    return report;
}

}  // namespace wpcn
