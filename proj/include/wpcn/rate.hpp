#pragma once

#include <limits>
#include <string>
#include <vector>

namespace wpcn {

// Rate-power function of a single data link. With a finite codeword length
// the normal-approximation dispersion penalty applies; codeword_len = inf
// selects the plain Shannon form. Rates are in bits/second, powers in watts,
// gains are linear power gains |g|^2.
struct RateModel {
    double bandwidth_hz = 0.0;     // W
    double noise_w_per_hz = 0.0;   // N0
    double codeword_len = std::numeric_limits<double>::infinity();
    double block_err = 0.0;        // rho, used only when codeword_len finite
    double qinv_rho = 0.0;         // precomputed Q^-1(rho)

    bool finite_blocklength() const {
        return codeword_len != std::numeric_limits<double>::infinity();
    }
    double rate(double p_w, double gain2) const;
};

RateModel make_rate_model(double bandwidth_hz, double noise_w_per_hz,
                          double codeword_len, double block_err);

double rate_shannon(double p_w, double gain2, double bandwidth_hz,
                    double noise_w_per_hz);

// Normal-approximation rate, clamped at zero where the dispersion penalty
// would drive it negative. Both terms are in bits (log2 / ln2 normalization),
// so codeword_len -> inf recovers rate_shannon.
double rate_finite(double p_w, double gain2, double bandwidth_hz,
                   double noise_w_per_hz, double codeword_len,
                   double qinv_rho);

// Gaussian tail Q(x) and its inverse; |Q(q_inverse(rho)) - rho| <= 1e-14*rho.
double gaussian_q(double x);
double q_inverse(double rho);

// Structural properties every admissible rate-power function must satisfy:
// zero power gives zero rate, the slope is bounded by delta, and raising one
// link's power never raises another link's rate (equality under orthogonal
// links, which is what this model family provides).
struct RatePropertyReport {
    enum Kind { zero_power, lipschitz, cross_link };
    struct Violation {
        Kind kind;
        double p;
        double gain2;
        double observed;
        double allowed;
    };
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

std::string to_string(RatePropertyReport::Kind k);

RatePropertyReport check_rate_properties(const RateModel& model, double gain2_cap,
                                         double p_max_w, double delta_bits_per_j,
                                         int grid_size);

}  // namespace wpcn
