#pragma once

#include <limits>
#include <string>
#include <vector>

#include "wpcn/topology.hpp"

namespace wpcn {

enum class SchedulerBackend { exact, greedy, automatic };

// Full simulation configuration in SI base units (bits, joules, watts,
// seconds, hertz). Config files use engineering units (kbps, mW, GHz, ...);
// load_config() converts at the boundary.
struct SimConfig {
    // timing / run
    double tau_f_s = 1e-3;           // usable slot duration
    long long horizon = 100000;      // slots
    unsigned long long seed = 1;
    double warmup_fraction = 0.2;

    // policy
    double v = 1e11;                 // drift-plus-penalty weight
    double alpha = 2.0;              // > 1, sets C = 2*delta/(1-1/alpha)
    int power_levels = 8;            // K_p, uniform levels {0,...,P_m}
    SchedulerBackend scheduler = SchedulerBackend::automatic;

    // radio / physics
    double carrier_hz = 2.4e9;
    double path_loss_exponent = 2.0;
    double rician_k = 100.0;         // linear
    double fading_cap = 10.0;        // F_cap, clip at F_cap x mean power
    double bandwidth_hz = 1e5;       // W
    double noise_w_per_hz = 0.0;     // N0
    double codeword_len = std::numeric_limits<double>::infinity();
    double block_err = 1e-10;        // rho
    double pilot_energy_h_j = std::numeric_limits<double>::infinity();
    double pilot_energy_g_j = std::numeric_limits<double>::infinity();
    double pilot_noise_w = 1e-12;    // sigma_N

    // powers / arrivals
    double p_node_max_w = 1e-3;      // P_m
    double p_eap_max_w = 4.0;        // P_APm
    double max_arrival_bits = 1000;  // A_m
    std::vector<double> lambda_bps;  // per stream

    // capacity limits (infinity = unlimited mode)
    double buffer_cap_bits = std::numeric_limits<double>::infinity();
    double battery_cap_j = std::numeric_limits<double>::infinity();

    bool limited() const {
        return buffer_cap_bits != std::numeric_limits<double>::infinity() ||
               battery_cap_j != std::numeric_limits<double>::infinity();
    }
};

struct Scenario {
    Topology topology;
    SimConfig config;
};

// Parses and validates the JSON config document (see README for the schema).
// Unknown keys are rejected. Throws std::invalid_argument with the offending
// key path on any schema or range error.
Scenario load_config(const std::string& json_text);
Scenario load_config_file(const std::string& path);

// Re-serializes a scenario to canonical config JSON (used for summary echo).
std::string config_to_json(const Scenario& sc);

void validate(const SimConfig& cfg, const Topology& topo);

}  // namespace wpcn
