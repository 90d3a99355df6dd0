#include "wpcn/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace wpcn {

namespace {

Scenario base_scenario() {
    Scenario sc;
    sc.topology = demo_topology(/*eap_antennas=*/20, /*hop_length_m=*/12.0);
    SimConfig& c = sc.config;
    c.tau_f_s = 1e-3;
    c.horizon = 200000;
    c.seed = 1;
    c.warmup_fraction = 0.2;
    c.v = 1e11;
    c.alpha = 2.0;
    c.power_levels = 8;
    c.carrier_hz = 2.4e9;
    c.path_loss_exponent = 2.0;
    c.rician_k = std::pow(10.0, 2.0);  // 20 dB
    c.fading_cap = 10.0;
    c.bandwidth_hz = 1e5;
    c.noise_w_per_hz = std::pow(10.0, -13.5) * 1e-3;  // -135 dBm/Hz
    c.block_err = 1e-10;
    c.pilot_noise_w = std::pow(10.0, -9.0) * 1e-3;    // -90 dBm
    c.p_node_max_w = 1e-3;
    c.p_eap_max_w = 4.0;
    c.max_arrival_bits = 1000.0;
    c.lambda_bps = {2000.0, 2000.0};
    return sc;
}

std::vector<double> log_space(double lo, double hi, int points) {
    std::vector<double> v;
    for (int i = 0; i < points; ++i)
        v.push_back(lo * std::pow(hi / lo, double(i) / (points - 1)));
    return v;
}

Scenario with_k_db(Scenario sc, double k_db) {
    sc.config.rician_k = std::pow(10.0, k_db / 10.0);
    return sc;
}

Scenario with_lambda(Scenario sc, double kbps) {
    for (double& l : sc.config.lambda_bps) l = kbps * 1e3;
    return sc;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"fig4-tradeoff", "fig5-samplepath", "fig6-flow",     "fig7-csi",
            "fig8-droprate", "fig9-capacity",   "fig10-blocklength"};
}

Preset get_preset(const std::string& name) {
    Preset p;
    p.name = name;
    if (name == "fig4-tradeoff") {
        p.description = "energy vs backlog trade-off: V sweep at several arrival rates";
        p.scenario = base_scenario();
        p.scenario.config.horizon = 300000;
        p.axis = SweepAxis{"v", log_space(1e9, 3e11, 7)};
        p.axis2 = SweepAxis{"arrival_kbps", {1.0, 3.0, 5.0}};
        p.default_runs = 5;
    } else if (name == "fig5-samplepath") {
        p.description = "sample path of queue backlog and battery level";
        p.scenario = with_lambda(with_k_db(base_scenario(), 0.0), 5.0);
        p.scenario.config.v = 3e11;
        p.scenario.config.horizon = 200000;
        p.default_runs = 1;
    } else if (name == "fig6-flow") {
        p.description = "per-link mean throughput of each stream";
        p.scenario = with_lambda(base_scenario(), 2.0);
        p.scenario.config.v = 1e11;
        p.default_runs = 1;
    } else if (name == "fig7-csi") {
        p.description = "energy cost of imperfect CSI vs pilot energy";
        p.scenario = with_lambda(with_k_db(base_scenario(), 10.0), 1.0);
        p.scenario.config.horizon = 100000;
        p.axis = SweepAxis{"pilot_energy_uj", log_space(1.0, 1e7, 8)};
        p.axis2 = SweepAxis{"rician_k_db", {5.0, 10.0, 20.0}};
        p.default_runs = 3;
    } else if (name == "fig8-droprate") {
        p.description = "drop fraction vs buffer size and battery capacity";
        p.scenario = with_lambda(with_k_db(base_scenario(), 0.0), 5.0);
        p.scenario.config.v = 3e11;
        p.scenario.config.horizon = 150000;
        p.axis = SweepAxis{"buffer_kbytes", {25.0, 50.0, 100.0, 200.0, 400.0}};
        p.axis2 = SweepAxis{"battery_mj", {0.4, 0.8, 1.2}};
        p.default_runs = 3;
    } else if (name == "fig9-capacity") {
        p.description = "backlog/arrival ratio vs arrival rate (capacity wall)";
        p.scenario = base_scenario();
        p.scenario.config.v = 1e11;
        p.scenario.config.horizon = 150000;
        p.axis = SweepAxis{"arrival_kbps", {0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0}};
        p.axis2 = SweepAxis{"eap_power_w", {3.0, 4.0, 5.0}};
        p.default_runs = 3;
    } else if (name == "fig10-blocklength") {
        p.description = "energy cost of finite codeword length";
        p.scenario = with_lambda(base_scenario(), 0.5);
        p.scenario.config.horizon = 100000;
        p.axis = SweepAxis{"codeword_length", {200.0, 500.0, 2000.0, 1e4, 1e6, 0.0}};
        p.default_runs = 3;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return p;
}

}  // namespace wpcn
