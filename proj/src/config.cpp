#include "wpcn/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wpcn {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config: " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

double num(const json& obj, const std::string& path, const char* key,
           double fallback, bool required = false) {
    if (!obj.contains(key)) {
        if (required) fail(path + "." + key, "missing");
        return fallback;
    }
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

// null or absent means "infinite"
double num_or_inf(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null())
        return std::numeric_limits<double>::infinity();
    const json& v = obj.at(key);
    if (!v.is_number()) fail(path + "." + key, "expected a number or null");
    return v.get<double>();
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

Scenario load_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: JSON parse error: ") + e.what());
    }
    if (!root.is_object()) fail("$", "top level must be an object");
    reject_unknown(root, "$", {"topology", "physics", "policy", "limits", "run"});

    Scenario sc;
    SimConfig& cfg = sc.config;

    // ---- topology ----
    if (!root.contains("topology")) fail("$.topology", "missing");
    const json& jt = root.at("topology");
    reject_unknown(jt, "topology",
                   {"nodes", "eap_antennas", "links", "streams", "eap_distances_m"});
    const int nodes = static_cast<int>(num(jt, "topology", "nodes", 0, true));
    const int antennas = static_cast<int>(num(jt, "topology", "eap_antennas", 0, true));
    std::vector<Link> links;
    if (jt.contains("links")) {
        if (!jt.at("links").is_array()) fail("topology.links", "expected an array");
        for (const json& jl : jt.at("links")) {
            reject_unknown(jl, "topology.links[]", {"id", "head", "tail", "length_m"});
            links.push_back({static_cast<int>(num(jl, "topology.links[]", "id", 0, true)),
                             static_cast<int>(num(jl, "topology.links[]", "head", 0, true)),
                             static_cast<int>(num(jl, "topology.links[]", "tail", 0, true)),
                             num(jl, "topology.links[]", "length_m", 0, true)});
        }
    }
    std::vector<Stream> streams;
    if (jt.contains("streams")) {
        if (!jt.at("streams").is_array()) fail("topology.streams", "expected an array");
        for (const json& js : jt.at("streams")) {
            reject_unknown(js, "topology.streams[]", {"id", "source", "sink"});
            streams.push_back({static_cast<int>(num(js, "topology.streams[]", "id", 0, true)),
                               static_cast<int>(num(js, "topology.streams[]", "source", 0, true)),
                               static_cast<int>(num(js, "topology.streams[]", "sink", 0, true))});
        }
    }
    std::vector<double> dist;
    if (jt.contains("eap_distances_m")) {
        if (!jt.at("eap_distances_m").is_array())
            fail("topology.eap_distances_m", "expected an array");
        for (const json& v : jt.at("eap_distances_m")) {
            if (!v.is_number()) fail("topology.eap_distances_m[]", "expected a number");
            dist.push_back(v.get<double>());
        }
    }
    try {
        sc.topology = build_topology(nodes, antennas, std::move(links), std::move(streams),
                                     std::move(dist));
    } catch (const std::invalid_argument& e) {
        fail("topology", e.what());
    }

    // ---- physics ----
    const json jp = root.contains("physics") ? root.at("physics") : json::object();
    reject_unknown(jp, "physics",
                   {"carrier_ghz", "path_loss_exponent", "rician_k_db", "fading_cap",
                    "bandwidth_khz", "noise_dbm_per_hz", "codeword_length",
                    "block_error_rate", "pilot_energy_h_uj", "pilot_energy_g_uj",
                    "pilot_noise_dbm"});
    cfg.carrier_hz = num(jp, "physics", "carrier_ghz", 2.4) * 1e9;
    cfg.path_loss_exponent = num(jp, "physics", "path_loss_exponent", 2.0);
    cfg.rician_k = db_to_linear(num(jp, "physics", "rician_k_db", 20.0));
    cfg.fading_cap = num(jp, "physics", "fading_cap", 10.0);
    cfg.bandwidth_hz = num(jp, "physics", "bandwidth_khz", 100.0) * 1e3;
    cfg.noise_w_per_hz = db_to_linear(num(jp, "physics", "noise_dbm_per_hz", -135.0)) * 1e-3;
    cfg.codeword_len = num_or_inf(jp, "physics", "codeword_length");
    cfg.block_err = num(jp, "physics", "block_error_rate", 1e-10);
    cfg.pilot_energy_h_j = num_or_inf(jp, "physics", "pilot_energy_h_uj") * 1e-6;
    cfg.pilot_energy_g_j = num_or_inf(jp, "physics", "pilot_energy_g_uj") * 1e-6;
    cfg.pilot_noise_w = db_to_linear(num(jp, "physics", "pilot_noise_dbm", -90.0)) * 1e-3;

    // ---- policy ----
    const json jpo = root.contains("policy") ? root.at("policy") : json::object();
    reject_unknown(jpo, "policy", {"v", "alpha", "power_levels", "scheduler"});
    cfg.v = num(jpo, "policy", "v", 1e11);
    cfg.alpha = num(jpo, "policy", "alpha", 2.0);
    cfg.power_levels = static_cast<int>(num(jpo, "policy", "power_levels", 8));
    if (jpo.contains("scheduler")) {
        const std::string s = jpo.at("scheduler").get<std::string>();
        if (s == "exact") cfg.scheduler = SchedulerBackend::exact;
        else if (s == "greedy") cfg.scheduler = SchedulerBackend::greedy;
        else if (s == "auto") cfg.scheduler = SchedulerBackend::automatic;
        else fail("policy.scheduler", "expected exact|greedy|auto");
    }

    // ---- limits ----
    const json jl = root.contains("limits") ? root.at("limits") : json::object();
    reject_unknown(jl, "limits", {"buffer_kbytes", "battery_mj"});
    cfg.buffer_cap_bits = num_or_inf(jl, "limits", "buffer_kbytes") * 8.0 * 1e3;
    cfg.battery_cap_j = num_or_inf(jl, "limits", "battery_mj") * 1e-3;

    // ---- run ----
    const json jr = root.contains("run") ? root.at("run") : json::object();
    reject_unknown(jr, "run",
                   {"slot_ms", "arrival_kbps", "max_arrival_bits", "node_power_mw",
                    "eap_power_w", "seed", "slots", "warmup_fraction"});
    cfg.tau_f_s = num(jr, "run", "slot_ms", 1.0) * 1e-3;
    cfg.max_arrival_bits = num(jr, "run", "max_arrival_bits", 1000.0);
    cfg.p_node_max_w = num(jr, "run", "node_power_mw", 1.0) * 1e-3;
    cfg.p_eap_max_w = num(jr, "run", "eap_power_w", 4.0);
    cfg.seed = static_cast<unsigned long long>(num(jr, "run", "seed", 1.0));
    cfg.horizon = static_cast<long long>(num(jr, "run", "slots", 100000.0));
    cfg.warmup_fraction = num(jr, "run", "warmup_fraction", 0.2);
    cfg.lambda_bps.assign(sc.topology.num_streams(), 0.0);
    if (jr.contains("arrival_kbps")) {
        const json& ja = jr.at("arrival_kbps");
        if (ja.is_number()) {
            for (double& l : cfg.lambda_bps) l = ja.get<double>() * 1e3;
        } else if (ja.is_array()) {
            if (ja.size() != cfg.lambda_bps.size())
                fail("run.arrival_kbps", "expected one entry per stream");
            for (size_t i = 0; i < ja.size(); ++i)
                cfg.lambda_bps[i] = ja[i].get<double>() * 1e3;
        } else {
            fail("run.arrival_kbps", "expected a number or an array");
        }
    }

    validate(cfg, sc.topology);
    return sc;
}

Scenario load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return load_config(ss.str());
}

void validate(const SimConfig& cfg, const Topology& topo) {
    if (!(cfg.alpha > 1.0)) throw std::invalid_argument("config: policy.alpha must be > 1");
    if (cfg.power_levels < 2)
        throw std::invalid_argument("config: policy.power_levels must be >= 2");
    if (!(cfg.v >= 0.0)) throw std::invalid_argument("config: policy.v must be >= 0");
    if (!(cfg.fading_cap >= 1.0))
        throw std::invalid_argument("config: physics.fading_cap must be >= 1");
    if (!(cfg.block_err > 0.0 && cfg.block_err < 1.0))
        throw std::invalid_argument("config: physics.block_error_rate must be in (0,1)");
    if (!(cfg.tau_f_s > 0.0)) throw std::invalid_argument("config: run.slot_ms must be positive");
    if (!(cfg.carrier_hz > 0.0 && cfg.bandwidth_hz > 0.0 && cfg.noise_w_per_hz > 0.0 &&
          cfg.p_node_max_w > 0.0 && cfg.p_eap_max_w > 0.0 && cfg.pilot_noise_w > 0.0))
        throw std::invalid_argument("config: physical quantities must be positive");
    if (!(cfg.max_arrival_bits > 0.0))
        throw std::invalid_argument("config: run.max_arrival_bits must be positive");
    if (!(cfg.rician_k >= 0.0))
        throw std::invalid_argument("config: physics.rician_k_db invalid");
    if (cfg.horizon < 0) throw std::invalid_argument("config: run.slots must be >= 0");
    if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 1.0))
        throw std::invalid_argument("config: run.warmup_fraction must be in [0,1)");
    if (cfg.lambda_bps.size() != static_cast<size_t>(topo.num_streams()))
        throw std::invalid_argument("config: arrival rates must match stream count");
    for (double l : cfg.lambda_bps) {
        if (!(l >= 0.0)) throw std::invalid_argument("config: arrival rates must be >= 0");
        if (l * cfg.tau_f_s > cfg.max_arrival_bits)
            throw std::invalid_argument(
                "config: arrival_kbps * slot exceeds max_arrival_bits");
    }
    if (!(cfg.buffer_cap_bits > 0.0))
        throw std::invalid_argument("config: limits.buffer_kbytes must be positive");
    if (!(cfg.battery_cap_j > 0.0))
        throw std::invalid_argument("config: limits.battery_mj must be positive");
    if (!(cfg.pilot_energy_h_j > 0.0) || !(cfg.pilot_energy_g_j > 0.0))
        throw std::invalid_argument("config: pilot energies must be positive");
}

std::string config_to_json(const Scenario& sc) {
    const SimConfig& c = sc.config;
    const Topology& t = sc.topology;
    json jt;
    jt["nodes"] = t.node_count;
    jt["eap_antennas"] = t.eap_antennas;
    jt["links"] = json::array();
    for (const Link& l : t.links)
        jt["links"].push_back({{"id", l.id}, {"head", l.head}, {"tail", l.tail},
                               {"length_m", l.length_m}});
    jt["streams"] = json::array();
    for (const Stream& s : t.streams)
        jt["streams"].push_back({{"id", s.id}, {"source", s.source}, {"sink", s.sink}});
    jt["eap_distances_m"] = t.eap_distance_m;

    auto inf_to_null = [](double v) {
        return v == std::numeric_limits<double>::infinity() ? json() : json(v);
    };
    json jp;
    jp["carrier_ghz"] = c.carrier_hz / 1e9;
    jp["path_loss_exponent"] = c.path_loss_exponent;
    jp["rician_k_db"] = 10.0 * std::log10(c.rician_k);
    jp["fading_cap"] = c.fading_cap;
    jp["bandwidth_khz"] = c.bandwidth_hz / 1e3;
    jp["noise_dbm_per_hz"] = 10.0 * std::log10(c.noise_w_per_hz * 1e3);
    jp["codeword_length"] = inf_to_null(c.codeword_len);
    jp["block_error_rate"] = c.block_err;
    jp["pilot_energy_h_uj"] = inf_to_null(c.pilot_energy_h_j * 1e6);
    jp["pilot_energy_g_uj"] = inf_to_null(c.pilot_energy_g_j * 1e6);
    jp["pilot_noise_dbm"] = 10.0 * std::log10(c.pilot_noise_w * 1e3);

    json jpo;
    jpo["v"] = c.v;
    jpo["alpha"] = c.alpha;
    jpo["power_levels"] = c.power_levels;
    jpo["scheduler"] = c.scheduler == SchedulerBackend::exact    ? "exact"
                       : c.scheduler == SchedulerBackend::greedy ? "greedy"
                                                                 : "auto";
    json jli;
    jli["buffer_kbytes"] = inf_to_null(c.buffer_cap_bits / 8e3);
    jli["battery_mj"] = inf_to_null(c.battery_cap_j * 1e3);

    json jr;
    jr["slot_ms"] = c.tau_f_s * 1e3;
    json arr = json::array();
    for (double l : c.lambda_bps) arr.push_back(l / 1e3);
    jr["arrival_kbps"] = arr;
    jr["max_arrival_bits"] = c.max_arrival_bits;
    jr["node_power_mw"] = c.p_node_max_w * 1e3;
    jr["eap_power_w"] = c.p_eap_max_w;
    jr["seed"] = c.seed;
    jr["slots"] = c.horizon;
    jr["warmup_fraction"] = c.warmup_fraction;

    json root;
    root["topology"] = jt;
    root["physics"] = jp;
    root["policy"] = jpo;
    root["limits"] = jli;
    root["run"] = jr;
    return root.dump(2);
}

}  // namespace wpcn
