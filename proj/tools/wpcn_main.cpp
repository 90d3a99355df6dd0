#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "wpcn/engine.hpp"
#include "wpcn/oracle.hpp"
#include "wpcn/presets.hpp"
#include "wpcn/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitFault = 3;

namespace fs = std::filesystem;

std::string default_out_dir() {
    const char* env = std::getenv("WPCN_OUT_DIR");
    return env ? env : "out";
}

wpcn::Scenario resolve_scenario(const std::string& config_path,
                                const std::string& preset_name) {
    if (!preset_name.empty()) return wpcn::get_preset(preset_name).scenario;
    return wpcn::load_config_file(config_path);
}

int cmd_run(const std::string& config_path, const std::string& preset_name,
            std::optional<long long> seed, std::optional<long long> slots,
            const std::string& out_dir, bool dump_config) {
    wpcn::Scenario sc = resolve_scenario(config_path, preset_name);
    if (seed) sc.config.seed = static_cast<unsigned long long>(*seed);
    if (slots) sc.config.horizon = *slots;
    if (dump_config) {
        std::cout << wpcn::config_to_json(sc) << '\n';
        return kExitOk;
    }

    wpcn::RunOptions opt;
    opt.detail = wpcn::TraceDetail::full;
    const wpcn::RunResult rr = wpcn::run(sc, opt);

    fs::create_directories(out_dir);
    wpcn::write_trace_csv_file((fs::path(out_dir) / "trace.csv").string(), rr.trace,
                               sc.topology);
    std::ofstream sj(fs::path(out_dir) / "summary.json");
    sj << wpcn::summary_to_json(rr.summary, sc) << '\n';

    std::cout << "slots=" << rr.summary.slots
              << " avg_energy_per_slot_j=" << rr.summary.avg_energy_per_slot_j
              << " avg_backlog_bits=" << rr.summary.avg_backlog_bits
              << " drop_fraction=" << rr.summary.drop_fraction
              << (rr.summary.stable ? " stable" : " unstable") << '\n';
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& preset_name,
              const std::string& axis_arg, const std::string& axis2_arg, int runs,
              int threads, const std::string& out_dir) {
    wpcn::Scenario sc;
    std::optional<wpcn::SweepAxis> axis, axis2;
    int default_runs = 3;
    if (!preset_name.empty()) {
        const wpcn::Preset p = wpcn::get_preset(preset_name);
        sc = p.scenario;
        axis = p.axis;
        axis2 = p.axis2;
        default_runs = p.default_runs;
    } else {
        sc = wpcn::load_config_file(config_path);
    }
    auto parse_axis = [](const std::string& arg) -> wpcn::SweepAxis {
        const size_t eq = arg.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("axis must look like name=v1,v2,...");
        wpcn::SweepAxis ax;
        ax.name = arg.substr(0, eq);
        std::stringstream ss(arg.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ',')) ax.values.push_back(std::stod(item));
        return ax;
    };
    if (!axis_arg.empty()) axis = parse_axis(axis_arg);
    if (!axis2_arg.empty()) axis2 = parse_axis(axis2_arg);
    if (!axis) throw std::invalid_argument("sweep needs --axis or a preset with one");
    if (runs <= 0) runs = default_runs;

    const std::vector<wpcn::SweepPoint> points =
        wpcn::sweep(sc, *axis, axis2, runs, threads);

    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / "sweep.csv");
    wpcn::write_sweep_csv(os, points, axis->name, axis2 ? axis2->name : "");
    std::cout << "points=" << points.size() << " runs_per_point=" << runs
              << " -> " << (fs::path(out_dir) / "sweep.csv").string() << '\n';
    return kExitOk;
}

int cmd_check(const std::string& trace_path, const std::string& config_path,
              const std::string& preset_name) {
    const wpcn::Scenario sc = resolve_scenario(config_path, preset_name);
    const wpcn::RateModel model =
        wpcn::make_rate_model(sc.config.bandwidth_hz, sc.config.noise_w_per_hz,
                              sc.config.codeword_len, sc.config.block_err);
    const wpcn::LinkBudget budget = wpcn::compute_link_budget(sc.config, sc.topology);
    const wpcn::DerivedConstants kc =
        wpcn::derive_constants(sc.config, sc.topology, model, budget);

    const wpcn::Trace trace = wpcn::read_trace_csv_file(trace_path, sc.topology);
    const std::vector<wpcn::Violation> violations =
        wpcn::check_lemma2(trace, sc.topology, kc);

    nlohmann::json out = nlohmann::json::array();
    for (const wpcn::Violation& v : violations)
        out.push_back({{"kind", wpcn::to_string(v.kind)},
                       {"slot", v.slot},
                       {"entity", v.entity},
                       {"observed", v.observed},
                       {"required", v.required}});
    std::cout << out.dump(2) << '\n';
    return violations.empty() ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete-time simulator for wirelessly powered multi-hop networks"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir = default_out_dir();
    std::string trace_path, axis_arg, axis2_arg;
    std::optional<long long> seed, slots;
    int runs = 0;
    int threads = 1;
    bool dump_config = false;

    CLI::App* c_run = app.add_subcommand("run", "single seeded run; writes trace + summary");
    c_run->add_option("--config", config_path, "config JSON path");
    c_run->add_option("--preset", preset_name, "named preset");
    c_run->add_option("--seed", seed, "override seed");
    c_run->add_option("--slots", slots, "override horizon");
    c_run->add_option("--out", out_dir, "output directory");
    c_run->add_flag("--dump-config", dump_config, "print the resolved config and exit");

    CLI::App* c_sweep = app.add_subcommand("sweep", "parameter sweep; writes results table");
    c_sweep->add_option("--config", config_path, "config JSON path");
    c_sweep->add_option("--preset", preset_name, "named preset");
    c_sweep->add_option("--axis", axis_arg, "axis as name=v1,v2,...");
    c_sweep->add_option("--axis2", axis2_arg, "second axis");
    c_sweep->add_option("--runs", runs, "runs per point");
    c_sweep->add_option("--threads", threads, "worker threads");
    c_sweep->add_option("--out", out_dir, "output directory");

    CLI::App* c_check = app.add_subcommand("check", "verify policy guarantees on a trace");
    c_check->add_option("--trace", trace_path, "trace CSV path")->required();
    c_check->add_option("--config", config_path, "config JSON path");
    c_check->add_option("--preset", preset_name, "named preset");

    CLI::App* c_presets = app.add_subcommand("presets", "list available presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (c_run->parsed()) {
            if (config_path.empty() && preset_name.empty())
                throw std::invalid_argument("run needs --config or --preset");
            return cmd_run(config_path, preset_name, seed, slots, out_dir, dump_config);
        }
        if (c_sweep->parsed()) {
            if (config_path.empty() && preset_name.empty())
                throw std::invalid_argument("sweep needs --config or --preset");
            return cmd_sweep(config_path, preset_name, axis_arg, axis2_arg, runs,
                             threads, out_dir);
        }
        if (c_check->parsed()) {
            if (config_path.empty() && preset_name.empty())
                throw std::invalid_argument("check needs --config or --preset");
            return cmd_check(trace_path, config_path, preset_name);
        }
        if (c_presets->parsed()) {
            for (const std::string& n : wpcn::preset_names())
                std::cout << n << ": " << wpcn::get_preset(n).description << '\n';
            return kExitOk;
        }
    } catch (const wpcn::InvariantFault& e) {
        std::cerr << "internal invariant fault: " << e.what() << '\n';
        return kExitFault;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFault;
    }
    return kExitUsage;
}
