#include "wpcn/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace wpcn {

unsigned long long mix_seed(unsigned long long seed, unsigned long long stream) {
    unsigned long long z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> sample_arrivals(std::mt19937_64& rng, const SimConfig& cfg,
                                    const Topology& topo) {
    const int s_count = topo.num_streams();
    std::vector<double> a(static_cast<size_t>(topo.node_count) * s_count, 0.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int s = 0; s < s_count; ++s) {
        const double prob = cfg.lambda_bps[s] * cfg.tau_f_s / cfg.max_arrival_bits;
        const double draw = u01(rng);
        if (draw < prob)
            a[static_cast<size_t>(topo.source_of(s)) * s_count + s] = cfg.max_arrival_bits;
    }
    return a;
}

Realization realize_transfer(const ControlAction& action, const ChannelState& truth,
                             const RateModel& model, const Topology& topo,
                             double tau_f_s) {
    const int n_count = topo.node_count;
    const int l_count = topo.num_links();
    Realization r;
    r.flow.link_bits.assign(l_count, 0.0);
    r.flow.link_stream.assign(l_count, -1);
    r.flow.phi_out_sched.assign(n_count, 0.0);
    r.flow.phi_in.assign(n_count, 0.0);
    r.flow.arrivals.assign(static_cast<size_t>(n_count) * topo.num_streams(), 0.0);
    r.e_recv.assign(n_count, 0.0);
    r.link_rate_real.assign(l_count, 0.0);

    if (action.energy_slot()) {
        r.e_ap = action.tau_e * action.p_ap;
        if (r.e_ap > 0.0) {
            for (int n = 0; n < n_count; ++n) {
                cxd dot = 0.0;
                for (int m = 0; m < truth.h.cols; ++m)
                    dot += action.beam[m] * truth.h(n, m);
                r.e_recv[n] = std::norm(dot) * r.e_ap;
                r.flow.phi_in[n] = std::min(r.e_recv[n], action.intake_cap[n]);
            }
        }
        return r;
    }

    for (int l = 0; l < l_count; ++l) {
        const double p = action.link_power[l];
        if (!(p > 0.0)) continue;
        const double true_rate = model.rate(p, std::norm(truth.g[l]));
        const double realized = std::min(action.link_rate[l], true_rate);
        r.link_rate_real[l] = realized;
        r.flow.link_bits[l] = action.tau_d * realized;
        r.flow.link_stream[l] = action.link_stream[l];
    }
    for (int n = 0; n < n_count; ++n) {
        double p_sum = 0.0;
        for (int l : topo.out_links[n]) p_sum += action.link_power[l];
        r.flow.phi_out_sched[n] = action.tau_d * p_sum;
    }
    (void)tau_f_s;
    return r;
}

namespace {

void fill_record(SlotRecord& rec, const NetworkState& st, const ControlAction& act,
                 const Realization& real, const std::vector<double>& z,
                 const StepResult& step, TraceDetail detail) {
    rec.energy_slot = act.energy_slot();
    rec.e_ap = real.e_ap;
    rec.drop_buffer_bits = step.drop_buffer_bits;
    rec.drop_energy_bits = step.drop_energy_bits;
    rec.u_virt = st.u_virt;
    rec.u_real = st.u_real;
    rec.e_virt = st.e_virt;
    rec.b_real = st.b_real;
    rec.z = z;
    rec.phi_in = step.phi_in_applied;
    rec.phi_out = real.flow.phi_out_sched;
    if (detail == TraceDetail::full) {
        rec.e_recv = real.e_recv;
        rec.link_power = act.link_power;
        rec.link_rate_sched = act.link_rate;
        rec.link_rate_real = real.link_rate_real;
        rec.link_stream = act.link_stream;
    } else {
        rec.link_stream = act.link_stream;
        rec.link_rate_sched = act.link_rate;
    }
}

struct Ols {
    double slope = 0.0;
    double stderr_ = 0.0;
};

Ols ols_slope(const std::vector<double>& y) {
    Ols o;
    const size_t n = y.size();
    if (n < 3) return o;
    const double xm = (n - 1) / 2.0;
    double ym = 0.0;
    for (double v : y) ym += v;
    ym /= n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = i - xm;
        sxx += dx * dx;
        sxy += dx * (y[i] - ym);
    }
    o.slope = sxy / sxx;
    double sse = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double fit = ym + o.slope * (i - xm);
        sse += (y[i] - fit) * (y[i] - fit);
    }
    o.stderr_ = std::sqrt(sse / (n - 2) / sxx);
    return o;
}

}  // namespace

RunResult run(const Scenario& scenario, const RunOptions& options) {
    const Topology& topo = scenario.topology;
    const SimConfig& cfg = scenario.config;
    validate(cfg, topo);

    const RateModel model = make_rate_model(cfg.bandwidth_hz, cfg.noise_w_per_hz,
                                            cfg.codeword_len, cfg.block_err);
    const LinkBudget budget = compute_link_budget(cfg, topo);
    const DerivedConstants kc = derive_constants(cfg, topo, model, budget);
    if (cfg.buffer_cap_bits < kc.u0)
        throw std::invalid_argument(
            "run: buffer capacity is below the dummy-bit initialization level");

    std::mt19937_64 rng(mix_seed(cfg.seed, 0));
    ChannelSampler sampler(topo, cfg, budget.beta_g, budget.beta_h, rng);
    Controller controller(topo, cfg, model, kc);
    NetworkState st = init_state(topo, kc);

    const bool limited = cfg.limited();
    const int s_count = topo.num_streams();

    RunResult out;
    if (options.detail != TraceDetail::none)
        out.trace.reserve(static_cast<size_t>(cfg.horizon));

    const long long warmup =
        static_cast<long long>(std::floor(cfg.horizon * cfg.warmup_fraction));
    double energy_sum = 0.0, backlog_sum = 0.0, vbacklog_sum = 0.0;
    long long energy_slots = 0;
    double total_eap = 0.0, total_stored = 0.0;
    std::vector<double> link_payload_bits(topo.num_links(), 0.0);
    std::vector<double> backlog_series;
    backlog_series.reserve(static_cast<size_t>(cfg.horizon - warmup + 1));

    for (long long t = 0; t < cfg.horizon; ++t) {
        const ChannelState truth = sampler.sample(rng, t);
        const EstimatedChannelState est = sampler.estimate(truth, rng);
        const ControlAction action = controller.step(st, est.value);
        Realization real = realize_transfer(action, truth, model, topo, cfg.tau_f_s);
        real.flow.arrivals = sample_arrivals(rng, cfg, topo);

        const std::vector<double> z = imbalance_vector(st, kc.conv);

        SlotRecord rec;
        rec.slot = t;

        // payload accounting per link before the dummy counters move
        std::vector<double> dummy_before;
        if (t >= warmup) dummy_before = st.u_dummy;

        const bool want_rec = options.detail != TraceDetail::none || options.observer;
        if (want_rec) {
            // snapshot before stepping; phi_in filled from the step result below
            fill_record(rec, st, action, real, z, StepResult{}, options.detail);
        }

        StepResult step;
        if (limited)
            step = step_limited(st, real.flow, cfg.buffer_cap_bits, cfg.battery_cap_j,
                                topo, kc);
        else
            step = step_unlimited(st, real.flow, topo, kc);

        if (want_rec) {
            rec.phi_in = step.phi_in_applied;
            rec.drop_buffer_bits = step.drop_buffer_bits;
            rec.drop_energy_bits = step.drop_energy_bits;
        }

        // metrics
        total_eap += real.e_ap;
        for (int n = 0; n < topo.node_count; ++n) total_stored += step.phi_in_applied[n];
        if (action.energy_slot()) ++energy_slots;
        if (t >= warmup) {
            energy_sum += real.e_ap;
            double bl = 0.0, vbl = 0.0;
            for (double v : st.u_real) bl += v;
            for (double v : st.u_virt) vbl += v;
            backlog_sum += bl;
            vbacklog_sum += vbl;
            backlog_series.push_back(bl);
            for (int l = 0; l < topo.num_links(); ++l) {
                if (real.flow.link_bits[l] == 0.0) continue;
                const int s = real.flow.link_stream[l];
                const size_t hi = static_cast<size_t>(topo.head_of(l)) * s_count + s;
                const double dummy_moved =
                    std::min(dummy_before[hi], real.flow.link_bits[l]);
                link_payload_bits[l] += real.flow.link_bits[l] - dummy_moved;
            }
        }

        if (options.observer) options.observer(rec);
        if (options.detail != TraceDetail::none) out.trace.push_back(std::move(rec));
    }

    RunSummary& s = out.summary;
    s.slots = cfg.horizon;
    s.warmup_slots = warmup;
    const long long measured = cfg.horizon - warmup;
    if (measured > 0) {
        s.avg_energy_per_slot_j = energy_sum / measured;
        s.avg_backlog_bits = backlog_sum / measured;
        s.avg_virtual_backlog_bits = vbacklog_sum / measured;
        s.link_throughput_bps.assign(topo.num_links(), 0.0);
        for (int l = 0; l < topo.num_links(); ++l)
            s.link_throughput_bps[l] = link_payload_bits[l] / (measured * cfg.tau_f_s);
    } else {
        double bl = 0.0;
        for (double v : st.u_real) bl += v;
        s.avg_backlog_bits = bl;
        s.link_throughput_bps.assign(topo.num_links(), 0.0);
    }
    s.energy_slot_fraction = cfg.horizon > 0 ? double(energy_slots) / cfg.horizon : 0.0;
    s.total_eap_energy_j = total_eap;
    s.total_stored_energy_j = total_stored;
    double dropped_b = 0.0, dropped_e = 0.0, arrived = 0.0;
    for (double v : st.drop_buffer) dropped_b += v;
    for (double v : st.drop_energy) dropped_e += v;
    for (double v : st.arrived) arrived += v;
    s.dropped_buffer_bits = dropped_b;
    s.dropped_energy_bits = dropped_e;
    s.arrived_bits = arrived;
    s.drop_fraction = arrived > 0.0 ? (dropped_b + dropped_e) / arrived : 0.0;
    s.delivered_bits = st.delivered;

    const Ols ols = ols_slope(backlog_series);
    s.backlog_slope_bits_per_slot = ols.slope;
    s.backlog_slope_stderr = ols.stderr_;
    s.stable = measured >= 3 && ols.slope <= 2.0 * ols.stderr_;

    out.final_state = std::move(st);
    return out;
}

Scenario apply_axis(Scenario sc, const std::string& axis, double value) {
    const double inf = std::numeric_limits<double>::infinity();
    if (axis == "v") {
        sc.config.v = value;
    } else if (axis == "arrival_kbps") {
        for (double& l : sc.config.lambda_bps) l = value * 1e3;
    } else if (axis == "buffer_kbytes") {
        sc.config.buffer_cap_bits = value <= 0.0 ? inf : value * 8e3;
    } else if (axis == "battery_mj") {
        sc.config.battery_cap_j = value <= 0.0 ? inf : value * 1e-3;
    } else if (axis == "codeword_length") {
        sc.config.codeword_len = value <= 0.0 ? inf : value;
    } else if (axis == "eap_power_w") {
        sc.config.p_eap_max_w = value;
    } else if (axis == "pilot_energy_uj") {
        sc.config.pilot_energy_h_j = value <= 0.0 ? inf : value * 1e-6;
        sc.config.pilot_energy_g_j = sc.config.pilot_energy_h_j;
    } else if (axis == "rician_k_db") {
        sc.config.rician_k = std::pow(10.0, value / 10.0);
    } else if (axis == "eap_antennas") {
        Topology t = sc.topology;
        sc.topology = build_topology(t.node_count, static_cast<int>(value), t.links,
                                     t.streams, t.eap_distance_m);
    } else {
        throw std::invalid_argument("sweep: unknown axis " + axis);
    }
    return sc;
}

std::vector<SweepPoint> sweep(const Scenario& base, const SweepAxis& axis,
                              const std::optional<SweepAxis>& axis2, int runs,
                              int threads) {
    if (axis.values.empty()) throw std::invalid_argument("sweep: empty axis");
    if (runs < 1) throw std::invalid_argument("sweep: runs must be >= 1");
    const std::vector<double> outer = axis.values;
    const std::vector<double> inner =
        axis2 ? axis2->values : std::vector<double>{0.0};

    struct Task {
        size_t combo;
        int run;
        Scenario sc;
    };
    std::vector<Task> tasks;
    size_t combo = 0;
    for (double a : outer) {
        for (double b : inner) {
            Scenario sc = apply_axis(base, axis.name, a);
            if (axis2) sc = apply_axis(std::move(sc), axis2->name, b);
            for (int r = 0; r < runs; ++r) {
                Task t{combo, r, sc};
                t.sc.config.seed = mix_seed(base.config.seed, combo * 10007ULL + r);
                tasks.push_back(std::move(t));
            }
            ++combo;
        }
    }

    struct Metrics {
        double energy = 0.0, backlog = 0.0, drop = 0.0;
        bool stable = false;
    };
    std::vector<Metrics> results(tasks.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            const RunResult rr = run(tasks[i].sc);
            results[i] = {rr.summary.avg_energy_per_slot_j, rr.summary.avg_backlog_bits,
                          rr.summary.drop_fraction, rr.summary.stable};
        }
    };
    const int t_count = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int i = 0; i < t_count - 1; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();

    std::vector<SweepPoint> points(combo);
    for (size_t i = 0; i < tasks.size(); ++i) {
        const size_t c = tasks[i].combo;
        SweepPoint& p = points[c];
        p.axis_value = outer[c / inner.size()];
        p.axis2_value = axis2 ? inner[c % inner.size()] : 0.0;
        ++p.runs;
        p.energy_mean += results[i].energy;
        p.backlog_mean += results[i].backlog;
        p.drop_mean += results[i].drop;
        if (results[i].stable) ++p.stable_runs;
    }
    for (SweepPoint& p : points) {
        p.energy_mean /= p.runs;
        p.backlog_mean /= p.runs;
        p.drop_mean /= p.runs;
    }
    for (size_t i = 0; i < tasks.size(); ++i) {
        const size_t c = tasks[i].combo;
        SweepPoint& p = points[c];
        p.energy_se += (results[i].energy - p.energy_mean) * (results[i].energy - p.energy_mean);
        p.backlog_se += (results[i].backlog - p.backlog_mean) * (results[i].backlog - p.backlog_mean);
        p.drop_se += (results[i].drop - p.drop_mean) * (results[i].drop - p.drop_mean);
    }
    for (SweepPoint& p : points) {
        if (p.runs > 1) {
            p.energy_se = std::sqrt(p.energy_se / (p.runs - 1) / p.runs);
            p.backlog_se = std::sqrt(p.backlog_se / (p.runs - 1) / p.runs);
            p.drop_se = std::sqrt(p.drop_se / (p.runs - 1) / p.runs);
        } else {
            p.energy_se = p.backlog_se = p.drop_se = 0.0;
        }
    }
    return points;
}

}  // namespace wpcn
