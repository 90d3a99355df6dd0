#include "wpcn/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wpcn {

std::vector<double> routing_weights(const std::vector<double>& u_virt,
                                    const std::vector<double>& z,
                                    const Topology& topo) {
    const int s_count = topo.num_streams();
    std::vector<double> w(static_cast<size_t>(topo.num_links()) * s_count, 0.0);
    for (int l = 0; l < topo.num_links(); ++l) {
        const int h = topo.head_of(l);
        const int t = topo.tail_of(l);
        const double dz = z[h] - z[t];
        for (int s = 0; s < s_count; ++s) {
            const double du = u_virt[static_cast<size_t>(h) * s_count + s] -
                              u_virt[static_cast<size_t>(t) * s_count + s];
            w[static_cast<size_t>(l) * s_count + s] = dz + du;
        }
    }
    return w;
}

void select_streams(const std::vector<double>& weights, const Topology& topo,
                    std::vector<int>& stream_out, std::vector<double>& weight_out) {
    const int s_count = topo.num_streams();
    stream_out.assign(topo.num_links(), 0);
    weight_out.assign(topo.num_links(), 0.0);
    for (int l = 0; l < topo.num_links(); ++l) {
        int best_s = 0;
        double best_w = weights[static_cast<size_t>(l) * s_count];
        for (int s = 1; s < s_count; ++s) {
            const double w = weights[static_cast<size_t>(l) * s_count + s];
            if (w > best_w) {
                best_w = w;
                best_s = s;
            }
        }
        stream_out[l] = best_s;
        weight_out[l] = best_w > 0.0 ? best_w : 0.0;
    }
}

namespace {

struct Candidate {
    int link = 0;
    double power = 0.0;
    double rate = 0.0;
    double score = 0.0;  // W_l * rate - C * Z_head * power, > 0
};

// exhaustive branch-and-bound over matchings, visiting include-before-exclude
// in ascending link order so the first optimum found is the lexicographically
// smallest active set
struct MatchingSearch {
    const std::vector<Candidate>& cand;
    const Topology& topo;
    std::vector<double> suffix;   // best-case remaining score
    std::vector<char> chosen, best_chosen;
    double best = 0.0;

    explicit MatchingSearch(const std::vector<Candidate>& c, const Topology& t)
        : cand(c), topo(t) {
        suffix.assign(cand.size() + 1, 0.0);
        for (int i = static_cast<int>(cand.size()) - 1; i >= 0; --i)
            suffix[i] = suffix[i + 1] + cand[i].score;
        chosen.assign(cand.size(), 0);
        best_chosen = chosen;
    }

    bool conflicts(int idx) const {
        for (size_t j = 0; j < cand.size(); ++j)
            if (chosen[j] && topo.share_node(cand[idx].link, cand[j].link)) return true;
        return false;
    }

    void dfs(size_t idx, double acc) {
        if (acc + suffix[idx] <= best) return;  // cannot strictly improve
        if (idx == cand.size()) {
            best = acc;
            best_chosen = chosen;
            return;
        }
        if (!conflicts(static_cast<int>(idx))) {
            chosen[idx] = 1;
            dfs(idx + 1, acc + cand[idx].score);
            chosen[idx] = 0;
        }
        dfs(idx + 1, acc);
    }
};

}  // namespace

ScheduleResult schedule_links(const std::vector<double>& z,
                              const std::vector<double>& weight,
                              const std::vector<int>& stream_sel, const CVec& g_est,
                              const RateModel& model, int power_levels,
                              double p_max_w, double conv, const Topology& topo,
                              SchedulerBackend backend) {
    if (power_levels < 2)
        throw std::invalid_argument("schedule_links: need at least the {0, P_m} levels");
    const int l_count = topo.num_links();
    ScheduleResult res;
    res.power.assign(l_count, 0.0);
    res.rate.assign(l_count, 0.0);
    res.score.assign(l_count, 0.0);

    std::vector<Candidate> cand;
    for (int l = 0; l < l_count; ++l) {
        if (!(weight[l] > 0.0)) continue;
        const double g2 = std::norm(g_est[l]);
        const double zh = z[topo.head_of(l)];
        Candidate c;
        c.link = l;
        for (int k = 1; k < power_levels; ++k) {
            const double p = p_max_w * k / (power_levels - 1);
            const double r = model.rate(p, g2);
            const double score = weight[l] * r - conv * zh * p;
            if (score > c.score) {
                c.score = score;
                c.power = p;
                c.rate = r;
            }
        }
        if (c.score > 0.0) cand.push_back(c);
    }

    double total = 0.0;
    const bool exact = backend == SchedulerBackend::exact ||
                       (backend == SchedulerBackend::automatic && l_count <= 20);
    if (exact) {
        MatchingSearch search(cand, topo);
        search.dfs(0, 0.0);
        total = search.best;
        for (size_t i = 0; i < cand.size(); ++i) {
            if (!search.best_chosen[i]) continue;
            const Candidate& c = cand[i];
            res.power[c.link] = c.power;
            res.rate[c.link] = c.rate;
            res.score[c.link] = c.score;
        }
    } else {
        std::vector<int> order(cand.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (cand[a].score != cand[b].score) return cand[a].score > cand[b].score;
            return cand[a].link < cand[b].link;
        });
        std::vector<int> taken;
        for (int i : order) {
            bool clash = false;
            for (int j : taken)
                if (topo.share_node(cand[i].link, cand[j].link)) {
                    clash = true;
                    break;
                }
            if (clash) continue;
            taken.push_back(i);
            const Candidate& c = cand[i];
            res.power[c.link] = c.power;
            res.rate[c.link] = c.rate;
            res.score[c.link] = c.score;
        }
        // accumulate in ascending link order to match the exact backend's
        // summation order
        for (int l = 0; l < l_count; ++l) total += res.score[l];
    }
    res.objective = -total;
    (void)stream_sel;
    return res;
}

BeamResult beamform(const std::vector<double>& z, const CMat& h_est, double conv) {
    const int n_count = h_est.rows;
    const int m = h_est.cols;
    CMat h_sum(m, m);
    for (int n = 0; n < n_count; ++n) {
        const double w = conv * z[n];
        for (int j = 0; j < m; ++j) {
            const cxd hj = h_est(n, j);
            for (int k = 0; k < m; ++k)
                h_sum(j, k) += w * hj * std::conj(h_est(n, k));
        }
    }
    const EigResult eig = principal_eigenpair(h_sum);

    BeamResult out;
    out.w.resize(m);
    for (int j = 0; j < m; ++j) out.w[j] = std::conj(eig.vector[j]);
    out.gain.assign(n_count, 0.0);
    for (int n = 0; n < n_count; ++n) {
        cxd dot = 0.0;
        for (int j = 0; j < m; ++j) dot += out.w[j] * h_est(n, j);
        out.gain[n] = std::norm(dot);
    }
    return out;
}

double eap_power(double v, const std::vector<double>& gain,
                 const std::vector<double>& z, double conv, double p_eap_max_w) {
    double sum = 0.0;
    for (size_t n = 0; n < gain.size(); ++n) sum += gain[n] * z[n];
    return v < conv * sum ? p_eap_max_w : 0.0;
}

void time_share(double f_energy, double f_data, double tau_f, double& tau_e,
                double& tau_d) {
    if (f_energy <= f_data) {
        tau_e = tau_f;
        tau_d = 0.0;
    } else {
        tau_e = 0.0;
        tau_d = tau_f;
    }
}

double intake_cap(double z_n, double mu_max, double conv, long long slot) {
    if (z_n < mu_max)
        throw InvariantFault(slot, "imbalance below mu_max while computing intake cap");
    return (z_n - mu_max) / conv;
}

ControlAction Controller::step(const NetworkState& st, const ChannelState& csi_est) const {
    const std::vector<double> z = imbalance_vector(st, kc_.conv);
    const std::vector<double> weights = routing_weights(st.u_virt, z, topo_);

    ControlAction a;
    select_streams(weights, topo_, a.link_stream, a.link_score);
    std::vector<double> w_l = a.link_score;  // reuse as W_l storage

    const ScheduleResult sched =
        schedule_links(z, w_l, a.link_stream, csi_est.g, model_, cfg_.power_levels,
                       cfg_.p_node_max_w, kc_.conv, topo_, cfg_.scheduler);
    a.link_power = sched.power;
    a.link_rate = sched.rate;
    a.link_score = sched.score;
    a.f_data = sched.objective;

    const BeamResult beam = beamform(z, csi_est.h, kc_.conv);
    a.beam = beam.w;
    a.beam_gain = beam.gain;
    a.p_ap = eap_power(cfg_.v, beam.gain, z, kc_.conv, cfg_.p_eap_max_w);
    double gain_sum = 0.0;
    for (size_t n = 0; n < beam.gain.size(); ++n) gain_sum += beam.gain[n] * z[n];
    a.f_energy = a.p_ap * (cfg_.v - kc_.conv * gain_sum);

    time_share(a.f_energy, a.f_data, cfg_.tau_f_s, a.tau_e, a.tau_d);

    a.intake_cap.resize(topo_.node_count);
    for (int n = 0; n < topo_.node_count; ++n)
        a.intake_cap[n] = intake_cap(z[n], kc_.mu_max, kc_.conv, st.slot);

    if (a.energy_slot()) {
        std::fill(a.link_power.begin(), a.link_power.end(), 0.0);
        std::fill(a.link_rate.begin(), a.link_rate.end(), 0.0);
        std::fill(a.link_score.begin(), a.link_score.end(), 0.0);
    }
    return a;
}

}  // namespace wpcn
