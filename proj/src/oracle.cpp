#include "wpcn/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wpcn {

std::string to_string(Violation::Kind k) {
    switch (k) {
        case Violation::lemma2_imbalance: return "lemma2_imbalance";
        case Violation::lemma2_queue_gate: return "lemma2_queue_gate";
        case Violation::lemma2_battery_gate: return "lemma2_battery_gate";
        case Violation::battery: return "battery";
        case Violation::matching_gap: return "matching_gap";
        case Violation::eigen_gap: return "eigen_gap";
    }
    return "unknown";
}

void check_slot(const SlotRecord& rec, const Topology& topo,
                const DerivedConstants& kc, std::vector<Violation>& out) {
    const int s_count = topo.num_streams();
    for (int n = 0; n < topo.node_count; ++n) {
        // part 1: imbalance floor (recomputed from the stored counters, not
        // trusted from the z column)
        double u_sum = 0.0;
        for (int s = 0; s < s_count; ++s)
            u_sum += rec.u_virt[static_cast<size_t>(n) * s_count + s];
        const double z = u_sum - kc.conv * rec.e_virt[n];
        if (z < kc.mu_max)
            out.push_back({Violation::lemma2_imbalance, rec.slot, n + 1, z, kc.mu_max});

        // part 3: a node only drains energy with phi_max in reserve
        if (rec.phi_out[n] > 0.0 && rec.e_virt[n] < kc.phi_max)
            out.push_back({Violation::lemma2_battery_gate, rec.slot, n + 1,
                           rec.e_virt[n], kc.phi_max});
        // hard feasibility on the same (virtual == unlimited) battery
        if (rec.phi_out[n] > rec.e_virt[n])
            out.push_back({Violation::battery, rec.slot, n + 1, rec.e_virt[n],
                           rec.phi_out[n]});
    }
    // part 2: transmission gate
    const double gate = kc.u0 + kc.mu_max;
    for (int l = 0; l < topo.num_links(); ++l) {
        if (l >= static_cast<int>(rec.link_rate_sched.size())) break;
        if (!(rec.link_rate_sched[l] > 0.0)) continue;
        const int s = rec.link_stream[l];
        if (s < 0) continue;
        const double u_head =
            rec.u_virt[static_cast<size_t>(topo.head_of(l)) * s_count + s];
        if (u_head < gate)
            out.push_back({Violation::lemma2_queue_gate, rec.slot, topo.links[l].id,
                           u_head, gate});
    }
}

std::vector<Violation> check_lemma2(const Trace& trace, const Topology& topo,
                                    const DerivedConstants& kc) {
    std::vector<Violation> out;
    for (const SlotRecord& rec : trace) check_slot(rec, topo, kc, out);
    return out;
}

namespace {

struct BruteState {
    const std::vector<double>* z;
    const std::vector<double>* weight;
    const CVec* g;
    const RateModel* model;
    const Topology* topo;
    std::vector<double> levels;
    double conv = 0.0;
    double best = 0.0;
    long long evals = 0;
    std::vector<int> active;  // current matching under construction
};

// enumerate matchings in ascending link order; for each active set, the
// objective separates per link, so the per-link minimum over levels is exact
void brute_recurse(BruteState& bs, int link, double acc) {
    if (link == bs.topo->num_links()) {
        ++bs.evals;
        if (acc < bs.best) bs.best = acc;
        return;
    }
    // skip this link
    brute_recurse(bs, link + 1, acc);
    // or activate it if the matching allows
    for (int other : bs.active)
        if (bs.topo->share_node(link, other)) return;
    double term_min = 0.0;
    bool any = false;
    const double zh = (*bs.z)[bs.topo->head_of(link)];
    const double g2 = std::norm((*bs.g)[link]);
    for (double p : bs.levels) {
        if (p == 0.0) continue;
        const double r = bs.model->rate(p, g2);
        const double term = bs.conv * zh * p - (*bs.weight)[link] * r;
        if (!any || term < term_min) {
            term_min = term;
            any = true;
        }
    }
    if (!any) return;
    bs.active.push_back(link);
    brute_recurse(bs, link + 1, acc + term_min);
    bs.active.pop_back();
}

}  // namespace

double brute_force_schedule(const std::vector<double>& z,
                            const std::vector<double>& weight, const CVec& g,
                            const RateModel& model, int power_levels, double p_max_w,
                            double conv, const Topology& topo,
                            long long* evaluations) {
    if (topo.num_links() > 16)
        throw std::invalid_argument("brute_force_schedule: instance too large");
    if (power_levels > 8)
        throw std::invalid_argument("brute_force_schedule: too many power levels");
    BruteState bs;
    bs.z = &z;
    bs.weight = &weight;
    bs.g = &g;
    bs.model = &model;
    bs.topo = &topo;
    bs.conv = conv;
    for (int k = 0; k < power_levels; ++k)
        bs.levels.push_back(p_max_w * k / (power_levels - 1));
    brute_recurse(bs, 0, 0.0);
    if (evaluations) *evaluations = bs.evals;
    return bs.best;
}

JacobiResult exact_eigen(const CMat& h, double tol) {
    const int m = h.rows;
    if (m != h.cols) throw std::invalid_argument("exact_eigen: matrix must be square");
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            const cxd d = h(r, c) - std::conj(h(c, r));
            if (std::abs(d) > 1e-12 * (1.0 + std::abs(h(r, c))))
                throw std::invalid_argument("exact_eigen: matrix is not Hermitian");
        }

    CMat a = h;
    CMat v(m, m);
    for (int i = 0; i < m; ++i) v(i, i) = 1.0;

    double scale = 0.0;
    for (const cxd& x : a.a) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) scale = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= tol * scale) break;

        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const cxd apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= tol * scale * 1e-3) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cxd phase = apq / mag;  // e^{i phi}
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // G has G(p,p)=c, G(p,q)=s*phase, G(q,p)=-s*conj(phase), G(q,q)=c;
                // apply a <- G^H a G, v <- v G
                for (int k = 0; k < m; ++k) {
                    const cxd akp = a(k, p);
                    const cxd akq = a(k, q);
                    a(k, p) = c * akp - s * std::conj(phase) * akq;
                    a(k, q) = s * phase * akp + c * akq;
                }
                for (int k = 0; k < m; ++k) {
                    const cxd apk = a(p, k);
                    const cxd aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * std::conj(phase) * apk + c * aqk;
                }
                for (int k = 0; k < m; ++k) {
                    const cxd vkp = v(k, p);
                    const cxd vkq = v(k, q);
                    v(k, p) = c * vkp - s * std::conj(phase) * vkq;
                    v(k, q) = s * phase * vkp + c * vkq;
                }
            }
        }
    }

    JacobiResult res;
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](int x, int y) { return a(x, x).real() < a(y, y).real(); });
    res.vectors = CMat(m, m);
    for (int i = 0; i < m; ++i) {
        res.values.push_back(a(order[i], order[i]).real());
        for (int r = 0; r < m; ++r) res.vectors(r, i) = v(r, order[i]);
    }
    res.max_value = res.values.back();
    res.max_vector.resize(m);
    for (int r = 0; r < m; ++r) res.max_vector[r] = res.vectors(r, m - 1);
    fix_phase(res.max_vector);
    return res;
}

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile_of(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const double idx = q * (v.size() - 1);
    const size_t lo = static_cast<size_t>(idx);
    const size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = idx - lo;
    return v[lo] * (1.0 - w) + v[hi] * w;
}

}  // namespace

AttractionStats attraction_stats(const Trace& trace, long long warmup_slots,
                                 const Topology& topo,
                                 const std::vector<double>& thresholds_scale) {
    if (trace.empty()) throw std::invalid_argument("attraction_stats: empty trace");
    AttractionStats st;
    st.thresholds_scale = thresholds_scale;
    if (st.thresholds_scale.empty())
        for (int k = 1; k <= 8; ++k) st.thresholds_scale.push_back(0.625 * k);

    const int n_count = topo.node_count;
    const int s_count = topo.num_streams();
    const size_t t0 = static_cast<size_t>(std::min<long long>(warmup_slots,
                                                              trace.size()));
    const size_t t_len = trace.size() - t0;
    if (t_len < 16) throw std::invalid_argument("attraction_stats: trace too short");

    // collect post-warmup series
    auto series_for = [&](auto getter) {
        std::vector<double> out;
        out.reserve(t_len);
        for (size_t t = t0; t < trace.size(); ++t) out.push_back(getter(trace[t]));
        return out;
    };

    std::vector<std::vector<double>> q_series, b_series;
    for (int n = 0; n < n_count; ++n) {
        for (int s = 0; s < s_count; ++s) {
            q_series.push_back(series_for([&](const SlotRecord& r) {
                return r.u_real[static_cast<size_t>(n) * s_count + s];
            }));
        }
        b_series.push_back(series_for([&](const SlotRecord& r) { return r.b_real[n]; }));
    }

    std::vector<double> q_iqrs, b_iqrs;
    auto build = [&](const std::vector<double>& data, int node, int stream,
                     std::vector<double>& iqrs) {
        AttractionStats::Series s;
        s.node = node;
        s.stream = stream;
        s.median = median_of(data);
        s.iqr = quantile_of(data, 0.75) - quantile_of(data, 0.25);
        if (s.iqr > 0.0) iqrs.push_back(s.iqr);
        return s;
    };
    int qi = 0;
    for (int n = 0; n < n_count; ++n)
        for (int s = 0; s < s_count; ++s)
            st.queues.push_back(build(q_series[qi++], n + 1, s + 1, q_iqrs));
    for (int n = 0; n < n_count; ++n)
        st.batteries.push_back(build(b_series[n], n + 1, -1, b_iqrs));

    st.queue_iqr = q_iqrs.empty() ? 0.0 : median_of(q_iqrs);
    st.battery_iqr = b_iqrs.empty() ? 0.0 : median_of(b_iqrs);

    const size_t kcount = st.thresholds_scale.size();
    st.any_queue_freq.assign(kcount, 0.0);
    st.any_battery_freq.assign(kcount, 0.0);
    for (size_t k = 0; k < kcount; ++k) {
        const double mq = st.thresholds_scale[k] * st.queue_iqr;
        const double mb = st.thresholds_scale[k] * st.battery_iqr;
        size_t nq = 0, nb = 0;
        for (size_t t = 0; t < t_len; ++t) {
            bool dev_q = false, dev_b = false;
            for (size_t j = 0; j < q_series.size(); ++j)
                if (std::abs(q_series[j][t] - st.queues[j].median) > mq) {
                    dev_q = true;
                    break;
                }
            for (size_t j = 0; j < b_series.size(); ++j)
                if (std::abs(b_series[j][t] - st.batteries[j].median) > mb) {
                    dev_b = true;
                    break;
                }
            nq += dev_q;
            nb += dev_b;
        }
        st.any_queue_freq[k] = static_cast<double>(nq) / t_len;
        st.any_battery_freq[k] = static_cast<double>(nb) / t_len;
    }

    // per-series deviation curves against the series' own IQR-scaled grid
    auto curves = [&](std::vector<AttractionStats::Series>& list,
                      const std::vector<std::vector<double>>& data, double pool_iqr) {
        for (size_t j = 0; j < list.size(); ++j) {
            list[j].deviation_freq.assign(kcount, 0.0);
            for (size_t k = 0; k < kcount; ++k) {
                const double m = st.thresholds_scale[k] * pool_iqr;
                size_t cnt = 0;
                for (double v : data[j])
                    if (std::abs(v - list[j].median) > m) ++cnt;
                list[j].deviation_freq[k] = static_cast<double>(cnt) / t_len;
            }
        }
    };
    curves(st.queues, q_series, st.queue_iqr);
    curves(st.batteries, b_series, st.battery_iqr);
    return st;
}

}  // namespace wpcn
