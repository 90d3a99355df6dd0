#pragma once

#include <vector>

#include "wpcn/channel.hpp"
#include "wpcn/config.hpp"
#include "wpcn/constants.hpp"
#include "wpcn/linalg.hpp"
#include "wpcn/rate.hpp"
#include "wpcn/state.hpp"
#include "wpcn/topology.hpp"

namespace wpcn {

// One slot's control decision. Exactly one of tau_e / tau_d is nonzero.
struct ControlAction {
    double tau_e = 0.0;
    double tau_d = 0.0;
    CVec beam;                        // M, unit norm
    double p_ap = 0.0;                // 0 or P_APm
    std::vector<double> link_power;   // L, watts
    std::vector<int> link_stream;     // L, stream carrying the link's capacity
    std::vector<double> link_rate;    // L, scheduled bits/s (estimated CSI)
    std::vector<double> intake_cap;   // N, joules, (Z_n - mu_max) / C
    std::vector<double> beam_gain;    // N, |w h_n^T|^2 under estimated CSI
    double f_data = 0.0;              // optimal data-slot objective (<= 0)
    double f_energy = 0.0;            // optimal energy-slot objective (<= 0)
    std::vector<double> link_score;   // L, per-link net weight (diagnostic)

    bool energy_slot() const { return tau_e > 0.0; }
};

// W_{l,s} = (Z_head - Z_tail) + (U_head,s - U_tail,s), row-major L x S.
std::vector<double> routing_weights(const std::vector<double>& u_virt,
                                    const std::vector<double>& z,
                                    const Topology& topo);

// s_l = argmax_s W_{l,s} (lowest stream index on ties) and
// W_l = max(0, max_s W_{l,s}).
void select_streams(const std::vector<double>& weights, const Topology& topo,
                    std::vector<int>& stream_out, std::vector<double>& weight_out);

struct ScheduleResult {
    std::vector<double> power;   // L
    std::vector<double> rate;    // L, bits/s at the estimated gains
    std::vector<double> score;   // L, W_l R_l - C Z_head p_l for the chosen level
    double objective = 0.0;      // minimized value (= -sum of selected scores)
};

// Minimizes sum_l [ C Z_head(l) p_l - W_l R_l(p_l) ] over the discrete power
// levels and node-exclusive activations. Exact branch-and-bound over
// matchings for small L, sorted-score greedy maximal matching otherwise.
// Ties: lexicographically smallest active set, lowest power level.
ScheduleResult schedule_links(const std::vector<double>& z,
                              const std::vector<double>& weight,
                              const std::vector<int>& stream_sel, const CVec& g_est,
                              const RateModel& model, int power_levels,
                              double p_max_w, double conv, const Topology& topo,
                              SchedulerBackend backend);

struct BeamResult {
    CVec w;                        // unit beamforming vector
    std::vector<double> gain;      // per node |w h_n^T|^2
};

// Conjugate principal eigenvector of H = C sum_n Z_n h_n^T h_n^*.
BeamResult beamform(const std::vector<double>& z, const CMat& h_est, double conv);

double eap_power(double v, const std::vector<double>& gain,
                 const std::vector<double>& z, double conv, double p_eap_max_w);

// tau split: an energy slot whenever F_e* <= F_d*.
void time_share(double f_energy, double f_data, double tau_f, double& tau_e,
                double& tau_d);

// phi_in cap (Z_n - mu_max) / C; faults if Z_n < mu_max.
double intake_cap(double z_n, double mu_max, double conv, long long slot);

class Controller {
  public:
    Controller(const Topology& topo, const SimConfig& cfg, const RateModel& model,
               const DerivedConstants& kc)
        : topo_(topo), cfg_(cfg), model_(model), kc_(kc) {}

    // Full per-slot decision from the virtual state and (possibly estimated)
    // CSI. Pure: identical inputs give identical actions.
    ControlAction step(const NetworkState& st, const ChannelState& csi_est) const;

    const DerivedConstants& constants() const { return kc_; }

  private:
    const Topology& topo_;
    const SimConfig& cfg_;
    const RateModel& model_;
    const DerivedConstants& kc_;
};

}  // namespace wpcn
