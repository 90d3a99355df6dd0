#pragma once

#include <string>
#include <vector>

#include "wpcn/constants.hpp"
#include "wpcn/engine.hpp"
#include "wpcn/linalg.hpp"
#include "wpcn/rate.hpp"
#include "wpcn/topology.hpp"

namespace wpcn {

// Findings from the trace-level checkers. Empty list == all checks passed.
struct Violation {
    enum Kind {
        lemma2_imbalance,     // Z_n(t) < mu_max
        lemma2_queue_gate,    // scheduled rate > 0 with U_head below U0 + mu_max
        lemma2_battery_gate,  // scheduled drain > 0 with battery below phi_max
        battery,              // phi_out exceeds the stored energy
        matching_gap,
        eigen_gap,
    };
    Kind kind;
    long long slot = 0;
    int entity = 0;  // 1-based node or link id
    double observed = 0.0;
    double required = 0.0;
};

std::string to_string(Violation::Kind k);

// Scans a full trace for the three per-slot policy guarantees and the hard
// battery-feasibility constraint. Comparisons are exact: the guarantees hold
// with zero slack by construction, so any tolerance would hide bugs.
std::vector<Violation> check_lemma2(const Trace& trace, const Topology& topo,
                                    const DerivedConstants& kc);

// Same checks for a single slot record; usable as a streaming observer.
void check_slot(const SlotRecord& rec, const Topology& topo,
                const DerivedConstants& kc, std::vector<Violation>& out);

// Exhaustive minimum of the per-slot link-scheduling objective
//   sum_l [ C Z_head(l) p_l - W_l R_l(p_l) ]
// over every matching and every power-level assignment. Guarded to small
// instances; `evaluations` (when given) counts visited assignments.
double brute_force_schedule(const std::vector<double>& z,
                            const std::vector<double>& weight, const CVec& g,
                            const RateModel& model, int power_levels, double p_max_w,
                            double conv, const Topology& topo,
                            long long* evaluations = nullptr);

// Dense Hermitian eigensolver by cyclic Jacobi rotations; independent of the
// power-iteration path used by the controller.
struct JacobiResult {
    std::vector<double> values;  // ascending
    CMat vectors;                // columns match values
    double max_value = 0.0;
    CVec max_vector;
};

JacobiResult exact_eigen(const CMat& h, double tol = 1e-13);

// Empirical attraction statistics: per-series median and the frequency of
// deviations beyond each threshold in `thresholds`.
struct AttractionStats {
    struct Series {
        int node = 0;
        int stream = -1;  // -1 for battery series
        double median = 0.0;
        double iqr = 0.0;
        std::vector<double> deviation_freq;  // per threshold
    };
    std::vector<double> thresholds_scale;  // multiples of the pooled IQR
    std::vector<Series> queues;
    std::vector<Series> batteries;
    // P(any queue deviates by more than k * IQR_q from its median), etc.
    std::vector<double> any_queue_freq;
    std::vector<double> any_battery_freq;
    double queue_iqr = 0.0;    // pooled
    double battery_iqr = 0.0;  // pooled
};

AttractionStats attraction_stats(const Trace& trace, long long warmup_slots,
                                 const Topology& topo,
                                 const std::vector<double>& thresholds_scale = {});

}  // namespace wpcn
