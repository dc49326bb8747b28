#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tanglab/nodal.hpp"

namespace tanglab {

enum class ComponentFlag { Ok, SubBetaIncluded, Boundary, Excised, Unresolved };

struct ExclusionLedger {
    long boundary = 0;
    long excised = 0;
    long unresolved = 0;
    long sub_beta_included_flagged = 0;

    void merge(const ExclusionLedger& o) {
        boundary += o.boundary;
        excised += o.excised;
        unresolved += o.unresolved;
        sub_beta_included_flagged += o.sub_beta_included_flagged;
    }
};

// Empirical probability measure on Z>=0 of per-component tangency counts.
struct DirectionDistribution {
    std::map<int, long> counts;
    long total = 0;
    std::map<int, double> probabilities;
    ExclusionLedger ledger;
    std::uint64_t seed = 0;
    std::string config_hash;

    double mean_k() const;
    double mass_zero_or_odd() const;
};

// Ok and SubBetaIncluded components enter the measure; the rest only the
// ledger. Throws "empty measure" when nothing is included.
DirectionDistribution direction_distribution(
    const std::vector<std::pair<int, ComponentFlag>>& items);

// Total variation distance: half the l1 distance of the probability vectors.
double tv_distance(const DirectionDistribution& mu1, const DirectionDistribution& mu2);
double tv_distance(const std::map<int, double>& p1, const std::map<int, double>& p2);

struct PerKEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;
    long n_trials = 0;
};

struct TrialSummary {
    std::map<int, long> counts;  // per-k included component counts
    long included_total = 0;
    long contained_count = 0;  // all contained components (for the NS constant)
    double area = 0.0;
    ExclusionLedger ledger;
    long joint_zeros_in_ball = 0;
    long identity_lhs = 0;
    long boundary_roots = 0;
    long excised_roots = 0;
};

struct EstimateTable {
    std::map<int, PerKEstimate> per_k;      // C_k: per-trial ratio mean +- stderr
    PerKEstimate density_per_area;          // included components per unit area
    PerKEstimate ns_constant;               // contained components / Vol(B(R))
    PerKEstimate mean_tangencies;           // per-trial mean of k
    long n_trials = 0;
};

// Self-normalizing per-trial ratios, averaged across trials with normal-
// approximation standard errors. Needs >= 2 trials.
EstimateTable estimate_ck(const std::vector<TrialSummary>& trials);

// Counting identity for one sample: sum of k over contained components vs all
// joint zeros of (f, Vf) in the ball.
struct IdentityReport {
    long lhs = 0;
    long rhs = 0;
    bool holds = false;
    bool equality = false;
    long boundary_roots = 0;
    long excised_roots = 0;
};
IdentityReport tangency_sum_check(const TrialSummary& trial);

// Integral-geometric sandwich at one sample. k_select = -1 counts components
// regardless of k. Discretization slack counts components whose containment /
// intersection boundary passes near a center cell.
struct SandwichReport {
    double lower = 0.0, mid = 0.0, upper = 0.0;
    double slack_lower = 0.0, slack_upper = 0.0;
    bool holds = false;
    int centers_lower = 0, centers_upper = 0;
};
SandwichReport sandwich_check(const std::vector<NodalComponent>& comps,
                              const std::vector<int>& k_of_comp, int k_select, double r, double R,
                              double center_step);

struct ErgodicReport {
    double spatial_density = 0.0;
    double ensemble_density = 0.0;
    double relative_gap = 0.0;
};
ErgodicReport ergodic_check(double big_count, double big_area,
                            const std::vector<double>& small_counts, double small_area);

}  // namespace tanglab
