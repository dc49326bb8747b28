#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "tanglab/field.hpp"
#include "tanglab/nodal.hpp"
#include "tanglab/stats.hpp"
#include "tanglab/tangency.hpp"
#include "tanglab/vectorfield.hpp"

namespace tanglab {

struct AnalysisOptions {
    double grid_h = 0.05;
    double tol_f = 1e-10;
    double beta = 1e-3;
    double rho = 0.0;  // excision radius (0 = off)
    double d_long = 6.0;
    double xi_small = 0.01;
    bool include_sub_beta = true;
    bool run_method_a = true;
    bool keep_geometry = false;  // retain polylines in the result
};

struct ComponentAnalysis {
    NodalComponent geo;  // vertices cleared unless keep_geometry
    ComponentTangencies method_b;  // official counts
    ComponentTangencies method_a;  // cross-check
    ComponentFlag flag = ComponentFlag::Ok;
    bool in_measure = false;
    bool certified = false;  // closed, in the measure, every margin > beta
    bool beta1_ok = false;   // min over vertices of |grad f| > beta
};

struct RealizationAnalysis {
    std::vector<ComponentAnalysis> comps;
    TrialSummary summary;
    long method_checked = 0;  // components with every margin >= beta, A vs B
    long method_agree = 0;
    long certified_count = 0;
    long certified_k_lt2 = 0;
    long certified_odd_or_zero = 0;
    std::map<int, long> certified_counts;
    long noncontractible_included = 0;
    int nudged = 0;
    double field_scale = 0.0;
    double vf_scale = 0.0;
};

// Full single-realization pipeline: synthesize grids, extract f and Vf nodal
// sets, excise, count tangencies by both methods, classify and summarize.
RealizationAnalysis analyze_realization(const FieldRealization& f, const VectorFieldSpec& vf,
                                        const DomainSpec& dom, const AnalysisOptions& opt);

// Trial i draws its field from derive_seed(master, i). The callback (if any)
// runs on worker threads, once per finished trial.
using TrialCallback = std::function<void(std::uint64_t trial, const RealizationAnalysis&)>;

struct EnsembleResult {
    std::vector<TrialSummary> trials;       // by trial index
    DirectionDistribution pooled;           // all trials merged
    long method_checked = 0, method_agree = 0;
    long certified_count = 0, certified_k_lt2 = 0, certified_odd_or_zero = 0;
    std::map<int, long> certified_counts;
    long noncontractible_included = 0;
};

EnsembleResult run_ensemble(const SpectralModel& model, int n_waves, const VectorFieldSpec& vf,
                            const DomainSpec& dom, const AnalysisOptions& opt,
                            std::uint64_t master_seed, long n_trials, int workers,
                            const TrialCallback& callback = {});

// Deterministic perturbation-stability certificate: an independent field of
// the same law, rescaled so its sampled C2 norm stays below b, is added to f;
// certified components are matched to the perturbed extraction by polyline
// Hausdorff distance and must keep their tangency count.
enum class StabilityOutcome { Preserved, Changed, Ambiguous, Lost };

struct StabilityVerdict {
    int component = -1;
    int k_before = 0;
    int k_after = 0;
    StabilityOutcome outcome = StabilityOutcome::Preserved;
};

struct StabilityReport {
    double b = 0.0;
    double psi_scale = 0.0;
    double psi_c2_certified = 0.0;  // 2x the sampled grid max of the scaled field
    long certified = 0;
    long preserved = 0, changed = 0, ambiguous = 0, lost = 0;
    std::vector<StabilityVerdict> verdicts;
    bool all_preserved() const { return changed == 0 && lost == 0; }
};

StabilityReport stability_check(const FieldRealization& f, const SpectralModel& model,
                                int n_waves, const VectorFieldSpec& vf, double beta, double b,
                                const DomainSpec& dom, const AnalysisOptions& opt,
                                std::uint64_t psi_seed);

}  // namespace tanglab
