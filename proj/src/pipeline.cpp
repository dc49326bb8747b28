#include "tanglab/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "tanglab/grid.hpp"
#include "tanglab/rng.hpp"
#include "tanglab/scalar_field.hpp"

namespace tanglab {

namespace {

// directed Hausdorff distance, vertices of a against segments of b
double directed_hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    double worst = 0.0;
    for (const auto& p : a) {
        double best = 1e300;
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            best = std::min(best, dist_point_segment(p, b[i], b[i + 1]));
            if (best < worst) break;
        }
        worst = std::max(worst, best);
    }
    return worst;
}

double hausdorff(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

ScalarGrid compose_vf_grid(const GridBundle& bundle, const VectorFieldSpec& vf) {
    ScalarGrid out;
    out.geom = bundle.gx.geom;
    out.v.resize(bundle.gx.v.size());
    const GridGeom& geom = out.geom;
    for (int ix = 0; ix < geom.nx; ++ix) {
        for (int iy = 0; iy < geom.ny; ++iy) {
            Vec2 a = vf.coeff_value(geom.pos(ix, iy));
            out.at(ix, iy) = a.x * bundle.gx.at(ix, iy) + a.y * bundle.gy.at(ix, iy);
        }
    }
    return out;
}

}  // namespace

RealizationAnalysis analyze_realization(const FieldRealization& f, const VectorFieldSpec& vf,
                                        const DomainSpec& dom, const AnalysisOptions& opt) {
    RealizationAnalysis out;
    FieldEvaluator ev(f);
    FieldValueAdapter f_field(ev);
    VfScalarAdapter vf_field(vf, ev);

    GridGeom geom = extraction_grid(dom, opt.grid_h);
    GridGeom vf_geom = derived_field_grid(geom, dom.kind);

    SynthRequest freq_only;
    freq_only.value = true;
    GridBundle f_bundle = synthesize_grids(ev, geom, freq_only);

    SynthRequest vfreq;
    vfreq.value = true;
    if (vf.variant == VfVariant::Constant) {
        vfreq.direct = true;
        vfreq.dir = vf.zeta;
    } else {
        vfreq.grads = true;
    }
    GridBundle vf_bundle = synthesize_grids(ev, vf_geom, vfreq);
    ScalarGrid vf_grid = vf.variant == VfVariant::Constant ? std::move(vf_bundle.vf)
                                                           : compose_vf_grid(vf_bundle, vf);
    vf_bundle.f.v.clear();
    vf_bundle.gx.v.clear();
    vf_bundle.gy.v.clear();

    ExtractionResult f_ex = extract_from_grid(f_field, f_bundle.f, dom, opt.tol_f);
    ExtractionResult vf_ex = extract_from_grid(vf_field, vf_grid, dom, opt.tol_f);
    out.nudged = f_ex.nudged_vertices;
    out.field_scale = f_ex.field_scale;
    out.vf_scale = vf_ex.field_scale;
    const double tol_f_abs = opt.tol_f * f_ex.field_scale;
    const double tol_vf_abs = opt.tol_f * vf_ex.field_scale;

    excise_zeros(vf, f_ex.components, opt.rho);
    classify_components(f_ex.components, opt.d_long, opt.xi_small);

    IntersectionCounts bcounts =
        count_via_intersections(f_ex.components, vf_ex.components, vf, ev, dom, opt.grid_h,
                                opt.beta, tol_f_abs, tol_vf_abs);

    out.comps.resize(f_ex.components.size());
    out.summary.area = dom.area();
    for (std::size_t i = 0; i < f_ex.components.size(); ++i) {
        ComponentAnalysis& ca = out.comps[i];
        ca.geo = std::move(f_ex.components[i]);
        ca.method_b = std::move(bcounts.per_component[i]);

        if (opt.run_method_a) {
            ca.method_a = count_tangencies_on_curve(ca.geo, vf, ev, opt.beta, tol_f_abs,
                                                    tol_vf_abs);
            mark_method_agreement(ca.method_a, ca.method_b);
            bool in_domain = dom.kind == DomainKind::Torus ||
                             ca.geo.containment == Containment::Contained;
            if (in_domain && !ca.geo.excised && !ca.method_b.records.empty() &&
                ca.method_b.min_margin >= opt.beta && !ca.method_b.unresolved &&
                !ca.method_a.unresolved) {
                ++out.method_checked;
                if (ca.method_a.k == ca.method_b.k) ++out.method_agree;
            }
            ca.beta1_ok = ca.method_a.min_grad_norm > opt.beta;
        }

        bool has_sub_beta = false;
        for (const auto& rec : ca.method_b.records) has_sub_beta |= rec.sub_beta;
        bool unresolved = ca.method_b.unresolved || ca.method_b.degenerate;
        bool in_domain_measure = dom.kind == DomainKind::Torus ||
                                 ca.geo.containment == Containment::Contained;

        if (!in_domain_measure) {
            ca.flag = ComponentFlag::Boundary;
        } else if (ca.geo.excised) {
            ca.flag = ComponentFlag::Excised;
        } else if (unresolved) {
            ca.flag = ComponentFlag::Unresolved;
        } else if (has_sub_beta) {
            ca.flag = ComponentFlag::SubBetaIncluded;
        } else {
            ca.flag = ComponentFlag::Ok;
        }
        ca.in_measure = (ca.flag == ComponentFlag::Ok ||
                         (ca.flag == ComponentFlag::SubBetaIncluded && opt.include_sub_beta));

        if (ca.geo.containment == Containment::Contained) ++out.summary.contained_count;
        switch (ca.flag) {
            case ComponentFlag::Boundary: ++out.summary.ledger.boundary; break;
            case ComponentFlag::Excised: ++out.summary.ledger.excised; break;
            case ComponentFlag::Unresolved: ++out.summary.ledger.unresolved; break;
            case ComponentFlag::SubBetaIncluded:
                ++out.summary.ledger.sub_beta_included_flagged;
                break;
            case ComponentFlag::Ok: break;
        }
        if (ca.in_measure) {
            out.summary.counts[ca.method_b.k] += 1;
            out.summary.included_total += 1;
            out.summary.identity_lhs += ca.method_b.k;
            if (!ca.geo.contractible()) ++out.noncontractible_included;

            // certification: closed simple component, all margins transverse
            if (ca.geo.closed && ca.geo.contractible() && !has_sub_beta) {
                ca.certified = true;
                ++out.certified_count;
                out.certified_counts[ca.method_b.k] += 1;
                if (ca.method_b.k < 2) ++out.certified_k_lt2;
                if (ca.method_b.k == 0 || ca.method_b.k % 2 != 0) ++out.certified_odd_or_zero;
            }
        }
        if (!opt.keep_geometry) {
            ca.geo.vertices.clear();
            ca.geo.vertices.shrink_to_fit();
        }
    }
    out.summary.joint_zeros_in_ball = bcounts.roots_in_ball;
    out.summary.boundary_roots = bcounts.boundary_roots_in_ball;
    out.summary.excised_roots = bcounts.contained_excised_roots;
    return out;
}

EnsembleResult run_ensemble(const SpectralModel& model, int n_waves, const VectorFieldSpec& vf,
                            const DomainSpec& dom, const AnalysisOptions& opt,
                            std::uint64_t master_seed, long n_trials, int workers,
                            const TrialCallback& callback) {
    if (n_trials <= 0) throw std::invalid_argument("run_ensemble: need trials >= 1");
    workers = std::max(1, workers);

    EnsembleResult result;
    result.trials.resize(n_trials);
    std::vector<RealizationAnalysis> analyses(n_trials);
    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::string error_message;
    std::mutex error_mutex;

    auto work = [&]() {
        while (true) {
            long t = next.fetch_add(1);
            if (t >= n_trials || failed.load()) break;
            try {
                SplitMix64 rng(derive_seed(master_seed, static_cast<std::uint64_t>(t)));
                FieldRealization f = sample_field(model, n_waves, rng);
                f.seed = {master_seed, static_cast<std::uint64_t>(t)};
                RealizationAnalysis an = analyze_realization(f, vf, dom, opt);
                if (callback) callback(static_cast<std::uint64_t>(t), an);
                analyses[t] = std::move(an);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                error_message = e.what();
                failed.store(true);
                break;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failed.load()) throw std::runtime_error("run_ensemble: trial failed: " + error_message);

    // deterministic merge in trial order
    std::vector<std::pair<int, ComponentFlag>> pooled_items;
    for (long t = 0; t < n_trials; ++t) {
        RealizationAnalysis& an = analyses[t];
        result.trials[t] = an.summary;
        result.method_checked += an.method_checked;
        result.method_agree += an.method_agree;
        result.certified_count += an.certified_count;
        result.certified_k_lt2 += an.certified_k_lt2;
        result.certified_odd_or_zero += an.certified_odd_or_zero;
        result.noncontractible_included += an.noncontractible_included;
        for (const auto& [k, c] : an.certified_counts) result.certified_counts[k] += c;
        for (const auto& ca : an.comps) {
            if (ca.flag == ComponentFlag::Ok || ca.flag == ComponentFlag::SubBetaIncluded) {
                if (ca.in_measure)
                    pooled_items.push_back({ca.method_b.k, ca.flag});
            } else {
                pooled_items.push_back({0, ca.flag});
            }
        }
    }
    result.pooled = direction_distribution(pooled_items);
    result.pooled.seed = master_seed;
    return result;
}

StabilityReport stability_check(const FieldRealization& f, const SpectralModel& model,
                                int n_waves, const VectorFieldSpec& vf, double beta, double b,
                                const DomainSpec& dom, const AnalysisOptions& opt,
                                std::uint64_t psi_seed) {
    if (!(b >= 0.0) || b > beta / 4.0 + 1e-15)
        throw std::invalid_argument("stability_check: need 0 <= b <= beta/4");
    StabilityReport rep;
    rep.b = b;

    AnalysisOptions keep = opt;
    keep.keep_geometry = true;
    RealizationAnalysis before = analyze_realization(f, vf, dom, keep);

    SplitMix64 rng(psi_seed);
    FieldRealization psi = sample_field(model, n_waves, rng);
    FieldEvaluator psi_ev(psi);
    GridGeom geom = dom.kind == DomainKind::Plane ? plane_grid(dom.grid_halfwidth(), opt.grid_h)
                                                  : torus_grid(dom.side, opt.grid_h);
    double c2 = grid_c2_norm(psi_ev, geom);
    if (!(c2 > 0.0)) throw std::runtime_error("stability_check: degenerate perturbation");
    rep.psi_scale = b / (2.0 * c2);
    rep.psi_c2_certified = 2.0 * rep.psi_scale * c2;  // == b by construction

    FieldRealization perturbed =
        b > 0.0 ? add_fields(f, scale_field(psi, rep.psi_scale)) : f;
    RealizationAnalysis after = analyze_realization(perturbed, vf, dom, keep);

    const double r_match = std::max(0.02, 20.0 * b);
    for (std::size_t i = 0; i < before.comps.size(); ++i) {
        const ComponentAnalysis& ca = before.comps[i];
        if (!(ca.certified && ca.beta1_ok && ca.method_b.min_margin > beta)) continue;
        ++rep.certified;
        StabilityVerdict v;
        v.component = static_cast<int>(i);
        v.k_before = ca.method_b.k;

        int best = -1, close_candidates = 0;
        double best_d = 1e300;
        for (std::size_t j = 0; j < after.comps.size(); ++j) {
            const auto& cb = after.comps[j];
            if (!cb.geo.closed) continue;
            if (cb.geo.bbox_min.x > ca.geo.bbox_max.x + r_match ||
                cb.geo.bbox_max.x < ca.geo.bbox_min.x - r_match ||
                cb.geo.bbox_min.y > ca.geo.bbox_max.y + r_match ||
                cb.geo.bbox_max.y < ca.geo.bbox_min.y - r_match)
                continue;
            double d = hausdorff(ca.geo.vertices, cb.geo.vertices);
            if (d <= r_match) ++close_candidates;
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        if (close_candidates > 1) {
            v.outcome = StabilityOutcome::Ambiguous;
            ++rep.ambiguous;
        } else if (best < 0 || best_d > r_match) {
            v.outcome = StabilityOutcome::Lost;
            ++rep.lost;
        } else {
            v.k_after = after.comps[best].method_b.k;
            v.outcome = v.k_after == v.k_before ? StabilityOutcome::Preserved
                                                : StabilityOutcome::Changed;
            if (v.outcome == StabilityOutcome::Preserved)
                ++rep.preserved;
            else
                ++rep.changed;
        }
        rep.verdicts.push_back(v);
    }
    return rep;
}

}  // namespace tanglab
