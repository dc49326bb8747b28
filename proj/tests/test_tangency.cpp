#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "tanglab/pipeline.hpp"
#include "tanglab/rng.hpp"
#include "tanglab/tangency.hpp"

using namespace tanglab;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

FieldRealization torus_bump_fixture() {
    return inject_deterministic(
        {{{1.0, 0.0}, 1.0, 0.0}, {{0.0, 1.0}, 1.0, 0.0}, {{0.0, 0.0}, -1.0, 0.0}},
        DomainKind::Torus, 1.0);
}

struct FixtureAnalysis {
    ExtractionResult ex;
    FieldEvaluator ev;
    double tol_f_abs, tol_vf_abs;
    ExtractionResult vf_ex;

    FixtureAnalysis(const FieldRealization& f, const VectorFieldSpec& vf, const DomainSpec& dom,
                    double h)
        : ev(f) {
        FieldValueAdapter field(ev);
        GridGeom geom = extraction_grid(dom, h);
        ex = extract_from_grid(field, sample_grid(field, geom), dom, 1e-10);
        VfScalarAdapter vfield(vf, ev);
        GridGeom vf_geom = derived_field_grid(geom, dom.kind);
        vf_ex = extract_from_grid(vfield, sample_grid(vfield, vf_geom), dom, 1e-10);
        tol_f_abs = 1e-10 * ex.field_scale;
        tol_vf_abs = 1e-10 * vf_ex.field_scale;
    }
};

}  // namespace

TEST_SUITE("tangency") {

TEST_CASE("eval_vf on fixtures") {
    auto f = inject_deterministic({{{1.0, 0.0}, 1.0, 0.0}});  // cos(2 pi x1)
    FieldEvaluator ev(f);
    auto vf = VectorFieldSpec::constant({1.0, 0.0});
    VfEval e = eval_vf(vf, ev, {0.25, 0.0});
    CHECK(e.vf == doctest::Approx(-kTwoPi).epsilon(1e-13));
    CHECK(e.v_value.x == 1.0);

    auto sines = VectorFieldSpec::torus_sines(1.0);
    SplitMix64 rng(3);
    auto g = sample_field(SpectralModel::atomic_lattice(5), 0, rng);
    FieldEvaluator evg(g);
    VfEval z = eval_vf(sines, evg, {0.0, 0.0});
    CHECK(z.v_value.norm() < 1e-14);
    CHECK(sines.zeros.size() == 4);
    for (const auto& zz : sines.zeros) {
        double dx = std::min(std::abs(zz.x), std::abs(zz.x - 0.5));
        double dy = std::min(std::abs(zz.y), std::abs(zz.y - 0.5));
        CHECK(dx < 1e-9);
        CHECK(dy < 1e-9);
    }
}

TEST_CASE("grad of Vf matches finite differences") {
    SplitMix64 rng(5);
    auto f = sample_field(SpectralModel::circle(), 64, rng);
    FieldEvaluator ev(f);
    auto vfc = VectorFieldSpec::constant_angle_deg(25.0);
    auto vft = VectorFieldSpec::torus_sines(1.0);
    SplitMix64 prng(6);
    const double eta = 1e-5;
    for (int i = 0; i < 100; ++i) {
        Vec2 x{6 * prng.next_double() - 3, 6 * prng.next_double() - 3};
        for (const auto* vf : {&vfc, &vft}) {
            VfEval e = eval_vf(*vf, ev, x);
            double fx = (eval_vf(*vf, ev, {x.x + eta, x.y}).vf -
                         eval_vf(*vf, ev, {x.x - eta, x.y}).vf) /
                        (2 * eta);
            double fy = (eval_vf(*vf, ev, {x.x, x.y + eta}).vf -
                         eval_vf(*vf, ev, {x.x, x.y - eta}).vf) /
                        (2 * eta);
            CHECK(e.grad_vf.x == doctest::Approx(fx).epsilon(1e-5));
            CHECK(e.grad_vf.y == doctest::Approx(fy).epsilon(1e-5));
        }
    }
}

TEST_CASE("bump loop: two tangencies in every constant direction") {
    auto f = torus_bump_fixture();
    DomainSpec dom;
    dom.kind = DomainKind::Torus;
    dom.side = 1.0;

    for (double angle : {90.0, 0.0, 45.0}) {
        auto vf = VectorFieldSpec::constant_angle_deg(angle);
        FixtureAnalysis fx(f, vf, dom, 0.02);
        REQUIRE(fx.ex.components.size() == 1);
        auto a = count_tangencies_on_curve(fx.ex.components[0], vf, fx.ev, 1e-3, fx.tol_f_abs,
                                           fx.tol_vf_abs);
        CHECK(a.k == 2);
        CHECK(!a.unresolved);
        auto b = count_via_intersections(fx.ex.components, fx.vf_ex.components, vf, fx.ev, dom,
                                         0.02, 1e-3, fx.tol_f_abs, fx.tol_vf_abs);
        CHECK(b.per_component[0].k == 2);
        // identical point sets
        mark_method_agreement(a, b.per_component[0]);
        for (const auto& rec : a.records) CHECK(rec.method_agreement);
        for (const auto& rec : b.per_component[0].records) {
            CHECK(rec.method_agreement);
            CHECK(rec.margin > 1e-3);
        }
        // the two roots of the axis cases sit on the symmetry axes
        if (angle == 90.0)
            for (const auto& rec : b.per_component[0].records) {
                double y = rec.location.y - std::round(rec.location.y);
                CHECK(std::abs(y) < 1e-8);
            }
    }
}

TEST_CASE("oracle check: dense parametric scan of the 45-degree count") {
    auto f = torus_bump_fixture();
    DomainSpec dom;
    dom.kind = DomainKind::Torus;
    dom.side = 1.0;
    auto vf = VectorFieldSpec::constant_angle_deg(45.0);
    FixtureAnalysis fx(f, vf, dom, 0.02);
    const auto& comp = fx.ex.components[0];
    // dense sampling of Vf along the curve, counting sign changes
    int sign_changes = 0;
    double prev = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i + 1 < comp.vertices.size(); ++i) {
        for (int s = 0; s < 20; ++s) {
            Vec2 p = comp.vertices[i] +
                     (comp.vertices[i + 1] - comp.vertices[i]) * (s / 20.0);
            // project p onto the curve, then evaluate Vf
            for (int it = 0; it < 8; ++it) {
                double val;
                Vec2 g;
                fx.ev.value_grad(p, val, g);
                if (std::abs(val) <= fx.tol_f_abs) break;
                p -= g * (val / g.norm2());
            }
            double v = fx.ev.dir_deriv(p, vf.zeta);
            if (have_prev && (v > 0) != (prev > 0)) ++sign_changes;
            prev = v;
            have_prev = true;
        }
    }
    auto b = count_via_intersections(fx.ex.components, fx.vf_ex.components, vf, fx.ev, dom, 0.02,
                                     1e-3, fx.tol_f_abs, fx.tol_vf_abs);
    CHECK(b.per_component[0].k == sign_changes);
    CHECK(sign_changes % 2 == 0);
}

TEST_CASE("plane wave: Vf zero lines are disjoint from the nodal lines") {
    auto f = inject_deterministic({{{1.0, 0.0}, 1.0, 0.0}});
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 5.0;
    auto vf = VectorFieldSpec::constant({1.0, 0.0});
    FixtureAnalysis fx(f, vf, dom, 0.02);
    auto b = count_via_intersections(fx.ex.components, fx.vf_ex.components, vf, fx.ev, dom, 0.02,
                                     1e-3, fx.tol_f_abs, fx.tol_vf_abs);
    CHECK(b.total_roots == 0);
    for (const auto& pc : b.per_component) CHECK(pc.k == 0);
}

TEST_CASE("excision") {
    auto f = torus_bump_fixture();
    DomainSpec dom;
    dom.kind = DomainKind::Torus;
    dom.side = 1.0;
    FieldEvaluator ev(f);
    FieldValueAdapter field(ev);
    auto ex = extract_nodal_set(field, dom, 0.02, 1e-10);

    // constant fields have no zeros
    auto vfc = VectorFieldSpec::constant({0.0, 1.0});
    CHECK(excise_zeros(vfc, ex.components, 0.5) == 0);

    auto sines = VectorFieldSpec::torus_sines(1.0);
    // rho = 0: balls are points
    CHECK(excise_zeros(sines, ex.components, 0.0) == 0);
    // the bump loop passes near (0.25, 0): far from {0, 0.5}^2 zeros at rho=0.05
    auto comps = ex.components;
    CHECK(excise_zeros(sines, comps, 0.05) == 0);
    // component through (0.01, 0): synthetic polyline near the zero at (0,0)
    NodalComponent near_zero;
    near_zero.vertices = {{0.01, 0.0}, {0.02, 0.01}, {0.03, 0.02}};
    near_zero.bbox_min = {0.01, 0.0};
    near_zero.bbox_max = {0.03, 0.02};
    std::vector<NodalComponent> synth{near_zero};
    CHECK(excise_zeros(sines, synth, 0.05) == 1);
    CHECK(synth[0].excised);
    // big rho reaches the bump loop
    auto comps2 = ex.components;
    CHECK(excise_zeros(sines, comps2, 0.3) == 1);
}

TEST_CASE("margin invariance under rescaling") {
    SplitMix64 rng(12);
    auto f = sample_field(SpectralModel::circle(), 128, rng);
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 6.0;
    auto vf = VectorFieldSpec::constant_angle_deg(10.0);
    FixtureAnalysis fx(f, vf, dom, 0.05);
    auto base = count_via_intersections(fx.ex.components, fx.vf_ex.components, vf, fx.ev, dom,
                                        0.05, 1e-3, fx.tol_f_abs, fx.tol_vf_abs);

    for (double c : {0.5, 3.0}) {
        auto scaled = scale_field(f, c);
        FieldEvaluator evs(scaled);
        int checked = 0;
        for (const auto& pc : base.per_component) {
            for (const auto& rec : pc.records) {
                if (checked >= 20) break;
                EvalResult r = evs.full(rec.location);
                VfEval e = eval_vf(vf, evs, rec.location);
                double margin =
                    std::abs(r.grad.cross(e.grad_vf)) / (r.grad.norm() * e.grad_vf.norm());
                CHECK(margin == doctest::Approx(rec.margin).epsilon(1e-9));
                ++checked;
            }
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("methods agree on a random ensemble") {
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 10.0;
    AnalysisOptions opt;
    opt.grid_h = 0.05;
    long checked = 0, agreed = 0, parity_bad = 0, certified = 0;
    for (int t = 0; t < 4; ++t) {
        SplitMix64 rng(derive_seed(400, t));
        auto f = sample_field(SpectralModel::circle(), 256, rng);
        auto vf = VectorFieldSpec::constant_angle_deg(30.0 * t);
        auto an = analyze_realization(f, vf, dom, opt);
        checked += an.method_checked;
        agreed += an.method_agree;
        certified += an.certified_count;
        parity_bad += an.certified_odd_or_zero;
        CHECK(an.certified_k_lt2 == 0);
        // counting identity, exact per sample
        CHECK(an.summary.identity_lhs <= an.summary.joint_zeros_in_ball);
        if (an.summary.ledger.boundary == 0 && an.summary.boundary_roots == 0 &&
            an.summary.ledger.excised == 0 && an.summary.ledger.unresolved == 0)
            CHECK(an.summary.identity_lhs == an.summary.joint_zeros_in_ball);
    }
    CHECK(certified > 20);
    CHECK(checked > 0);
    CHECK(agreed == checked);
    CHECK(parity_bad == 0);
}

TEST_CASE("stability certificate on fixtures and small fields") {
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 8.0;
    AnalysisOptions opt;
    opt.grid_h = 0.05;
    auto model = SpectralModel::circle();
    SplitMix64 rng(31);
    auto f = sample_field(model, 256, rng);
    auto vf = VectorFieldSpec::constant({0.0, 1.0});

    // b = 0: the perturbation vanishes identically
    auto rep0 = stability_check(f, model, 256, vf, 1e-3, 0.0, dom, opt, 77);
    CHECK(rep0.certified > 0);
    CHECK(rep0.changed == 0);
    CHECK(rep0.lost == 0);
    CHECK(rep0.preserved + rep0.ambiguous == rep0.certified);

    // small but nonzero perturbation
    auto rep = stability_check(f, model, 256, vf, 1e-3, 2.5e-4, dom, opt, 78);
    CHECK(rep.certified > 0);
    CHECK(rep.all_preserved());
    CHECK(rep.psi_c2_certified == doctest::Approx(2.5e-4).epsilon(1e-12));

    CHECK_THROWS_AS(stability_check(f, model, 256, vf, 1e-3, 1e-3, dom, opt, 79),
                    std::invalid_argument);
}

}  // TEST_SUITE
