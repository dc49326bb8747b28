#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "tanglab/pipeline.hpp"
#include "tanglab/rng.hpp"
#include "tanglab/stats.hpp"

using namespace tanglab;

namespace {

NodalComponent circle_comp(double radius, Vec2 center, double h = 0.02) {
    NodalComponent c;
    int n = std::max(16, static_cast<int>(std::ceil(6.2831853 * radius / h)));
    for (int i = 0; i <= n; ++i) {
        double th = 6.283185307179586 * i / n;
        c.vertices.push_back(center + Vec2{radius * std::cos(th), radius * std::sin(th)});
    }
    c.closed = true;
    c.bbox_min = center - Vec2{radius, radius};
    c.bbox_max = center + Vec2{radius, radius};
    c.enclosed_area = 3.14159265358979 * radius * radius;
    c.diameter = 2 * radius;
    return c;
}

}  // namespace

TEST_SUITE("stats") {

TEST_CASE("direction distribution") {
    auto d = direction_distribution({{2, ComponentFlag::Ok},
                                     {2, ComponentFlag::Ok},
                                     {4, ComponentFlag::Ok}});
    CHECK(d.total == 3);
    CHECK(d.probabilities.at(2) == doctest::Approx(2.0 / 3.0));
    CHECK(d.probabilities.at(4) == doctest::Approx(1.0 / 3.0));
    double sum = 0.0;
    for (auto& [k, p] : d.probabilities) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));

    auto e = direction_distribution({{2, ComponentFlag::Ok}, {3, ComponentFlag::Excised}});
    CHECK(e.probabilities.at(2) == doctest::Approx(1.0));
    CHECK(e.ledger.excised == 1);
    CHECK(e.total == 1);

    CHECK_THROWS_AS(direction_distribution({}), std::runtime_error);
    CHECK_THROWS_AS(direction_distribution({{2, ComponentFlag::Boundary}}), std::runtime_error);
}

TEST_CASE("tv distance") {
    std::map<int, double> d2{{2, 1.0}}, d4{{4, 1.0}}, mix{{2, 0.5}, {4, 0.5}};
    CHECK(tv_distance(d2, d2) == 0.0);
    CHECK(tv_distance(d2, d4) == doctest::Approx(1.0));
    CHECK(tv_distance(mix, d2) == doctest::Approx(0.5));

    // metric properties on random triples
    SplitMix64 rng(10);
    for (int rep = 0; rep < 50; ++rep) {
        std::map<int, double> p, q, r;
        double sp = 0, sq = 0, sr = 0;
        for (int k = 0; k < 6; ++k) {
            p[2 * k] = rng.next_double();
            q[2 * k] = rng.next_double();
            r[2 * k] = rng.next_double();
            sp += p[2 * k];
            sq += q[2 * k];
            sr += r[2 * k];
        }
        for (int k = 0; k < 6; ++k) {
            p[2 * k] /= sp;
            q[2 * k] /= sq;
            r[2 * k] /= sr;
        }
        CHECK(tv_distance(p, q) == doctest::Approx(tv_distance(q, p)).epsilon(1e-14));
        CHECK(tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-14);
        CHECK(tv_distance(p, q) >= 0.0);
        CHECK(tv_distance(p, q) <= 1.0);
    }
}

TEST_CASE("estimate table") {
    TrialSummary t1, t2;
    t1.counts = {{2, 10}};
    t1.included_total = 10;
    t1.contained_count = 10;
    t1.area = 100.0;
    t2 = t1;
    auto table = estimate_ck({t1, t2});
    CHECK(table.per_k.at(2).mean == doctest::Approx(1.0));
    CHECK(table.per_k.at(2).stderr_ == doctest::Approx(0.0));
    CHECK(table.ns_constant.mean == doctest::Approx(0.1));

    // per-trial ratios always sum to one
    SplitMix64 rng(3);
    std::vector<TrialSummary> trials;
    for (int t = 0; t < 12; ++t) {
        TrialSummary ts;
        long total = 0;
        for (int k = 0; k <= 8; k += 2) {
            long c = static_cast<long>(rng.next_double() * 20);
            ts.counts[k] = c;
            total += c;
        }
        ts.included_total = total;
        ts.area = 50.0;
        trials.push_back(ts);
    }
    auto tab = estimate_ck(trials);
    double sum = 0.0;
    for (auto& [k, est] : tab.per_k) sum += est.mean;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(estimate_ck({t1}), std::invalid_argument);
}

TEST_CASE("counting identity bookkeeping") {
    TrialSummary empty;
    auto r0 = tangency_sum_check(empty);
    CHECK(r0.holds);
    CHECK(r0.equality);

    TrialSummary one;
    one.identity_lhs = 2;
    one.joint_zeros_in_ball = 2;
    auto r1 = tangency_sum_check(one);
    CHECK(r1.holds);
    CHECK(r1.equality);

    TrialSummary withboundary;
    withboundary.identity_lhs = 4;
    withboundary.joint_zeros_in_ball = 9;
    withboundary.boundary_roots = 5;
    auto r2 = tangency_sum_check(withboundary);
    CHECK(r2.holds);
    CHECK(!r2.equality);
}

TEST_CASE("sandwich on synthetic configurations") {
    // no components: 0 <= 0 <= 0
    auto rep0 = sandwich_check({}, {}, -1, 2.0, 10.0, 0.2);
    CHECK(rep0.holds);
    CHECK(rep0.mid == 0.0);
    CHECK(rep0.lower == 0.0);
    CHECK(rep0.upper == 0.0);

    // one small loop well inside B(R - 2r): continuum values are
    // ((r-a)/r)^2 and ((r+a)/r)^2 around mid = 1
    double a = 0.3, r = 2.0, R = 10.0;
    std::vector<NodalComponent> comps{circle_comp(a, {1.0, -2.0})};
    auto rep = sandwich_check(comps, {0}, -1, r, R, 0.2);
    CHECK(rep.holds);
    CHECK(rep.mid == 1.0);
    double lo_exact = (r - a) * (r - a) / (r * r);
    double hi_exact = (r + a) * (r + a) / (r * r);
    CHECK(rep.lower == doctest::Approx(lo_exact).epsilon(0.08));
    CHECK(rep.upper == doctest::Approx(hi_exact).epsilon(0.08));
    CHECK(rep.lower - rep.slack_lower <= 1.0);
    CHECK(rep.upper + rep.slack_upper >= 1.0);

    // k-selected: the loop has k=2, querying k=4 must give zeros
    auto rep4 = sandwich_check(comps, {2}, 4, r, R, 0.2);
    CHECK(rep4.mid == 0.0);
    CHECK(rep4.upper == 0.0);
    CHECK(rep4.holds);

    CHECK_THROWS_AS(sandwich_check(comps, {0}, -1, 12.0, 10.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(sandwich_check(comps, {0}, -1, 2.0, 10.0, 0.5), std::invalid_argument);
}

TEST_CASE("sandwich on a sampled field") {
    SplitMix64 rng(99);
    auto f = sample_field(SpectralModel::circle(), 256, rng);
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 12.0;
    dom.extent = 12.0 + 2 * 3.0 + 1.0;
    AnalysisOptions opt;
    opt.grid_h = 0.05;
    opt.keep_geometry = true;
    auto vf = VectorFieldSpec::constant({0.0, 1.0});
    auto an = analyze_realization(f, vf, dom, opt);
    std::vector<NodalComponent> comps;
    std::vector<int> ks;
    for (const auto& ca : an.comps) {
        comps.push_back(ca.geo);
        ks.push_back(ca.method_b.k);
    }
    for (int k : {-1, 2}) {
        auto rep = sandwich_check(comps, ks, k, 3.0, 12.0, 0.3);
        CHECK(rep.holds);
        CHECK(rep.mid > 0.0);
    }
}

TEST_CASE("ergodic report") {
    auto r = ergodic_check(50.0, 100.0, {12.0, 13.0, 11.0}, 25.0);
    CHECK(r.spatial_density == doctest::Approx(0.5));
    CHECK(r.ensemble_density == doctest::Approx(0.48));
    CHECK(r.relative_gap == doctest::Approx(0.04));
    CHECK_THROWS_AS(ergodic_check(1.0, 0.0, {1.0}, 1.0), std::invalid_argument);

    // degenerate single plane wave: no contained components at any radius
    auto f = inject_deterministic({{{1.0, 0.0}, 1.0, 0.0}});
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 8.0;
    AnalysisOptions opt;
    opt.grid_h = 0.04;  // keeps the lines x = 1/4 + k/2 off the grid
    auto vfd = VectorFieldSpec::constant({1.0, 0.0});
    auto an = analyze_realization(f, vfd, dom, opt);
    CHECK(an.summary.contained_count == 0);
}

}  // TEST_SUITE
