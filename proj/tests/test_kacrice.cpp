#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "tanglab/kacrice.hpp"
#include "tanglab/pipeline.hpp"
#include "tanglab/rng.hpp"

using namespace tanglab;

TEST_SUITE("kacrice") {

TEST_CASE("circle tangency density matches the closed form") {
    // for the unit-circle spectral measure the blocks decouple:
    // density = p_(f,dxi f)(0,0) * E|d_zeta f| * E|d_xi^2 f | f=0| = sqrt(2)
    auto est = kac_rice_tangency_density(SpectralModel::circle(), {1.0, 0.0}, 1000000, 7);
    CHECK(est.stderr_ > 0.0);
    CHECK(est.stderr_ / est.density < 0.01);
    CHECK(std::abs(est.density - std::sqrt(2.0)) < 4.0 * est.stderr_);
}

TEST_CASE("rotation invariance for isotropic models") {
    auto circle = SpectralModel::circle();
    auto ref = kac_rice_tangency_density(circle, {1.0, 0.0}, 400000, 3);
    for (int a = 1; a < 8; ++a) {
        double th = 6.283185307179586 * a / 8.0 + 0.13;
        auto est = kac_rice_tangency_density(circle, {std::cos(th), std::sin(th)}, 400000,
                                             1000 + a);
        CHECK(std::abs(est.density - ref.density) <
              3.0 * std::sqrt(est.stderr_ * est.stderr_ + ref.stderr_ * ref.stderr_));
    }
}

TEST_CASE("joint covariance facts") {
    auto est = kac_rice_tangency_density(SpectralModel::annulus(0.5), {0.6, 0.8}, 100000, 5);
    // symmetric PSD with unit variance in the f slot
    CHECK(est.joint_cov[0][0] == doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            CHECK(est.joint_cov[i][j] == doctest::Approx(est.joint_cov[j][i]).epsilon(1e-12));
    // d_xi f is a combination of d1 f, d2 f: that 3x3 block is singular
    double a = est.joint_cov[1][1], b = est.joint_cov[2][2], c = est.joint_cov[3][3];
    CHECK(a <= b + c + 1e-9);
}

TEST_CASE("degenerate models raise") {
    // Cilleruelo lattice: conditioning on (f, d_xi f) collapses the Jacobian law
    auto l1 = SpectralModel::atomic_lattice(1);
    CHECK_THROWS_WITH_AS(kac_rice_tangency_density(l1, {1.0, 0.0}, 10000, 1).density > 0,
                         "Kac-Rice nondegeneracy violated", std::runtime_error);
    CHECK_THROWS_AS(kac_rice_tangency_density(l1, {0.866, 0.5}, 10000, 1),
                    std::runtime_error);
    // support on a line violates (rho3)
    auto flat = SpectralModel::atomic_general({0.0}, {1.0});
    CHECK_THROWS_AS(kac_rice_tangency_density(flat, {1.0, 0.0}, 10000, 1),
                    std::invalid_argument);
}

TEST_CASE("critical point density") {
    auto circle = SpectralModel::circle();
    auto a = kac_rice_critical_density(circle, 400000, 11);
    auto b = kac_rice_critical_density(circle, 400000, 12);
    CHECK(a.density > 0.0);
    CHECK(std::abs(a.density - b.density) <
          3.0 * std::sqrt(a.stderr_ * a.stderr_ + b.stderr_ * b.stderr_));
    // 1/sqrt(N) scaling of the Monte Carlo error
    auto half = kac_rice_critical_density(circle, 200000, 13);
    CHECK(half.stderr_ / a.stderr_ == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));

    auto l5 = kac_rice_critical_density(SpectralModel::atomic_lattice(5), 400000, 14);
    auto l5b = kac_rice_critical_density(SpectralModel::atomic_lattice(5), 400000, 15);
    CHECK(std::abs(l5.density - l5b.density) <
          3.0 * std::sqrt(l5.stderr_ * l5.stderr_ + l5b.stderr_ * l5b.stderr_));
}

TEST_CASE("critical density dominates the contained-component density") {
    auto circle = SpectralModel::circle();
    auto crit = kac_rice_critical_density(circle, 300000, 21);
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 12.0;
    AnalysisOptions opt;
    auto vf = VectorFieldSpec::constant({0.0, 1.0});
    double count = 0.0, area = 0.0;
    for (int t = 0; t < 6; ++t) {
        SplitMix64 rng(derive_seed(808, t));
        auto f = sample_field(circle, 512, rng);
        auto an = analyze_realization(f, vf, dom, opt);
        count += an.summary.contained_count;
        area += dom.area();
    }
    // each closed component encloses at least one critical point
    CHECK(count / area < crit.density);
}

TEST_CASE("tangency density against direct counting") {
    // brute-force oracle: joint zeros of (f, Vf) per unit area over an ensemble
    auto circle = SpectralModel::circle();
    Vec2 zeta{1.0, 0.0};
    auto est = kac_rice_tangency_density(circle, zeta, 400000, 31);
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 10.0;
    AnalysisOptions opt;
    opt.run_method_a = false;
    auto vf = VectorFieldSpec::constant(zeta.perp());
    double zeros = 0.0, area = 0.0;
    const int trials = 20;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(555, t));
        auto f = sample_field(circle, 1024, rng);
        auto an = analyze_realization(f, vf, dom, opt);
        zeros += an.summary.joint_zeros_in_ball;
        area += dom.area();
    }
    double empirical = zeros / area;
    CHECK(empirical == doctest::Approx(est.density).epsilon(0.05));
}

TEST_CASE("lattice n=5 tangency density against torus counting") {
    auto l5 = SpectralModel::atomic_lattice(5);
    Vec2 zeta{1.0, 0.0};
    auto est = kac_rice_tangency_density(l5, zeta, 400000, 41);
    DomainSpec dom;
    dom.kind = DomainKind::Torus;
    dom.side = std::sqrt(5.0);
    AnalysisOptions opt;
    opt.run_method_a = false;
    auto vf = VectorFieldSpec::constant(zeta.perp());
    double zeros = 0.0, area = 0.0;
    const int trials = 150;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(606, t));
        auto f = sample_field(l5, 0, rng);
        auto an = analyze_realization(f, vf, dom, opt);
        zeros += an.summary.joint_zeros_in_ball;
        area += dom.area();
    }
    double empirical = zeros / area;
    double rel_se = 1.0 / std::sqrt(zeros);
    CHECK(std::abs(empirical - est.density) / est.density < 3.0 * rel_se + 0.03);
}

TEST_CASE("covariance mc check") {
    auto circle = SpectralModel::circle();
    std::vector<Vec2> lags{{0.0, 0.0}, {0.38273987478100613, 0.0}, {0.5, 0.3}};
    auto rep = covariance_mc_check(circle, 400, lags, 256, 77);
    CHECK(rep.rows[0].expected == doctest::Approx(1.0));
    for (const auto& row : rep.rows)
        CHECK(std::abs(row.empirical - row.expected) < 3.5 * row.stderr_ + 1e-12);
    CHECK(std::abs(rep.rows[1].expected) < 1e-9);

    auto l1 = SpectralModel::atomic_lattice(1);
    auto rep1 = covariance_mc_check(l1, 500, {{0.5, 0.0}}, 0, 78);
    CHECK(rep1.rows[0].expected == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(rep1.rows[0].empirical) < 3.5 * rep1.rows[0].stderr_);

    CHECK_THROWS_AS(covariance_mc_check(circle, 10, lags, 64, 1), std::invalid_argument);
}

}  // TEST_SUITE
