#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "tanglab/rng.hpp"
#include "tanglab/spectral.hpp"

using namespace tanglab;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
// first zero of the circle covariance J0(2 pi r): j_{0,1} / (2 pi)
constexpr double kCircleCovFirstZero = 0.38273987478100613;
}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("lattice points") {
    auto p5 = lattice_points(5);
    CHECK(p5.size() == 8);
    std::set<std::pair<int, int>> expect5 = {{1, 2},  {2, 1},  {-1, 2},  {-2, 1},
                                             {1, -2}, {2, -1}, {-1, -2}, {-2, -1}};
    CHECK(std::set<std::pair<int, int>>(p5.begin(), p5.end()) == expect5);
    CHECK(std::is_sorted(p5.begin(), p5.end()));

    CHECK(lattice_points(3).empty());

    auto p25 = lattice_points(25);
    CHECK(p25.size() == 12);
    std::set<std::pair<int, int>> expect25 = {{0, 5},  {0, -5}, {5, 0},  {-5, 0},
                                              {3, 4},  {3, -4}, {-3, 4}, {-3, -4},
                                              {4, 3},  {4, -3}, {-4, 3}, {-4, -3}};
    CHECK(std::set<std::pair<int, int>>(p25.begin(), p25.end()) == expect25);

    CHECK_THROWS_AS(lattice_points(0), std::invalid_argument);
    CHECK_THROWS_AS(lattice_points(-4), std::invalid_argument);

    // closure under the 8 symmetries
    for (int n : {2, 5, 25, 50}) {
        auto pts = lattice_points(n);
        std::set<std::pair<int, int>> s(pts.begin(), pts.end());
        for (auto [a, b] : pts) {
            CHECK(s.count({-a, b}));
            CHECK(s.count({a, -b}));
            CHECK(s.count({b, a}));
            CHECK(s.count({-b, -a}));
        }
    }
}

TEST_CASE("radial covariance against the quadrature oracle") {
    auto circle = SpectralModel::circle();
    CHECK(covariance(circle, 0.0) == 1.0);
    CHECK(std::abs(covariance(circle, kCircleCovFirstZero)) < 1e-9);
    // frozen from the oracle: J0(2 pi r)
    CHECK(covariance(circle, 0.1) == doctest::Approx(0.9037126420924663).epsilon(1e-12));
    CHECK(covariance(circle, 0.7) == doctest::Approx(-0.3426152961363736).epsilon(1e-12));
    CHECK(covariance(circle, 0.7) ==
          doctest::Approx(testing::covariance_quadrature(1.0, true, 0.7)).epsilon(1e-10));

    auto ann = SpectralModel::annulus(0.5);
    // frozen from the independent 2-D quadrature of the defining integral
    CHECK(covariance(ann, 1.0) == doctest::Approx(-0.15053519696385118).epsilon(1e-9));
    for (double r : {0.3, 1.0, 2.7}) {
        CHECK(covariance(ann, r) ==
              doctest::Approx(testing::covariance_quadrature(0.5, false, r)).epsilon(1e-9));
    }
    CHECK(covariance(ann, 0.0) == 1.0);

    auto lat = SpectralModel::atomic_lattice(5);
    CHECK_THROWS_WITH_AS(covariance(lat, 1.0), "anisotropic model requires covariance_lag",
                         std::invalid_argument);
}

TEST_CASE("covariance_lag") {
    auto l1 = SpectralModel::atomic_lattice(1);
    CHECK(covariance_lag(l1, {0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(covariance_lag(l1, {0.5, 0.0})) < 1e-15);

    auto circle = SpectralModel::circle();
    for (double r : {0.1, 0.7})
        CHECK(covariance_lag(circle, {r, 0.0}) == doctest::Approx(covariance(circle, r)));

    SplitMix64 rng(11);
    auto ann = SpectralModel::annulus(0.3);
    auto l5 = SpectralModel::atomic_lattice(5);
    for (const auto* m : {&circle, &ann, &l5}) {
        for (int i = 0; i < 30; ++i) {
            Vec2 u{4.0 * rng.next_double() - 2.0, 4.0 * rng.next_double() - 2.0};
            double v = covariance_lag(*m, u);
            CHECK(covariance_lag(*m, -u) == doctest::Approx(v).epsilon(1e-14));
            CHECK(std::abs(v) <= 1.0 + 1e-12);
        }
    }

    // rotation invariance of the radial variants at 8 angles
    for (const auto* m : {&circle, &ann}) {
        Vec2 u{0.83, -0.41};
        double ref = covariance_lag(*m, u);
        for (int a = 0; a < 8; ++a) {
            double th = kTwoPi * a / 8.0;
            Vec2 ru{u.x * std::cos(th) - u.y * std::sin(th),
                    u.x * std::sin(th) + u.y * std::cos(th)};
            CHECK(covariance_lag(*m, ru) == doctest::Approx(ref).epsilon(1e-9));
        }
    }
}

TEST_CASE("moments") {
    auto circle = SpectralModel::circle();
    auto mc = moments(circle, 4);
    CHECK(mc.mu(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(mc.mu(2, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(mc.mu(2, 0) == doctest::Approx(mc.mu(0, 2)).epsilon(1e-12));
    CHECK(mc.mu(1, 0) == 0.0);
    CHECK(mc.mu(4, 0) == doctest::Approx(3.0 / 8.0).epsilon(1e-12));
    CHECK(mc.mu(2, 2) == doctest::Approx(1.0 / 8.0).epsilon(1e-12));

    auto l5 = SpectralModel::atomic_lattice(5);
    auto m5 = moments(l5, 4);
    CHECK(m5.mu(2, 0) == doctest::Approx(0.5).epsilon(1e-14));  // (4/5 + 16/5) / 8 per pair group
    CHECK(m5.mu(1, 0) == 0.0);
    CHECK(m5.mu(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

    auto ann = SpectralModel::annulus(0.5);
    auto ma = moments(ann, 4);
    CHECK(ma.mu(2, 0) == doctest::Approx((1.0 + 0.25) / 4.0).epsilon(1e-12));
    CHECK(ma.mu(2, 0) == doctest::Approx(ma.mu(0, 2)).epsilon(1e-12));

    CHECK_THROWS_AS(moments(circle, 3), std::invalid_argument);

    // moments reconstruct covariance derivatives
    for (const auto* m : {&circle, &ann, &l5}) {
        double mu20 = moments(*m, 4).mu(2, 0);
        double eta = 1e-4;
        double d2 = (covariance_lag(*m, {eta, 0}) - 2.0 * covariance_lag(*m, {0, 0}) +
                     covariance_lag(*m, {-eta, 0})) /
                    (eta * eta);
        CHECK(-d2 == doctest::Approx(kTwoPi * kTwoPi * mu20).epsilon(1e-4));
    }
}

TEST_CASE("model construction and flags") {
    CHECK_THROWS_AS(SpectralModel::annulus(1.0), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::annulus(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(SpectralModel::atomic_lattice(3), std::invalid_argument);

    auto g = SpectralModel::atomic_general({0.0, kTwoPi / 8.0}, {1.0, 3.0});
    double total = 0.0;
    for (double w : g.weights()) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // symmetrized: every atom has its antipode
    for (std::size_t i = 0; i < g.atoms().size(); ++i) {
        bool found = false;
        for (std::size_t j = 0; j < g.atoms().size(); ++j)
            found |= (g.atoms()[i] + g.atoms()[j]).norm() < 1e-12;
        CHECK(found);
    }

    CHECK(SpectralModel::circle().has_no_atoms());
    CHECK(!SpectralModel::atomic_lattice(1).has_no_atoms());
    CHECK(SpectralModel::annulus(0.5).has_interior());
    CHECK(!SpectralModel::circle().has_interior());
    CHECK(SpectralModel::atomic_lattice(1).spans_plane());
    auto degenerate = SpectralModel::atomic_general({0.0}, {1.0});
    CHECK(!degenerate.spans_plane());
}

}  // TEST_SUITE
