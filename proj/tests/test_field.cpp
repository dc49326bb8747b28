#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "tanglab/field.hpp"
#include "tanglab/grid.hpp"
#include "tanglab/rng.hpp"

using namespace tanglab;

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

TEST_SUITE("field") {

TEST_CASE("single term derivatives are exact") {
    // f = cos(2 pi x1)
    auto f = inject_deterministic({{{1.0, 0.0}, 1.0, 0.0}});
    FieldEvaluator ev(f);
    EvalResult r = ev.full({0.0, 0.0});
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(r.grad.x) < 1e-14);
    CHECK(std::abs(r.grad.y) < 1e-14);
    CHECK(r.hess.xx == doctest::Approx(-kTwoPi * kTwoPi).epsilon(1e-13));
    CHECK(std::abs(r.hess.yy) < 1e-12);
    CHECK(std::abs(r.hess.xy) < 1e-12);

    // hand formula at a few points
    for (double x : {0.13, 0.4, -1.27, 2.0, 5.55}) {
        CHECK(ev.value({x, 0.7}) == doctest::Approx(std::cos(kTwoPi * x)).epsilon(1e-13));
    }
}

TEST_CASE("gradient and hessian match finite differences") {
    SplitMix64 rng(42);
    auto model = SpectralModel::annulus(0.4);
    auto f = sample_field(model, 64, rng);
    FieldEvaluator ev(f);
    SplitMix64 prng(7);
    const double eta = 1e-5;
    for (int i = 0; i < 100; ++i) {
        Vec2 x{20.0 * prng.next_double() - 10.0, 20.0 * prng.next_double() - 10.0};
        EvalResult r = ev.full(x);
        double fx = (ev.value({x.x + eta, x.y}) - ev.value({x.x - eta, x.y})) / (2 * eta);
        double fy = (ev.value({x.x, x.y + eta}) - ev.value({x.x, x.y - eta})) / (2 * eta);
        CHECK(r.grad.x == doctest::Approx(fx).epsilon(1e-5));
        CHECK(r.grad.y == doctest::Approx(fy).epsilon(1e-5));
        double hxx = (ev.value({x.x + eta, x.y}) - 2 * ev.value(x) + ev.value({x.x - eta, x.y})) /
                     (eta * eta);
        CHECK(r.hess.xx == doctest::Approx(hxx).epsilon(2e-4));
        double vg;
        Vec2 g;
        ev.value_grad(x, vg, g);
        CHECK(vg == doctest::Approx(r.value).epsilon(1e-14));
        CHECK(g.x == doctest::Approx(r.grad.x).epsilon(1e-14));
    }
}

TEST_CASE("sampling laws") {
    SplitMix64 rng(5);
    auto arw5 = sample_field(SpectralModel::atomic_lattice(5), 0, rng);
    CHECK(arw5.terms.size() == 4);  // 8 lattice points, one term per antipodal pair
    CHECK(arw5.domain == DomainKind::Torus);
    CHECK(arw5.torus_side == doctest::Approx(std::sqrt(5.0)));

    auto arw1 = sample_field(SpectralModel::atomic_lattice(1), 0, rng);
    CHECK(arw1.terms.size() == 2);

    CHECK_THROWS_AS(sample_field(SpectralModel::circle(), 8, rng), std::invalid_argument);

    // variance normalization is an identity on the coefficients
    for (int nw : {16, 64, 1024}) {
        auto f = sample_field(SpectralModel::circle(), nw, rng);
        double total = 0.0;
        for (double s : f.term_scales) total += f.norm * f.norm * s * s;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
    }

    // empirical variance over a grid (spatial average of a unit-variance field)
    SplitMix64 rng42(42);
    auto f = sample_field(SpectralModel::circle(), 1024, rng42);
    FieldEvaluator ev(f);
    double sum2 = 0.0;
    int n = 0;
    for (int i = 0; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            double v = ev.value({-10.0 + 0.2 * i, -10.0 + 0.2 * j});
            sum2 += v * v;
            ++n;
        }
    }
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("gaussianity smoke: kurtosis of f(0)") {
    double m2 = 0.0, m4 = 0.0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(99, t));
        auto f = sample_field(SpectralModel::circle(), 32, rng);
        FieldEvaluator ev(f);
        double v = ev.value({0.0, 0.0});
        m2 += v * v;
        m4 += v * v * v * v;
    }
    m2 /= trials;
    m4 /= trials;
    double kurt = m4 / (m2 * m2);
    CHECK(kurt > 2.8);
    CHECK(kurt < 3.2);
}

TEST_CASE("stationarity in law") {
    // mean of f(x) f(y) over realizations matches covariance_lag
    auto model = SpectralModel::atomic_lattice(5);
    SplitMix64 lagrng(3);
    std::vector<std::pair<Vec2, Vec2>> pairs;
    for (int i = 0; i < 20; ++i) {
        pairs.push_back({{2 * lagrng.next_double(), 2 * lagrng.next_double()},
                         {2 * lagrng.next_double(), 2 * lagrng.next_double()}});
    }
    const int trials = 600;
    std::vector<double> sum(pairs.size(), 0.0), sum2(pairs.size(), 0.0);
    for (int t = 0; t < trials; ++t) {
        SplitMix64 rng(derive_seed(1234, t));
        auto f = sample_field(model, 0, rng);
        FieldEvaluator ev(f);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            double p = ev.value(pairs[i].first) * ev.value(pairs[i].second);
            sum[i] += p;
            sum2[i] += p * p;
        }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        double mean = sum[i] / trials;
        double se = std::sqrt((sum2[i] / trials - mean * mean) / trials);
        double expect = covariance_lag(model, pairs[i].first - pairs[i].second);
        CHECK(std::abs(mean - expect) < 3.5 * se + 1e-12);
    }
}

TEST_CASE("shift") {
    SplitMix64 rng(21);
    auto f = sample_field(SpectralModel::circle(), 64, rng);
    FieldEvaluator ev(f);

    auto id = shift(f, {0.0, 0.0});
    FieldEvaluator evid(id);
    SplitMix64 prng(8);
    for (int i = 0; i < 10; ++i) {
        Vec2 x{prng.next_double(), prng.next_double()};
        CHECK(evid.value(x) == doctest::Approx(ev.value(x)).epsilon(1e-14));
    }
    for (int i = 0; i < 100; ++i) {
        Vec2 x{5 * prng.next_double(), 5 * prng.next_double()};
        Vec2 u{prng.next_double(), prng.next_double()};
        FieldEvaluator evs(shift(f, u));
        CHECK(std::abs(evs.value(x) - ev.value(x - u)) < 1e-12);
    }

    // torus: integer-period shift is the identity
    SplitMix64 rng2(22);
    auto arw = sample_field(SpectralModel::atomic_lattice(5), 0, rng2);
    FieldEvaluator eva(arw);
    FieldEvaluator evb(shift(arw, {arw.torus_side, 0.0}));
    for (int i = 0; i < 10; ++i) {
        Vec2 x{prng.next_double(), prng.next_double()};
        CHECK(evb.value(x) == doctest::Approx(eva.value(x)).epsilon(1e-12));
    }
}

TEST_CASE("deterministic fixtures") {
    // cos(2 pi x1) + cos(2 pi x2) - 1 via two terms and a constant term
    auto f = inject_deterministic(
        {{{1.0, 0.0}, 1.0, 0.0}, {{0.0, 1.0}, 1.0, 0.0}, {{0.0, 0.0}, -1.0, 0.0}},
        DomainKind::Torus, 1.0);
    FieldEvaluator ev(f);
    CHECK(ev.value({0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
    SplitMix64 prng(4);
    for (int i = 0; i < 20; ++i) {
        double y = prng.next_double();
        CHECK(ev.value({1.0 / 3.0, y}) < 0.0);  // cos(2 pi/3) = -1/2, so f = cos(2 pi y) - 3/2
    }
    CHECK_THROWS_AS(inject_deterministic({}), std::invalid_argument);

    // torus realizations require integer periods
    CHECK_THROWS_AS(
        inject_deterministic({{{0.5, 0.0}, 1.0, 0.0}}, DomainKind::Torus, 1.0),
        std::invalid_argument);
}

TEST_CASE("field arithmetic") {
    SplitMix64 rng(77);
    auto a = sample_field(SpectralModel::circle(), 32, rng);
    auto b = sample_field(SpectralModel::circle(), 32, rng);
    FieldEvaluator eva(a), evb(b);
    FieldEvaluator evsum(add_fields(a, b));
    FieldEvaluator evscaled(scale_field(a, -2.5));
    SplitMix64 prng(9);
    for (int i = 0; i < 20; ++i) {
        Vec2 x{10 * prng.next_double(), 10 * prng.next_double()};
        CHECK(evsum.value(x) == doctest::Approx(eva.value(x) + evb.value(x)).epsilon(1e-12));
        CHECK(evscaled.value(x) == doctest::Approx(-2.5 * eva.value(x)).epsilon(1e-12));
    }
}

}  // TEST_SUITE
