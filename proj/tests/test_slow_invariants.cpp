// Ensemble-level module invariants. Slow: registered as a separate ctest
// entry, excluded from the quick unit runs.

#include <cmath>

#include "doctest.h"
#include "tanglab/pipeline.hpp"
#include "tanglab/rng.hpp"

using namespace tanglab;

TEST_SUITE("slow") {

TEST_CASE("resolution stability: halving the grid step barely moves the count") {
    auto model = SpectralModel::circle();
    DomainSpec dom;
    dom.kind = DomainKind::Plane;
    dom.radius = 25.0;
    long coarse = 0, fine = 0;
    for (int t = 0; t < 50; ++t) {
        SplitMix64 rng(derive_seed(7100, t));
        auto f = sample_field(model, 512, rng);
        FieldEvaluator ev(f);
        FieldValueAdapter field(ev);
        coarse += static_cast<long>([&] {
            auto res = extract_nodal_set(field, dom, 0.05, 1e-10);
            long c = 0;
            for (const auto& comp : res.components)
                if (comp.containment == Containment::Contained) ++c;
            return c;
        }());
        fine += static_cast<long>([&] {
            auto res = extract_nodal_set(field, dom, 0.025, 1e-10);
            long c = 0;
            for (const auto& comp : res.components)
                if (comp.containment == Containment::Contained) ++c;
            return c;
        }());
    }
    CAPTURE(coarse);
    CAPTURE(fine);
    CHECK(std::abs(fine - coarse) <= 0.01 * fine);
}

TEST_CASE("contained component density is stable in the radius") {
    auto model = SpectralModel::circle();
    auto vf = VectorFieldSpec::constant({0.0, 1.0});
    AnalysisOptions opt;
    opt.grid_h = 0.05;
    opt.run_method_a = false;
    auto density_at = [&](double R, std::uint64_t seed, int trials) {
        DomainSpec dom;
        dom.kind = DomainKind::Plane;
        dom.radius = R;
        double count = 0.0;
        EnsembleResult res = run_ensemble(model, 1024, vf, dom, opt, seed, trials, 1);
        for (const auto& tr : res.trials) count += tr.contained_count;
        return count / (trials * dom.area());
    };
    double d35 = density_at(35.0, 7200, 12);
    double d50 = density_at(50.0, 7300, 12);
    CAPTURE(d35);
    CAPTURE(d50);
    CHECK(std::abs(d50 - d35) / d50 < 0.10);
}

TEST_CASE("spatial average approaches the ensemble average") {
    auto model = SpectralModel::circle();
    auto vf = VectorFieldSpec::constant({0.0, 1.0});
    AnalysisOptions opt;
    opt.grid_h = 0.05;
    opt.run_method_a = false;

    DomainSpec big;
    big.kind = DomainKind::Plane;
    big.radius = 50.0;
    SplitMix64 rng(9100);
    auto fbig = sample_field(model, 1024, rng);
    auto an_big = analyze_realization(fbig, vf, big, opt);

    DomainSpec small;
    small.kind = DomainKind::Plane;
    small.radius = 20.0;
    EnsembleResult res = run_ensemble(model, 1024, vf, small, opt, 9200, 60, 1);
    std::vector<double> counts;
    for (const auto& tr : res.trials) counts.push_back(tr.contained_count);
    auto rep = ergodic_check(an_big.summary.contained_count, big.area(), counts, small.area());
    CAPTURE(rep.spatial_density);
    CAPTURE(rep.ensemble_density);
    CHECK(rep.relative_gap < 0.10);
}

}  // TEST_SUITE
