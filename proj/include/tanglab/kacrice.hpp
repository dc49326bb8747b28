#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "tanglab/spectral.hpp"
#include "tanglab/vec2.hpp"

namespace tanglab {

// Semi-analytic expected densities per unit area, from Gaussian conditioning
// on spectral moments with the conditional Jacobian expectation estimated by
// Monte Carlo.
struct KacRiceEstimate {
    double density = 0.0;
    double stderr_ = 0.0;
    SpectralMoments moments_used;
    // joint covariance of (f, d_xi f, d1 f, d2 f, d1 d_xi f, d2 d_xi f);
    // positive semi-definite (d_xi f is a combination of d1 f, d2 f)
    std::array<std::array<double, 6>, 6> joint_cov{};
};

// Expected number of zeta-tangencies (joint zeros of (f, d_xi f), xi = zeta
// rotated by 90 degrees) per unit area. Every covariance entry is verified
// against finite differences of covariance_lag before use. Throws
// "Kac-Rice nondegeneracy violated" when the conditioned Gaussian degenerates
// (e.g. the n = 1 lattice model).
KacRiceEstimate kac_rice_tangency_density(const SpectralModel& model, const Vec2& zeta,
                                          long n_mc = 1000000, std::uint64_t seed = 0x5eedULL);

// Expected number of critical points (zeros of grad f) per unit area.
KacRiceEstimate kac_rice_critical_density(const SpectralModel& model, long n_mc = 1000000,
                                          std::uint64_t seed = 0x5eedULL);

struct CovCheckRow {
    Vec2 lag;
    double empirical = 0.0;
    double expected = 0.0;
    double stderr_ = 0.0;
};

struct CovMcReport {
    double max_abs_error = 0.0;
    std::vector<CovCheckRow> rows;
};

// Empirical E[f(0) f(u)] over sampled realizations against covariance_lag.
CovMcReport covariance_mc_check(const SpectralModel& model, int n_realizations,
                                const std::vector<Vec2>& lags, int n_waves, std::uint64_t seed);

}  // namespace tanglab
