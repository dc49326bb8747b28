#include "tanglab/kacrice.hpp"

#include <cmath>
#include <stdexcept>

#include "tanglab/field.hpp"
#include "tanglab/rng.hpp"

namespace tanglab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.14159265358979323846;

// A derivative functional sum_i c_i d^{(p_i,q_i)}; covariances follow from
// E[d^a f d^b f] = (-1)^{(|a|-|b|)/2} (2 pi)^{|a|+|b|} mu_{a+b}.
struct DerivCombo {
    struct Term {
        double c;
        int p, q;
    };
    std::vector<Term> terms;
};

double pair_cov(const SpectralModel& model, const DerivCombo& a, const DerivCombo& b) {
    double total = 0.0;
    for (const auto& ta : a.terms) {
        for (const auto& tb : b.terms) {
            int oa = ta.p + ta.q, ob = tb.p + tb.q;
            if ((oa + ob) % 2 != 0) continue;
            double sign = ((oa - ob) / 2) % 2 == 0 ? 1.0 : -1.0;
            total += ta.c * tb.c * sign * std::pow(kTwoPi, oa + ob) *
                     moment_dir(model, {1, 0}, {0, 1}, ta.p + tb.p, ta.q + tb.q);
        }
    }
    return total;
}

// d^{(p,q)} r at 0 by tensored central differences with Richardson
// extrapolation, evaluated in long double.
long double fd_deriv_r0(const SpectralModel& model, int p, int q, long double eta) {
    static const std::vector<std::vector<long double>> stencils = {
        {1.0L},
        {-0.5L, 0.0L, 0.5L},
        {1.0L, -2.0L, 1.0L},
        {-0.5L, 1.0L, 0.0L, -1.0L, 0.5L},
        {1.0L, -4.0L, 6.0L, -4.0L, 1.0L},
    };
    const auto& sx = stencils[p];
    const auto& sy = stencils[q];
    int hx = static_cast<int>(sx.size()) / 2, hy = static_cast<int>(sy.size()) / 2;
    long double acc = 0.0L;
    for (int i = 0; i < static_cast<int>(sx.size()); ++i) {
        if (sx[i] == 0.0L) continue;
        for (int j = 0; j < static_cast<int>(sy.size()); ++j) {
            if (sy[j] == 0.0L) continue;
            acc += sx[i] * sy[j] *
                   covariance_lag_ld(model, static_cast<double>((i - hx) * eta),
                                     static_cast<double>((j - hy) * eta));
        }
    }
    long double scale = 1.0L;
    for (int k = 0; k < p; ++k) scale *= eta;
    for (int k = 0; k < q; ++k) scale *= eta;
    return acc / scale;
}

double fd_pair_cov(const SpectralModel& model, const DerivCombo& a, const DerivCombo& b) {
    long double total = 0.0L;
    for (const auto& ta : a.terms) {
        for (const auto& tb : b.terms) {
            int p = ta.p + tb.p, q = ta.q + tb.q;
            long double eta = 2e-3L;
            long double d1 = fd_deriv_r0(model, p, q, eta);
            long double d2 = fd_deriv_r0(model, p, q, eta / 2);
            long double extrap = (4.0L * d2 - d1) / 3.0L;
            int ob = tb.p + tb.q;
            long double sign = ob % 2 == 0 ? 1.0L : -1.0L;
            total += ta.c * tb.c * sign * extrap;
        }
    }
    return static_cast<double>(total);
}

void verify_entries(const SpectralModel& model, const std::vector<DerivCombo>& vars,
                    std::array<std::array<double, 6>, 6>& cov) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
        for (std::size_t j = i; j < vars.size(); ++j) {
            double analytic = pair_cov(model, vars[i], vars[j]);
            double numeric = fd_pair_cov(model, vars[i], vars[j]);
            double tol = 1e-6 * std::max(1.0, std::abs(analytic));
            if (std::abs(analytic - numeric) > tol)
                throw std::logic_error("kac_rice: covariance entry fails finite-difference audit");
            cov[i][j] = cov[j][i] = analytic;
        }
    }
}

// Jacobi eigendecomposition for small symmetric matrices.
void jacobi_eigen(std::vector<std::vector<double>>& a, std::vector<std::vector<double>>& v,
                  std::vector<double>& d) {
    int n = static_cast<int>(a.size());
    v.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    d.resize(n);
    for (int i = 0; i < n; ++i) d[i] = a[i][i];
}

struct McMoment {
    double mean = 0.0;
    double stderr_ = 0.0;
};

// E|x1*x3 - x2*x2half...| -- callers pass the det evaluation.
template <typename DetFn>
McMoment mc_expect_absdet(const std::vector<std::vector<double>>& cov, long n_mc,
                          std::uint64_t seed, DetFn det) {
    int n = static_cast<int>(cov.size());
    auto a = cov;
    std::vector<std::vector<double>> vecs;
    std::vector<double> eigs;
    jacobi_eigen(a, vecs, eigs);
    double max_eig = 0.0;
    for (double e : eigs) max_eig = std::max(max_eig, e);
    std::vector<std::vector<double>> factor(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            factor[i][j] = vecs[i][j] * std::sqrt(std::max(0.0, eigs[j]));
    SplitMix64 rng(seed);
    double sum = 0.0, sum2 = 0.0;
    std::vector<double> z(n), x(n);
    for (long m = 0; m < n_mc; ++m) {
        for (int i = 0; i < n; ++i) z[i] = rng.next_normal();
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j) acc += factor[i][j] * z[j];
            x[i] = acc;
        }
        double v = std::abs(det(x));
        sum += v;
        sum2 += v * v;
    }
    McMoment out;
    out.mean = sum / n_mc;
    double var = sum2 / n_mc - out.mean * out.mean;
    out.stderr_ = std::sqrt(std::max(0.0, var) / n_mc);
    return out;
}

}  // namespace

KacRiceEstimate kac_rice_tangency_density(const SpectralModel& model, const Vec2& zeta,
                                          long n_mc, std::uint64_t seed) {
    if (!model.spans_plane())
        throw std::invalid_argument("kac_rice: model violates (rho3), support in a line");
    if (n_mc < 1000) throw std::invalid_argument("kac_rice: n_mc too small");
    Vec2 z = zeta.normalized();
    if (!(z.norm() > 0)) throw std::invalid_argument("kac_rice: zero direction");
    Vec2 xi = z.perp();

    KacRiceEstimate est;
    est.moments_used = moments(model, 4);

    // audit covariance record in the standard frame:
    // (f, d_xi f, d1 f, d2 f, d1 d_xi f, d2 d_xi f)
    std::vector<DerivCombo> vars(6);
    vars[0].terms = {{1.0, 0, 0}};
    vars[1].terms = {{xi.x, 1, 0}, {xi.y, 0, 1}};
    vars[2].terms = {{1.0, 1, 0}};
    vars[3].terms = {{1.0, 0, 1}};
    vars[4].terms = {{xi.x, 2, 0}, {xi.y, 1, 1}};
    vars[5].terms = {{xi.x, 1, 1}, {xi.y, 0, 2}};
    verify_entries(model, vars, est.joint_cov);

    // rotated frame (zeta, xi): directional moments
    auto m = [&](int p, int q) { return moment_dir(model, z, xi, p, q); };
    const double k2 = kTwoPi * kTwoPi;
    const double m02 = m(0, 2), m20 = m(2, 0), m11 = m(1, 1);
    const double m22 = m(2, 2), m13 = m(1, 3), m04 = m(0, 4);

    // (f, grad f) nondegeneracy (rho3 quantitatively)
    double det3 = m20 * m02 - m11 * m11;
    if (m02 < 1e-12 || det3 < 1e-12)
        throw std::runtime_error("Kac-Rice nondegeneracy violated");

    // conditional covariance of (P, Q, S) = (d_zeta f, d_zeta d_xi f, d_xi^2 f)
    // given f = d_xi f = 0; P sits in the odd block, (Q,S) in the even one.
    double var_p = k2 * (m20 - m11 * m11 / m02);
    double var_q = k2 * k2 * (m22 - m11 * m11);
    double cov_qs = k2 * k2 * (m13 - m11 * m02);
    double var_s = k2 * k2 * (m04 - m02 * m02);
    std::vector<std::vector<double>> cond = {
        {var_p, 0.0, 0.0}, {0.0, var_q, cov_qs}, {0.0, cov_qs, var_s}};
    {
        auto a = cond;
        std::vector<std::vector<double>> vecs;
        std::vector<double> eigs;
        jacobi_eigen(a, vecs, eigs);
        double mx = 0.0;
        for (double e : eigs) mx = std::max(mx, std::abs(e));
        for (double e : eigs)
            if (e < 1e-10 * mx) throw std::runtime_error("Kac-Rice nondegeneracy violated");
    }

    // det[grad f, grad d_xi f] on the event d_xi f = 0 reduces to P*S
    McMoment ed = mc_expect_absdet(cond, n_mc, seed,
                                   [](const std::vector<double>& x) { return x[0] * x[2]; });
    double p_g = 1.0 / (kTwoPi * std::sqrt(k2 * m02));
    est.density = p_g * ed.mean;
    est.stderr_ = p_g * ed.stderr_;
    return est;
}

KacRiceEstimate kac_rice_critical_density(const SpectralModel& model, long n_mc,
                                          std::uint64_t seed) {
    if (!model.spans_plane())
        throw std::invalid_argument("kac_rice: model violates (rho3), support in a line");
    KacRiceEstimate est;
    est.moments_used = moments(model, 4);
    auto m = [&](int p, int q) { return moment_dir(model, {1, 0}, {0, 1}, p, q); };
    const double k2 = kTwoPi * kTwoPi;
    double det_g = k2 * k2 * (m(2, 0) * m(0, 2) - m(1, 1) * m(1, 1));
    if (det_g < 1e-12) throw std::runtime_error("Kac-Rice nondegeneracy violated");

    // (H11, H12, H22); independent of grad f by parity
    const double k4 = k2 * k2;
    std::vector<std::vector<double>> cov = {
        {k4 * m(4, 0), k4 * m(3, 1), k4 * m(2, 2)},
        {k4 * m(3, 1), k4 * m(2, 2), k4 * m(1, 3)},
        {k4 * m(2, 2), k4 * m(1, 3), k4 * m(0, 4)}};
    McMoment ed = mc_expect_absdet(
        cov, n_mc, seed, [](const std::vector<double>& x) { return x[0] * x[2] - x[1] * x[1]; });
    double p_g = 1.0 / (kTwoPi * std::sqrt(det_g));
    est.density = p_g * ed.mean;
    est.stderr_ = p_g * ed.stderr_;

    std::vector<DerivCombo> vars(6);
    vars[0].terms = {{1.0, 0, 0}};
    vars[1].terms = {{1.0, 1, 0}};
    vars[2].terms = {{1.0, 0, 1}};
    vars[3].terms = {{1.0, 2, 0}};
    vars[4].terms = {{1.0, 1, 1}};
    vars[5].terms = {{1.0, 0, 2}};
    verify_entries(model, vars, est.joint_cov);
    return est;
}

CovMcReport covariance_mc_check(const SpectralModel& model, int n_realizations,
                                const std::vector<Vec2>& lags, int n_waves, std::uint64_t seed) {
    if (n_realizations < 100)
        throw std::invalid_argument("covariance_mc_check: need >= 100 realizations");
    CovMcReport rep;
    rep.rows.resize(lags.size());
    for (std::size_t i = 0; i < lags.size(); ++i) rep.rows[i].lag = lags[i];
    std::vector<double> sum(lags.size(), 0.0), sum2(lags.size(), 0.0);
    for (int t = 0; t < n_realizations; ++t) {
        SplitMix64 rng(derive_seed(seed, t));
        FieldRealization f = sample_field(model, n_waves, rng);
        FieldEvaluator ev(f);
        double f0 = ev.value({0.0, 0.0});
        for (std::size_t i = 0; i < lags.size(); ++i) {
            double prod = f0 * ev.value(lags[i]);
            sum[i] += prod;
            sum2[i] += prod * prod;
        }
    }
    for (std::size_t i = 0; i < lags.size(); ++i) {
        CovCheckRow& row = rep.rows[i];
        row.empirical = sum[i] / n_realizations;
        double var = sum2[i] / n_realizations - row.empirical * row.empirical;
        row.stderr_ = std::sqrt(std::max(0.0, var) / n_realizations);
        row.expected = covariance_lag(model, lags[i]);
        rep.max_abs_error = std::max(rep.max_abs_error, std::abs(row.empirical - row.expected));
    }
    return rep;
}

}  // namespace tanglab
