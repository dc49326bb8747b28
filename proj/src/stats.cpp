#include "tanglab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace tanglab {

namespace {
constexpr double kPi = 3.14159265358979323846;

PerKEstimate mean_stderr(const std::vector<double>& xs) {
    PerKEstimate e;
    e.n_trials = static_cast<long>(xs.size());
    if (xs.empty()) return e;
    double m = 0.0;
    for (double x : xs) m += x;
    m /= xs.size();
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    e.mean = m;
    e.stderr_ = xs.size() > 1 ? std::sqrt(v / (xs.size() - 1) / xs.size()) : 0.0;
    return e;
}

}  // namespace

double DirectionDistribution::mean_k() const {
    double s = 0.0;
    for (const auto& [k, p] : probabilities) s += k * p;
    return s;
}

double DirectionDistribution::mass_zero_or_odd() const {
    double s = 0.0;
    for (const auto& [k, p] : probabilities)
        if (k == 0 || k % 2 != 0) s += p;
    return s;
}

DirectionDistribution direction_distribution(
    const std::vector<std::pair<int, ComponentFlag>>& items) {
    DirectionDistribution d;
    for (const auto& [k, flag] : items) {
        switch (flag) {
            case ComponentFlag::Ok:
                d.counts[k] += 1;
                d.total += 1;
                break;
            case ComponentFlag::SubBetaIncluded:
                d.counts[k] += 1;
                d.total += 1;
                d.ledger.sub_beta_included_flagged += 1;
                break;
            case ComponentFlag::Boundary: d.ledger.boundary += 1; break;
            case ComponentFlag::Excised: d.ledger.excised += 1; break;
            case ComponentFlag::Unresolved: d.ledger.unresolved += 1; break;
        }
    }
    if (d.total == 0) throw std::runtime_error("direction_distribution: empty measure");
    for (const auto& [k, c] : d.counts)
        d.probabilities[k] = static_cast<double>(c) / static_cast<double>(d.total);
    return d;
}

double tv_distance(const std::map<int, double>& p1, const std::map<int, double>& p2) {
    std::set<int> keys;
    for (const auto& [k, v] : p1) keys.insert(k);
    for (const auto& [k, v] : p2) keys.insert(k);
    double l1 = 0.0;
    for (int k : keys) {
        auto i1 = p1.find(k), i2 = p2.find(k);
        double a = i1 == p1.end() ? 0.0 : i1->second;
        double b = i2 == p2.end() ? 0.0 : i2->second;
        l1 += std::abs(a - b);
    }
    return 0.5 * l1;
}

double tv_distance(const DirectionDistribution& mu1, const DirectionDistribution& mu2) {
    return tv_distance(mu1.probabilities, mu2.probabilities);
}

EstimateTable estimate_ck(const std::vector<TrialSummary>& trials) {
    if (trials.size() < 2) throw std::invalid_argument("estimate_ck: need >= 2 trials");
    EstimateTable t;
    t.n_trials = static_cast<long>(trials.size());
    std::set<int> ks;
    for (const auto& tr : trials)
        for (const auto& [k, c] : tr.counts) ks.insert(k);
    for (int k : ks) {
        std::vector<double> ratios;
        ratios.reserve(trials.size());
        for (const auto& tr : trials) {
            if (tr.included_total == 0) continue;
            auto it = tr.counts.find(k);
            long c = it == tr.counts.end() ? 0 : it->second;
            ratios.push_back(static_cast<double>(c) / static_cast<double>(tr.included_total));
        }
        t.per_k[k] = mean_stderr(ratios);
    }
    std::vector<double> dens, ns, meank;
    for (const auto& tr : trials) {
        if (tr.area > 0) {
            dens.push_back(tr.included_total / tr.area);
            ns.push_back(tr.contained_count / tr.area);
        }
        if (tr.included_total > 0) {
            double s = 0.0;
            for (const auto& [k, c] : tr.counts) s += static_cast<double>(k) * c;
            meank.push_back(s / tr.included_total);
        }
    }
    t.density_per_area = mean_stderr(dens);
    t.ns_constant = mean_stderr(ns);
    t.mean_tangencies = mean_stderr(meank);
    return t;
}

IdentityReport tangency_sum_check(const TrialSummary& trial) {
    IdentityReport r;
    r.lhs = trial.identity_lhs;
    r.rhs = trial.joint_zeros_in_ball;
    r.boundary_roots = trial.boundary_roots;
    r.excised_roots = trial.excised_roots;
    r.holds = r.lhs <= r.rhs;
    r.equality = r.lhs == r.rhs;
    return r;
}

SandwichReport sandwich_check(const std::vector<NodalComponent>& comps,
                              const std::vector<int>& k_of_comp, int k_select, double r, double R,
                              double center_step) {
    if (!(r > 0.0 && r < R)) throw std::invalid_argument("sandwich_check: need 0 < r < R");
    if (!(center_step > 0.0) || center_step > r / 10.0 + 1e-12)
        throw std::invalid_argument("sandwich_check: center grid step must be <= r/10");
    SandwichReport rep;

    struct CompGeo {
        const NodalComponent* c;
        std::vector<Vec2> hull;
        Vec2 bc;
        double bc_rad = 0.0;
    };
    std::vector<CompGeo> geos;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (k_select >= 0 && k_of_comp[i] != k_select) continue;
        CompGeo g;
        g.c = &comps[i];
        g.bc = (comps[i].bbox_min + comps[i].bbox_max) * 0.5;
        for (const auto& v : comps[i].vertices) g.bc_rad = std::max(g.bc_rad, (v - g.bc).norm());
        // farthest point from any center lies on the convex hull
        std::vector<Vec2> pts = comps[i].vertices;
        std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
            return a.x != b.x ? a.x < b.x : a.y < b.y;
        });
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](const Vec2& a, const Vec2& b) {
                                  return a.x == b.x && a.y == b.y;
                              }),
                  pts.end());
        if (pts.size() >= 3) {
            std::vector<Vec2> hull(2 * pts.size());
            std::size_t k = 0;
            for (std::size_t p = 0; p < pts.size(); ++p) {
                while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[p] - hull[k - 2]) <= 0) --k;
                hull[k++] = pts[p];
            }
            for (std::size_t p = pts.size() - 1, t = k + 1; p-- > 0;) {
                while (k >= t && (hull[k - 1] - hull[k - 2]).cross(pts[p] - hull[k - 2]) <= 0) --k;
                hull[k++] = pts[p];
            }
            hull.resize(k > 1 ? k - 1 : k);
            g.hull = std::move(hull);
        } else {
            g.hull = pts;
        }
        geos.push_back(std::move(g));
    }

    // mid: components fully inside B(R)
    for (const auto& g : geos) {
        double maxr = 0.0;
        for (const auto& v : g.hull) maxr = std::max(maxr, v.norm());
        if (g.c->closed && maxr < R) rep.mid += 1.0;
    }

    const double s = center_step;
    const double band = s + 0.05;  // cell diagonal plus polyline sampling allowance
    const double vol_br = kPi * r * r;
    const double cell_area = s * s;

    auto max_dist = [](const CompGeo& g, const Vec2& u) {
        double m = 0.0;
        for (const auto& v : g.hull) m = std::max(m, (v - u).norm());
        return m;
    };
    auto min_dist = [](const CompGeo& g, const Vec2& u) {
        double m = 1e300;
        const auto& vts = g.c->vertices;
        for (std::size_t i = 0; i + 1 < vts.size(); ++i)
            m = std::min(m, dist_point_segment(u, vts[i], vts[i + 1]));
        return m;
    };

    int n_half = static_cast<int>(std::ceil((R + r + s) / s));
    double lower_sum = 0.0, upper_sum = 0.0, slack_lo = 0.0, slack_hi = 0.0;
    for (int i = -n_half; i <= n_half; ++i) {
        for (int j = -n_half; j <= n_half; ++j) {
            Vec2 u{i * s, j * s};
            double ru = u.norm();
            bool in_lower = ru <= R - r - s;  // cells fully inside B(R-r)
            bool in_upper = ru <= R + r + s;  // cells covering B(R+r)
            if (!in_upper) continue;
            if (in_lower) ++rep.centers_lower;
            ++rep.centers_upper;
            for (const auto& g : geos) {
                double d_bc = (u - g.bc).norm();
                if (in_lower && g.c->closed) {
                    // contained in B(u,r): max distance over the hull
                    if (d_bc + g.bc_rad <= r - band) {
                        lower_sum += 1.0;
                    } else if (d_bc - g.bc_rad <= r + band) {
                        double md = max_dist(g, u);
                        if (md <= r) lower_sum += 1.0;
                        if (std::abs(md - r) <= band) slack_lo += 1.0;
                    }
                }
                // intersects B(u,r): min distance to the polyline
                if (d_bc - g.bc_rad > r + band) continue;
                if (d_bc + g.bc_rad <= r - band) {
                    upper_sum += 1.0;
                } else {
                    double md = min_dist(g, u);
                    if (md <= r) upper_sum += 1.0;
                    if (std::abs(md - r) <= band) slack_hi += 1.0;
                }
            }
        }
    }
    rep.lower = lower_sum * cell_area / vol_br;
    rep.upper = upper_sum * cell_area / vol_br;
    rep.slack_lower = slack_lo * cell_area / vol_br;
    rep.slack_upper = slack_hi * cell_area / vol_br;
    rep.holds = (rep.lower - rep.slack_lower <= rep.mid + 1e-9) &&
                (rep.mid <= rep.upper + rep.slack_upper + 1e-9);
    return rep;
}

ErgodicReport ergodic_check(double big_count, double big_area,
                            const std::vector<double>& small_counts, double small_area) {
    if (small_counts.empty() || !(big_area > 0) || !(small_area > 0))
        throw std::invalid_argument("ergodic_check: bad inputs");
    ErgodicReport r;
    r.spatial_density = big_count / big_area;
    double m = 0.0;
    for (double c : small_counts) m += c;
    r.ensemble_density = m / small_counts.size() / small_area;
    double denom = std::max(std::abs(r.spatial_density), std::abs(r.ensemble_density));
    r.relative_gap = denom > 0 ? std::abs(r.spatial_density - r.ensemble_density) / denom : 0.0;
    return r;
}

}  // namespace tanglab
