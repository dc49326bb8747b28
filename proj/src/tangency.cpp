#include "tanglab/tangency.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace tanglab {

namespace {

struct MarginInfo {
    double margin = 0.0;
    bool ok = false;
};

MarginInfo margin_at(const VectorFieldSpec& vf, const FieldEvaluator& field, const Vec2& x) {
    EvalResult r = field.full(x);
    VfEval e = eval_vf(vf, field, x);
    double gf = r.grad.norm(), gv = e.grad_vf.norm();
    MarginInfo m;
    if (gf <= 0.0 || gv <= 0.0) return m;
    m.margin = std::abs(r.grad.cross(e.grad_vf)) / (gf * gv);
    m.ok = true;
    return m;
}

// Newton projection onto f = 0 along the gradient.
bool project_f(const FieldEvaluator& field, Vec2& p, double tol_f_abs) {
    for (int it = 0; it < 30; ++it) {
        double f;
        Vec2 g;
        field.value_grad(p, f, g);
        if (std::abs(f) <= tol_f_abs) return true;
        double g2 = g.norm2();
        if (g2 < 1e-18) return false;
        p -= g * (f / g2);
    }
    return false;
}

// Walks along the zero curve of f from a point near `from` toward `target`
// (tangent prediction, gradient-projection correction). True iff the target
// is reached, i.e. both points lie on the same connected curve branch.
bool same_branch(const FieldEvaluator& field, Vec2 from, const Vec2& target, double step_cap,
                 double tol_f_abs) {
    if (!project_f(field, from, tol_f_abs)) return false;
    for (int it = 0; it < 24; ++it) {
        Vec2 d = target - from;
        double dist = d.norm();
        if (dist < 1e-5) return true;
        double val;
        Vec2 g;
        field.value_grad(from, val, g);
        double gn = g.norm();
        if (gn < 1e-12) return false;
        Vec2 tangent = g.perp() * (1.0 / gn);
        double along = tangent.dot(d);
        from += tangent * (along >= 0 ? 1.0 : -1.0) * std::min(step_cap, dist);
        if (!project_f(field, from, tol_f_abs)) return false;
    }
    return (target - from).norm() < 1e-5;
}

// 2-D Newton on (f, Vf) from a seed; returns true on convergence within
// max_dist of the seed.
bool polish_joint_zero(const VectorFieldSpec& vf, const FieldEvaluator& field, Vec2& p,
                       double tol_f_abs, double tol_vf_abs, double max_dist) {
    Vec2 seed = p;
    for (int it = 0; it < 40; ++it) {
        EvalResult r = field.full(p);
        VfEval e = eval_vf(vf, field, p);
        if (std::abs(r.value) <= tol_f_abs && std::abs(e.vf) <= tol_vf_abs)
            return (p - seed).norm() <= max_dist;
        double det = r.grad.x * e.grad_vf.y - r.grad.y * e.grad_vf.x;
        if (std::abs(det) < 1e-16) return false;
        double dx = (r.value * e.grad_vf.y - e.vf * r.grad.y) / det;
        double dy = (e.vf * r.grad.x - r.value * e.grad_vf.x) / det;
        p -= Vec2{dx, dy};
        if ((p - seed).norm() > 4.0 * max_dist) return false;
    }
    return false;
}

struct CurveScanResult {
    std::vector<Vec2> roots;
    bool unresolved = false;
    double min_grad_norm = 1e300;
};

// Sign scan of Vf along a polyline (assumed to lie on f = 0) with
// predictor-corrector refinement of each sign-change arc.
CurveScanResult scan_curve(const std::vector<Vec2>& vts, const VectorFieldSpec& vf,
                           const FieldEvaluator& field, double tol_f_abs, double tol_vf_abs) {
    CurveScanResult out;
    std::size_t n = vts.size();
    if (n < 2) return out;
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        double f;
        Vec2 g;
        field.value_grad(vts[i], f, g);
        Vec2 a = vf.coeff_value(vts[i]);
        vals[i] = a.dot(g);
        out.min_grad_norm = std::min(out.min_grad_norm, g.norm());
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double va = vals[i], vb = vals[i + 1];
        if ((va > 0) == (vb > 0)) continue;
        Vec2 a = vts[i], b = vts[i + 1];
        bool found = false;
        for (int it = 0; it < 60; ++it) {
            // predictor: midpoint of the bracket chord; corrector: back to f=0
            Vec2 m = (a + b) * 0.5;
            if (!project_f(field, m, tol_f_abs)) break;
            double fm;
            Vec2 gm;
            field.value_grad(m, fm, gm);
            double vm = vf.coeff_value(m).dot(gm);
            if (std::abs(vm) <= tol_vf_abs) {
                out.roots.push_back(m);
                found = true;
                break;
            }
            if ((vm > 0) == (va > 0)) {
                a = m;
                va = vm;
            } else {
                b = m;
            }
        }
        if (!found) out.unresolved = true;
    }
    return out;
}

void finalize_records(ComponentTangencies& ct, const VectorFieldSpec& vf,
                      const FieldEvaluator& field, const std::vector<Vec2>& roots, double beta) {
    for (const Vec2& r : roots) {
        MarginInfo m = margin_at(vf, field, r);
        if (!m.ok) {
            ct.degenerate = true;
            continue;
        }
        TangencyRecord rec;
        rec.location = r;
        rec.margin = m.margin;
        rec.sub_beta = m.margin <= beta;
        ct.records.push_back(rec);
        ct.min_margin = std::min(ct.min_margin, m.margin);
    }
    ct.k = static_cast<int>(ct.records.size());
}

// Chord subdivision of a polyline onto the given zero set, down to max_len.
std::vector<Vec2> densify_on_field(const ScalarField& field, const std::vector<Vec2>& vts,
                                   double max_len, double tol_abs) {
    std::vector<Vec2> cur = vts;
    for (int pass = 0; pass < 5; ++pass) {
        bool any = false;
        std::vector<Vec2> out;
        out.reserve(cur.size() * 2);
        out.push_back(cur.front());
        for (std::size_t i = 1; i < cur.size(); ++i) {
            Vec2 a = cur[i - 1], b = cur[i];
            if ((b - a).norm() > max_len) {
                Vec2 m = (a + b) * 0.5;
                double f;
                Vec2 g;
                for (int it = 0; it < 20; ++it) {
                    field.value_grad(m, f, g);
                    if (std::abs(f) <= tol_abs) break;
                    double g2 = g.norm2();
                    if (g2 < 1e-18) break;
                    m -= g * (f / g2);
                }
                if ((m - (a + b) * 0.5).norm() < 2.0 * max_len) {
                    out.push_back(m);
                    any = true;
                }
            }
            out.push_back(b);
        }
        cur.swap(out);
        if (!any) break;
    }
    return cur;
}

long long cell_key(double x, double y, double cell) {
    return (static_cast<long long>(std::floor(x / cell)) << 32) ^
           (static_cast<long long>(std::floor(y / cell)) & 0xffffffffLL);
}

}  // namespace

ComponentTangencies count_tangencies_on_curve(const NodalComponent& comp,
                                              const VectorFieldSpec& vf,
                                              const FieldEvaluator& field, double beta,
                                              double tol_f_abs, double tol_vf_abs) {
    ComponentTangencies ct;
    CurveScanResult scan = scan_curve(comp.vertices, vf, field, tol_f_abs, tol_vf_abs);
    ct.unresolved = scan.unresolved;
    ct.min_grad_norm = scan.min_grad_norm;
    finalize_records(ct, vf, field, scan.roots, beta);
    return ct;
}

IntersectionCounts count_via_intersections(const std::vector<NodalComponent>& f_comps,
                                           const std::vector<NodalComponent>& vf_comps,
                                           const VectorFieldSpec& vf,
                                           const FieldEvaluator& field, const DomainSpec& dom,
                                           double grid_h, double beta, double tol_f_abs,
                                           double tol_vf_abs) {
    IntersectionCounts out;
    out.per_component.resize(f_comps.size());

    const double cell = grid_h;
    const double near_miss = 0.35 * grid_h;
    struct SegRef {
        int comp, seg;
        Vec2 shift;
    };
    // On the torus the two polyline families may sit in different fundamental
    // windows, so every Vf segment is registered under its period shifts too.
    std::vector<Vec2> shifts{{0.0, 0.0}};
    if (dom.kind == DomainKind::Torus) {
        shifts.clear();
        for (int sx = -1; sx <= 1; ++sx)
            for (int sy = -1; sy <= 1; ++sy) shifts.push_back({sx * dom.side, sy * dom.side});
    }
    std::unordered_map<long long, std::vector<SegRef>> vf_segs;
    for (std::size_t ci = 0; ci < vf_comps.size(); ++ci) {
        const auto& v = vf_comps[ci].vertices;
        for (std::size_t si = 0; si + 1 < v.size(); ++si) {
            Vec2 m = (v[si] + v[si + 1]) * 0.5;
            for (const Vec2& s : shifts)
                vf_segs[cell_key(m.x + s.x, m.y + s.y, cell)].push_back(
                    {static_cast<int>(ci), static_cast<int>(si), s});
        }
    }

    // candidate roots per f component
    std::vector<std::vector<Vec2>> roots(f_comps.size());
    auto add_root = [&](std::size_t comp_idx, const Vec2& r) {
        auto& rs = roots[comp_idx];
        for (const Vec2& q : rs)
            if ((q - r).norm() < 1e-6) return;
        rs.push_back(r);
    };

    auto sweep_component = [&](std::size_t fi, const std::vector<Vec2>& fv, bool open) {
        for (std::size_t si = 0; si + 1 < fv.size(); ++si) {
            Vec2 a = fv[si], b = fv[si + 1];
            Vec2 m = (a + b) * 0.5;
            long long kx = static_cast<long long>(std::floor(m.x / cell));
            long long ky = static_cast<long long>(std::floor(m.y / cell));
            for (long long dx = -1; dx <= 1; ++dx) {
                for (long long dy = -1; dy <= 1; ++dy) {
                    auto it = vf_segs.find(((kx + dx) << 32) ^ ((ky + dy) & 0xffffffffLL));
                    if (it == vf_segs.end()) continue;
                    for (const SegRef& ref : it->second) {
                        const auto& wv = vf_comps[ref.comp].vertices;
                        Vec2 c = wv[ref.seg] + ref.shift, d = wv[ref.seg + 1] + ref.shift;
                        Vec2 seed;
                        double t = segment_intersect_t(a, b, c, d);
                        if (t >= 0.0) {
                            seed = a + (b - a) * t;
                        } else {
                            double dist = std::min(
                                std::min(dist_point_segment(c, a, b), dist_point_segment(d, a, b)),
                                std::min(dist_point_segment(a, c, d), dist_point_segment(b, c, d)));
                            if (dist > near_miss) continue;
                            seed = (a + b + c + d) * 0.25;
                        }
                        Vec2 p = seed;
                        if (!polish_joint_zero(vf, field, p, tol_f_abs, tol_vf_abs, grid_h))
                            continue;
                        // the root must lie on this component's curve: it has
                        // to be reachable from the seeding chord along the
                        // zero set, and clipped open components do not own
                        // roots past their endpoints
                        if (!same_branch(field, (a + b) * 0.5, p, 0.3 * grid_h, tol_f_abs))
                            continue;
                        if (open) {
                            const Vec2 &front = fv.front(), &back = fv.back();
                            if ((p - front).norm() <= grid_h &&
                                (p - front).dot(fv[1] - front) < 0.0)
                                continue;
                            if ((p - back).norm() <= grid_h &&
                                (p - back).dot(fv[fv.size() - 2] - back) < 0.0)
                                continue;
                        }
                        add_root(fi, p);
                    }
                }
            }
        }
    };

    for (std::size_t fi = 0; fi < f_comps.size(); ++fi)
        sweep_component(fi, f_comps[fi].vertices, !f_comps[fi].closed);

    // Resolution escalation for suspicious closed contractible components: an
    // odd or sub-two count on a simple closed curve indicates chord-level
    // misses, so rescan against an eightfold-densified polyline.
    FieldValueAdapter f_adapter(field);
    VfScalarAdapter vf_adapter(vf, field);
    for (std::size_t fi = 0; fi < f_comps.size(); ++fi) {
        const auto& comp = f_comps[fi];
        if (!(comp.closed && comp.contractible())) continue;
        int k = static_cast<int>(roots[fi].size());
        if (k >= 2 && k % 2 == 0) continue;
        auto dense = densify_on_field(f_adapter, comp.vertices, grid_h / 8.0, tol_f_abs);
        CurveScanResult scan = scan_curve(dense, vf, field, tol_f_abs, tol_vf_abs);
        for (const Vec2& r : scan.roots) {
            Vec2 p = r;
            if (polish_joint_zero(vf, field, p, tol_f_abs, tol_vf_abs, grid_h)) add_root(fi, p);
        }
        out.per_component[fi].unresolved = out.per_component[fi].unresolved || scan.unresolved;
    }

    for (std::size_t fi = 0; fi < f_comps.size(); ++fi) {
        ComponentTangencies& ct = out.per_component[fi];
        finalize_records(ct, vf, field, roots[fi], beta);
        const auto& comp = f_comps[fi];
        out.total_roots += ct.k;
        for (const auto& rec : ct.records) {
            bool in_ball = dom.kind == DomainKind::Torus ||
                           rec.location.norm() <= dom.radius;
            if (!in_ball) continue;
            ++out.roots_in_ball;
            if (comp.containment == Containment::Contained) {
                if (comp.excised)
                    ++out.contained_excised_roots;
                else
                    ++out.contained_roots;
            } else {
                ++out.boundary_roots_in_ball;
            }
        }
    }
    return out;
}

int excise_zeros(const VectorFieldSpec& vf, std::vector<NodalComponent>& comps, double rho) {
    if (rho < 0.0) throw std::invalid_argument("excise_zeros: negative radius");
    if (rho == 0.0 || vf.zeros.empty()) return 0;
    int flagged = 0;
    for (auto& comp : comps) {
        bool hit = false;
        for (const Vec2& z0 : vf.zeros) {
            // periodic copies of the zero covering the (lifted) bbox
            int ix_lo = static_cast<int>(std::floor((comp.bbox_min.x - z0.x - rho) / vf.side));
            int ix_hi = static_cast<int>(std::ceil((comp.bbox_max.x - z0.x + rho) / vf.side));
            int iy_lo = static_cast<int>(std::floor((comp.bbox_min.y - z0.y - rho) / vf.side));
            int iy_hi = static_cast<int>(std::ceil((comp.bbox_max.y - z0.y + rho) / vf.side));
            for (int ix = ix_lo; ix <= ix_hi && !hit; ++ix) {
                for (int iy = iy_lo; iy <= iy_hi && !hit; ++iy) {
                    Vec2 z = z0 + Vec2{ix * vf.side, iy * vf.side};
                    for (std::size_t si = 0; si + 1 < comp.vertices.size(); ++si) {
                        if (dist_point_segment(z, comp.vertices[si], comp.vertices[si + 1]) <=
                            rho) {
                            hit = true;
                            break;
                        }
                    }
                }
            }
            if (hit) break;
        }
        if (hit) {
            comp.excised = true;
            ++flagged;
        }
    }
    return flagged;
}

void mark_method_agreement(ComponentTangencies& a, ComponentTangencies& b) {
    for (auto& ra : a.records) {
        for (auto& rb : b.records) {
            if ((ra.location - rb.location).norm() < 1e-5) {
                ra.method_agreement = true;
                rb.method_agreement = true;
            }
        }
    }
}

}  // namespace tanglab
