#include "tanglab/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace tanglab {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Crossing {
    Vec2 pos;       // refined, in the frame of the edge's base vertex
    int degree = 0;
    int seg[2] = {-1, -1};
};

struct Segment {
    int e0 = -1, e1 = -1;  // crossing indices
    Vec2 p0, p1;           // positions in this cell's frame (unwrapped)
    bool used = false;
};

// Safeguarded Newton along the edge [a,b] with bracketing values fa, fb of
// opposite sign; stops at |f| <= tol_abs.
Vec2 refine_edge_crossing(const ScalarField& field, const Vec2& a, const Vec2& b, double fa,
                          double fb, double tol_abs) {
    double t_lo = 0.0, t_hi = 1.0, f_lo = fa;
    double t = fa / (fa - fb);
    if (!(t > 0.0 && t < 1.0)) t = 0.5;
    Vec2 ab = b - a;
    Vec2 p = a + ab * t;
    for (int iter = 0; iter < 80; ++iter) {
        double f;
        Vec2 g;
        field.value_grad(p, f, g);
        if (std::abs(f) <= tol_abs) return p;
        if ((f > 0) == (f_lo > 0)) {
            t_lo = t;
            f_lo = f;
        } else {
            t_hi = t;
        }
        double fp = g.dot(ab);
        double t_next = (fp != 0.0) ? t - f / fp : -1.0;
        if (!(t_next > t_lo && t_next < t_hi)) t_next = 0.5 * (t_lo + t_hi);
        t = t_next;
        p = a + ab * t;
    }
    return p;
}

// Newton projection of a point back onto the zero set along the gradient.
bool project_to_zero(const ScalarField& field, Vec2& p, double tol_abs) {
    for (int iter = 0; iter < 30; ++iter) {
        double f;
        Vec2 g;
        field.value_grad(p, f, g);
        if (std::abs(f) <= tol_abs) return true;
        double g2 = g.norm2();
        if (g2 < 1e-18) return false;
        p -= g * (f / g2);
    }
    return false;
}

void subdivide_polyline(std::vector<Vec2>& vts, const ScalarField& field, double h,
                        double tol_abs) {
    for (int pass = 0; pass < 3; ++pass) {
        bool any = false;
        std::vector<Vec2> out;
        out.reserve(vts.size() * 2);
        out.push_back(vts.front());
        for (std::size_t i = 1; i < vts.size(); ++i) {
            Vec2 a = vts[i - 1], b = vts[i];
            if ((b - a).norm() > 1.0001 * h) {
                Vec2 m = (a + b) * 0.5;
                if (project_to_zero(field, m, tol_abs) && (m - (a + b) * 0.5).norm() < h) {
                    out.push_back(m);
                    any = true;
                }
            }
            out.push_back(b);
        }
        vts.swap(out);
        if (!any) break;
    }
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && (hull[k - 1] - hull[k - 2]).cross(pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k > 1 ? k - 1 : k);
    return hull;
}

double hull_diameter(const std::vector<Vec2>& pts) {
    auto hull = convex_hull(pts);
    std::size_t n = hull.size();
    if (n < 2) return 0.0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            best = std::max(best, (hull[j] - hull[i]).norm());
    return best;
}

double shoelace(const std::vector<Vec2>& v) {
    double s = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) s += v[i - 1].cross(v[i]);
    return 0.5 * std::abs(s);
}

}  // namespace

double DomainSpec::area() const {
    return kind == DomainKind::Plane ? kPi * radius * radius : side * side;
}

double enclosed_area(const NodalComponent& comp) {
    if (!comp.closed) throw std::invalid_argument("enclosed_area: open component");
    if (!comp.contractible())
        throw std::invalid_argument("enclosed_area: non-contractible component");
    return shoelace(comp.vertices);
}

void classify_components(std::vector<NodalComponent>& comps, double d_long, double xi) {
    for (auto& c : comps) {
        if (c.closed && c.contractible() && c.enclosed_area < xi)
            c.size_class = SizeClass::XiSmall;
        else if (c.diameter > d_long)
            c.size_class = SizeClass::DLong;
        else
            c.size_class = SizeClass::Normal;
    }
}

bool polyline_is_simple(const NodalComponent& comp, double cell_hint) {
    const auto& v = comp.vertices;
    std::size_t nseg = v.size() >= 2 ? v.size() - 1 : 0;
    if (nseg < 3) return true;
    double cell = cell_hint > 0 ? cell_hint : 0.1;
    auto key = [](long long a, long long b) { return (a << 32) ^ (b & 0xffffffffLL); };
    std::unordered_map<long long, std::vector<int>> buckets;
    for (std::size_t i = 0; i < nseg; ++i) {
        Vec2 m = (v[i] + v[i + 1]) * 0.5;
        buckets[key(static_cast<long long>(std::floor(m.x / cell)),
                    static_cast<long long>(std::floor(m.y / cell)))]
            .push_back(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < nseg; ++i) {
        Vec2 m = (v[i] + v[i + 1]) * 0.5;
        long long kx = static_cast<long long>(std::floor(m.x / cell));
        long long ky = static_cast<long long>(std::floor(m.y / cell));
        for (long long dx = -1; dx <= 1; ++dx) {
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = buckets.find(key(kx + dx, ky + dy));
                if (it == buckets.end()) continue;
                for (int j : it->second) {
                    if (j <= static_cast<int>(i) + 1) continue;
                    if (comp.closed && i == 0 && static_cast<std::size_t>(j) == nseg - 1)
                        continue;
                    if (segment_intersect_t(v[i], v[i + 1], v[j], v[j + 1]) >= 0.0) return false;
                }
            }
        }
    }
    return true;
}

GridGeom extraction_grid(const DomainSpec& dom, double grid_h) {
    return dom.kind == DomainKind::Plane ? plane_grid(dom.grid_halfwidth(), grid_h)
                                         : torus_grid(dom.side, grid_h);
}

GridGeom derived_field_grid(const GridGeom& base, DomainKind kind) {
    GridGeom g = base;
    g.x0 += (0.6180339887498949 - 1.0) * base.h;
    g.y0 += (0.2360679774997897 - 1.0) * base.h;
    if (kind == DomainKind::Plane) {
        g.nx += 2;
        g.ny += 2;
    } else {
        g.x0 += base.h;  // keep the fundamental-domain tiling
        g.y0 += base.h;
    }
    return g;
}

ScalarGrid sample_grid(const ScalarField& field, const GridGeom& geom) {
    ScalarGrid grid;
    grid.geom = geom;
    grid.v.resize(static_cast<std::size_t>(geom.nx) * geom.ny);
    for (int ix = 0; ix < geom.nx; ++ix)
        for (int iy = 0; iy < geom.ny; ++iy) grid.at(ix, iy) = field.value(geom.pos(ix, iy));
    return grid;
}

ExtractionResult extract_nodal_set(const ScalarField& field, const DomainSpec& dom, double grid_h,
                                   double tol_f) {
    return extract_from_grid(field, sample_grid(field, extraction_grid(dom, grid_h)), dom, tol_f);
}

ExtractionResult extract_from_grid(const ScalarField& field, const ScalarGrid& grid,
                                   const DomainSpec& dom, double tol_f) {
    const GridGeom& geom = grid.geom;
    if (geom.h > 0.1 + 1e-12)
        throw std::invalid_argument("extract: grid_h must be <= 0.1 (10 samples per wavelength)");
    const bool torus = geom.torus_wrap;
    const int nx = geom.nx, ny = geom.ny;
    const double h = geom.h;

    ExtractionResult result;
    result.field_scale = grid.abs_max();
    const double scale = result.field_scale;
    if (scale == 0.0)
        throw std::runtime_error("extract: degenerate field (identically zero grid)");
    const double tol_abs = tol_f * scale;

    // Degenerate grid vertices: |f| below tolerance gets nudged by h*1e-3 in a
    // fixed direction and re-evaluated. More than 0.1% such vertices signals a
    // symmetric deterministic fixture or a measure-zero event.
    std::unordered_map<long long, std::pair<Vec2, double>> nudged;
    const long long stride = ny;
    // fixed oblique unit direction, so nudges leave axis-aligned zero lines
    const Vec2 nudge_dir{0.7981274804501647, 0.6024886098095732};
    for (int ix = 0; ix < nx; ++ix) {
        for (int iy = 0; iy < ny; ++iy) {
            if (std::abs(grid.at(ix, iy)) < tol_abs) {
                Vec2 p = geom.pos(ix, iy) + nudge_dir * (h * 1e-3);
                nudged[ix * stride + iy] = {p, field.value(p)};
            }
        }
    }
    result.nudged_vertices = static_cast<int>(nudged.size());
    result.total_vertices = static_cast<long>(nx) * ny;
    if (result.nudged_vertices > 1e-3 * static_cast<double>(result.total_vertices))
        throw std::runtime_error("extract: degenerate field (>0.1% grid vertices nudged)");

    auto vertex = [&](int ix, int iy) -> std::pair<Vec2, double> {
        // value and (possibly nudged) position of grid vertex (ix,iy), in the
        // unwrapped frame (indices may equal nx/ny on the torus)
        int wx = torus ? ix % nx : ix;
        int wy = torus ? iy % ny : iy;
        Vec2 shift{(ix - wx) * h, (iy - wy) * h};
        auto it = nudged.find(static_cast<long long>(wx) * stride + wy);
        if (it != nudged.end()) return {it->second.first + shift, it->second.second};
        return {geom.pos(wx, wy) + shift, grid.at(wx, wy)};
    };

    // Edge ids: 2*(ix*ny+iy) for the horizontal edge to (ix+1,iy), +1 for the
    // vertical edge to (ix,iy+1); indices wrapped on the torus.
    std::unordered_map<long long, int> edge_to_crossing;
    std::vector<Crossing> crossings;
    auto crossing_for_edge = [&](int ix, int iy, int vertical) -> int {
        int wx = torus ? ix % nx : ix;
        int wy = torus ? iy % ny : iy;
        long long id = 2 * (static_cast<long long>(wx) * stride + wy) + vertical;
        auto it = edge_to_crossing.find(id);
        if (it != edge_to_crossing.end()) return it->second;
        auto [pa, fa] = vertex(wx, wy);
        auto [pb, fb] = vertex(wx + (vertical ? 0 : 1), wy + (vertical ? 1 : 0));
        int idx = -1;
        if ((fa > 0) != (fb > 0)) {
            Crossing c;
            c.pos = refine_edge_crossing(field, pa, pb, fa, fb, tol_abs);
            idx = static_cast<int>(crossings.size());
            crossings.push_back(c);
        }
        edge_to_crossing[id] = idx;
        return idx;
    };

    std::vector<Segment> segments;
    const int cx_end = torus ? nx : nx - 1;
    const int cy_end = torus ? ny : ny - 1;
    for (int ix = 0; ix < cx_end; ++ix) {
        for (int iy = 0; iy < cy_end; ++iy) {
            auto [p00, f00] = vertex(ix, iy);
            auto [p10, f10] = vertex(ix + 1, iy);
            auto [p11, f11] = vertex(ix + 1, iy + 1);
            auto [p01, f01] = vertex(ix, iy + 1);
            bool s00 = f00 > 0, s10 = f10 > 0, s11 = f11 > 0, s01 = f01 > 0;
            if (s00 == s10 && s10 == s11 && s11 == s01) continue;

            // edges: 0=bottom, 1=right, 2=top, 3=left
            int eidx[4] = {-1, -1, -1, -1};
            if (s00 != s10) eidx[0] = crossing_for_edge(ix, iy, 0);
            if (s10 != s11) eidx[1] = crossing_for_edge(ix + 1, iy, 1);
            if (s01 != s11) eidx[2] = crossing_for_edge(ix, iy + 1, 0);
            if (s00 != s01) eidx[3] = crossing_for_edge(ix, iy, 1);

            auto local_pos = [&](int edge) -> Vec2 {
                Vec2 p = crossings[eidx[edge]].pos;
                if (!torus) return p;
                // the crossing is stored in its wrapped base frame; shift it
                // next to this cell
                Vec2 ref;
                switch (edge) {
                    case 0: ref = (p00 + p10) * 0.5; break;
                    case 1: ref = (p10 + p11) * 0.5; break;
                    case 2: ref = (p01 + p11) * 0.5; break;
                    default: ref = (p00 + p01) * 0.5; break;
                }
                double sx = nx * h, sy = ny * h;
                p.x += std::nearbyint((ref.x - p.x) / sx) * sx;
                p.y += std::nearbyint((ref.y - p.y) / sy) * sy;
                return p;
            };
            auto emit = [&](int ea, int eb) {
                Segment s;
                s.e0 = eidx[ea];
                s.e1 = eidx[eb];
                s.p0 = local_pos(ea);
                s.p1 = local_pos(eb);
                int si = static_cast<int>(segments.size());
                segments.push_back(s);
                for (int c : {s.e0, s.e1}) {
                    Crossing& cr = crossings[c];
                    if (cr.degree < 2) cr.seg[cr.degree] = si;
                    ++cr.degree;
                }
            };

            int crossed = (eidx[0] >= 0) + (eidx[1] >= 0) + (eidx[2] >= 0) + (eidx[3] >= 0);
            if (crossed == 2) {
                int first = -1, second = -1;
                for (int e = 0; e < 4; ++e) {
                    if (eidx[e] < 0) continue;
                    if (first < 0)
                        first = e;
                    else
                        second = e;
                }
                emit(first, second);
            } else if (crossed == 4) {
                // saddle cell: pair edges by the exact sign at the center
                Vec2 center = (p00 + p11) * 0.5;
                bool sc = field.value(center) > 0;
                if (sc == s00) {
                    emit(0, 1);
                    emit(2, 3);
                } else {
                    emit(0, 3);
                    emit(1, 2);
                }
            }
        }
    }

    // Stitch segments into chains; open chains start at degree-1 crossings
    // (grid border on the plane).
    std::vector<NodalComponent> comps;
    auto walk = [&](int start_seg, bool enter_at_0) {
        NodalComponent comp;
        std::vector<Vec2> vts;
        int si = start_seg;
        Vec2 offset{0, 0};
        vts.push_back(enter_at_0 ? segments[si].p0 : segments[si].p1);
        int first_crossing = enter_at_0 ? segments[si].e0 : segments[si].e1;
        while (true) {
            Segment& s = segments[si];
            s.used = true;
            Vec2 pin = enter_at_0 ? s.p0 : s.p1;
            Vec2 pout = enter_at_0 ? s.p1 : s.p0;
            int cout_idx = enter_at_0 ? s.e1 : s.e0;
            offset += vts.back() - (pin + offset);
            vts.push_back(pout + offset);
            if (cout_idx == first_crossing) {
                comp.closed = true;
                break;
            }
            const Crossing& cr = crossings[cout_idx];
            int next = (cr.seg[0] == si) ? cr.seg[1] : cr.seg[0];
            if (next < 0 || segments[next].used) break;
            si = next;
            enter_at_0 = segments[si].e0 == cout_idx;
        }
        comp.vertices = std::move(vts);
        return comp;
    };

    for (std::size_t c = 0; c < crossings.size(); ++c) {
        if (crossings[c].degree != 1) continue;
        int si = crossings[c].seg[0];
        if (si < 0 || segments[si].used) continue;
        comps.push_back(walk(si, segments[si].e0 == static_cast<int>(c)));
    }
    for (std::size_t si = 0; si < segments.size(); ++si)
        if (!segments[si].used) comps.push_back(walk(static_cast<int>(si), true));

    double side_len = torus ? nx * h : 0.0;
    for (auto& comp : comps) {
        if (comp.closed && torus) {
            Vec2 disp = comp.vertices.back() - comp.vertices.front();
            comp.winding = {static_cast<int>(std::lround(disp.x / side_len)),
                            static_cast<int>(std::lround(disp.y / side_len))};
            if (!comp.contractible()) {
                // non-contractible loops close only modulo the period; keep
                // one fundamental traversal, the endpoints differ by it
                comp.vertices.pop_back();
                comp.vertices.push_back(comp.vertices.front() +
                                        Vec2{comp.winding.first * side_len,
                                             comp.winding.second * side_len});
            }
        }
        subdivide_polyline(comp.vertices, field, h, tol_abs);

        comp.bbox_min = comp.bbox_max = comp.vertices.front();
        double max_r2 = 0.0;
        for (const auto& v : comp.vertices) {
            comp.bbox_min.x = std::min(comp.bbox_min.x, v.x);
            comp.bbox_min.y = std::min(comp.bbox_min.y, v.y);
            comp.bbox_max.x = std::max(comp.bbox_max.x, v.x);
            comp.bbox_max.y = std::max(comp.bbox_max.y, v.y);
            max_r2 = std::max(max_r2, v.norm2());
        }
        comp.diameter = hull_diameter(comp.vertices);
        if (dom.kind == DomainKind::Plane) {
            comp.containment = (comp.closed && std::sqrt(max_r2) < dom.radius)
                                   ? Containment::Contained
                                   : Containment::BoundaryIntersecting;
        } else {
            comp.containment = comp.contractible() ? Containment::Contained
                                                   : Containment::BoundaryIntersecting;
        }
        if (comp.closed && comp.contractible()) comp.enclosed_area = shoelace(comp.vertices);
    }

    // canonical orientation and ordering (lexicographic smallest vertex)
    auto lex_less = [](const Vec2& a, const Vec2& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    };
    for (auto& comp : comps) {
        auto& v = comp.vertices;
        if (comp.closed && comp.contractible()) {
            v.pop_back();
            std::size_t m = 0;
            for (std::size_t i = 1; i < v.size(); ++i)
                if (lex_less(v[i], v[m])) m = i;
            std::rotate(v.begin(), v.begin() + m, v.end());
            if (v.size() >= 3 && lex_less(v.back(), v[1])) std::reverse(v.begin() + 1, v.end());
            v.push_back(v.front());
        } else if (!comp.closed) {
            if (lex_less(v.back(), v.front())) std::reverse(v.begin(), v.end());
        }
    }
    std::sort(comps.begin(), comps.end(), [&](const NodalComponent& a, const NodalComponent& b) {
        const Vec2 &va = a.vertices.front(), &vb = b.vertices.front();
        return va.x != vb.x ? va.x < vb.x : va.y < vb.y;
    });

    result.components = std::move(comps);
    return result;
}

}  // namespace tanglab
