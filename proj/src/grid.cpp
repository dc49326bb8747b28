#include "tanglab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tanglab/fast_trig.hpp"

namespace tanglab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr int kLanes = 8;
constexpr int kReanchorRows = 64;

#if defined(__GNUC__) || defined(__clang__)
#define TANGLAB_VECTOR_EXT 1
typedef double VLanes __attribute__((vector_size(kLanes * sizeof(double))));
// unaligned view for heap buffers
typedef double VLanesU __attribute__((vector_size(kLanes * sizeof(double)), aligned(8)));
#endif

// One wave's contribution to one grid row. The 8 lane phases advance along the
// row by a fixed rotation kept in registers.
template <bool Direct, bool Grads>
inline void wave_row_kernel(int ny_pad, double A, double B, double cd, double cx, double cy,
                            double r8c, double r8s, double* __restrict zc, double* __restrict zs,
                            double* __restrict rf, double* __restrict rv, double* __restrict rgx,
                            double* __restrict rgy) {
#ifdef TANGLAB_VECTOR_EXT
    VLanes zcv = *(const VLanesU*)zc, zsv = *(const VLanesU*)zs;
    for (int c0 = 0; c0 < ny_pad; c0 += kLanes) {
        VLanes e = A * zcv + B * zsv;
        VLanes d = B * zcv - A * zsv;
        *(VLanesU*)(rf + c0) += e;
        if constexpr (Direct) *(VLanesU*)(rv + c0) += cd * d;
        if constexpr (Grads) {
            *(VLanesU*)(rgx + c0) += cx * d;
            *(VLanesU*)(rgy + c0) += cy * d;
        }
        VLanes nc = zcv * r8c - zsv * r8s;
        VLanes ns = zcv * r8s + zsv * r8c;
        zcv = nc;
        zsv = ns;
    }
    *(VLanesU*)zc = zcv;
    *(VLanesU*)zs = zsv;
#else
    for (int c0 = 0; c0 < ny_pad; c0 += kLanes) {
        double e[kLanes], d[kLanes], nc[kLanes], ns[kLanes];
        for (int l = 0; l < kLanes; ++l) e[l] = A * zc[l] + B * zs[l];
        for (int l = 0; l < kLanes; ++l) d[l] = B * zc[l] - A * zs[l];
        for (int l = 0; l < kLanes; ++l) rf[c0 + l] += e[l];
        if constexpr (Direct)
            for (int l = 0; l < kLanes; ++l) rv[c0 + l] += cd * d[l];
        if constexpr (Grads) {
            for (int l = 0; l < kLanes; ++l) rgx[c0 + l] += cx * d[l];
            for (int l = 0; l < kLanes; ++l) rgy[c0 + l] += cy * d[l];
        }
        for (int l = 0; l < kLanes; ++l) nc[l] = zc[l] * r8c - zs[l] * r8s;
        for (int l = 0; l < kLanes; ++l) ns[l] = zc[l] * r8s + zs[l] * r8c;
        for (int l = 0; l < kLanes; ++l) zc[l] = nc[l];
        for (int l = 0; l < kLanes; ++l) zs[l] = ns[l];
    }
#endif
}

}  // namespace

double ScalarGrid::abs_max() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

GridGeom plane_grid(double radius, double h) {
    if (!(radius > 0.0) || !(h > 0.0)) throw std::invalid_argument("plane_grid: bad parameters");
    GridGeom g;
    g.h = h;
    g.nx = g.ny = static_cast<int>(std::floor(2.0 * radius / h)) + 1;
    g.x0 = g.y0 = -radius;
    g.torus_wrap = false;
    return g;
}

GridGeom torus_grid(double side, double h) {
    if (!(side > 0.0) || !(h > 0.0)) throw std::invalid_argument("torus_grid: bad parameters");
    GridGeom g;
    int n = std::max(8, static_cast<int>(std::lround(side / h)));
    g.h = side / n;
    g.nx = g.ny = n;
    g.x0 = g.y0 = 0.0;
    g.torus_wrap = true;
    return g;
}

GridBundle synthesize_grids(const FieldEvaluator& ev, const GridGeom& geom,
                            const SynthRequest& req) {
    GridBundle out;
    const std::size_t cells = static_cast<std::size_t>(geom.nx) * geom.ny;
    out.f.geom = geom;
    out.f.v.assign(cells, 0.0);
    if (req.direct) {
        out.vf.geom = geom;
        out.vf.v.assign(cells, 0.0);
    }
    if (req.grads) {
        out.gx.geom = geom;
        out.gx.v.assign(cells, 0.0);
        out.gy.geom = geom;
        out.gy.v.assign(cells, 0.0);
    }

    const std::size_t n = ev.n_terms();
    const double* kx = ev.kx().data();
    const double* ky = ev.ky().data();
    const double* ac = ev.amp_cos().data();
    const double* as = ev.amp_sin().data();

    const int ny_pad = (geom.ny + kLanes - 1) / kLanes * kLanes;
    std::vector<double> row_f(ny_pad), row_vf(ny_pad), row_gx(ny_pad), row_gy(ny_pad);

    // Per-wave state: rotation along a row (step 8*ky*h), the 8 lane phases at
    // y0..y0+7h, and the row phase e(kx*x_i).
    std::vector<double> rot_c(n), rot_s(n);
    std::vector<double> step_c(n), step_s(n);
    std::vector<double> lane_c(n * kLanes), lane_s(n * kLanes);
    std::vector<double> row_c(n), row_s(n);
    std::vector<double> cdir(n), cgx(n), cgy(n);

    for (std::size_t j = 0; j < n; ++j) {
        sincos_turns(kLanes * ky[j] * geom.h, rot_s[j], rot_c[j]);
        sincos_turns(kx[j] * geom.h, step_s[j], step_c[j]);
        for (int l = 0; l < kLanes; ++l)
            sincos_turns(ky[j] * (geom.y0 + l * geom.h), lane_s[j * kLanes + l],
                         lane_c[j * kLanes + l]);
        cdir[j] = kTwoPi * (kx[j] * req.dir.x + ky[j] * req.dir.y);
        cgx[j] = kTwoPi * kx[j];
        cgy[j] = kTwoPi * ky[j];
    }

    for (int ix = 0; ix < geom.nx; ++ix) {
        if (ix % kReanchorRows == 0) {
            double x = geom.x0 + ix * geom.h;
            for (std::size_t j = 0; j < n; ++j) sincos_turns(kx[j] * x, row_s[j], row_c[j]);
        }
        std::fill(row_f.begin(), row_f.end(), 0.0);
        if (req.direct) std::fill(row_vf.begin(), row_vf.end(), 0.0);
        if (req.grads) {
            std::fill(row_gx.begin(), row_gx.end(), 0.0);
            std::fill(row_gy.begin(), row_gy.end(), 0.0);
        }

        for (std::size_t j = 0; j < n; ++j) {
            alignas(64) double zc[kLanes], zs[kLanes];
            const double rc = row_c[j], rs = row_s[j];
            for (int l = 0; l < kLanes; ++l) {
                zc[l] = rc * lane_c[j * kLanes + l] - rs * lane_s[j * kLanes + l];
                zs[l] = rc * lane_s[j * kLanes + l] + rs * lane_c[j * kLanes + l];
            }
            if (req.direct && !req.grads)
                wave_row_kernel<true, false>(ny_pad, ac[j], as[j], cdir[j], cgx[j], cgy[j],
                                             rot_c[j], rot_s[j], zc, zs, row_f.data(),
                                             row_vf.data(), nullptr, nullptr);
            else if (!req.direct && req.grads)
                wave_row_kernel<false, true>(ny_pad, ac[j], as[j], cdir[j], cgx[j], cgy[j],
                                             rot_c[j], rot_s[j], zc, zs, row_f.data(), nullptr,
                                             row_gx.data(), row_gy.data());
            else if (req.direct && req.grads)
                wave_row_kernel<true, true>(ny_pad, ac[j], as[j], cdir[j], cgx[j], cgy[j],
                                            rot_c[j], rot_s[j], zc, zs, row_f.data(),
                                            row_vf.data(), row_gx.data(), row_gy.data());
            else
                wave_row_kernel<false, false>(ny_pad, ac[j], as[j], cdir[j], cgx[j], cgy[j],
                                              rot_c[j], rot_s[j], zc, zs, row_f.data(), nullptr,
                                              nullptr, nullptr);
            double nc = row_c[j] * step_c[j] - row_s[j] * step_s[j];
            double ns = row_c[j] * step_s[j] + row_s[j] * step_c[j];
            row_c[j] = nc;
            row_s[j] = ns;
        }

        std::copy(row_f.begin(), row_f.begin() + geom.ny, out.f.v.begin() + geom.idx(ix, 0));
        if (req.direct)
            std::copy(row_vf.begin(), row_vf.begin() + geom.ny,
                      out.vf.v.begin() + geom.idx(ix, 0));
        if (req.grads) {
            std::copy(row_gx.begin(), row_gx.begin() + geom.ny,
                      out.gx.v.begin() + geom.idx(ix, 0));
            std::copy(row_gy.begin(), row_gy.begin() + geom.ny,
                      out.gy.v.begin() + geom.idx(ix, 0));
        }
    }
    return out;
}

double grid_c2_norm(const FieldEvaluator& ev, const GridGeom& geom) {
    double m = 0.0;
    for (int ix = 0; ix < geom.nx; ++ix) {
        for (int iy = 0; iy < geom.ny; ++iy) {
            EvalResult r = ev.full(geom.pos(ix, iy));
            m = std::max({m, std::abs(r.value), std::abs(r.grad.x), std::abs(r.grad.y),
                          std::abs(r.hess.xx), std::abs(r.hess.xy), std::abs(r.hess.yy)});
        }
    }
    return m;
}

}  // namespace tanglab
