#pragma once

#include <cstddef>
#include <vector>

#include "tanglab/field.hpp"
#include "tanglab/vec2.hpp"

namespace tanglab {

// Regular evaluation grid, x_i = x0 + i*h, y_j = y0 + j*h, values row-major
// with the x index outermost.
struct GridGeom {
    double x0 = 0.0, y0 = 0.0;
    double h = 0.05;
    int nx = 0, ny = 0;
    bool torus_wrap = false;  // grid tiles a fundamental domain of side nx*h == ny*h

    Vec2 pos(int ix, int iy) const { return {x0 + ix * h, y0 + iy * h}; }
    std::size_t idx(int ix, int iy) const {
        return static_cast<std::size_t>(ix) * ny + iy;
    }
};

struct ScalarGrid {
    GridGeom geom;
    std::vector<double> v;
    double at(int ix, int iy) const { return v[geom.idx(ix, iy)]; }
    double& at(int ix, int iy) { return v[geom.idx(ix, iy)]; }
    double abs_max() const;
};

// Plane domain B(R): square grid over [-R, R]^2.
GridGeom plane_grid(double radius, double h);
// Torus of side L: n = round(L/h) cells, effective step L/n, wraparound.
GridGeom torus_grid(double side, double h);

struct SynthRequest {
    bool value = true;
    bool direct = false;   // directional derivative <dir, grad f> (constant vector fields)
    Vec2 dir{0.0, 0.0};
    bool grads = false;    // df/dx, df/dy grids
};

struct GridBundle {
    ScalarGrid f;
    ScalarGrid vf;
    ScalarGrid gx, gy;
};

// Evaluates the trigonometric sum on the whole grid in one sweep. Phases
// advance along rows/columns by fixed rotations (angle addition), which makes
// the cost a handful of FMAs per cell per wave; rotations are re-anchored with
// exact sincos every 64 rows to keep drift below 1e-13.
GridBundle synthesize_grids(const FieldEvaluator& ev, const GridGeom& geom,
                            const SynthRequest& req);

// Max over the grid of |psi|, |grad psi| (per component), |Hessian entries| --
// the sampled C^2 norm used to size perturbations.
double grid_c2_norm(const FieldEvaluator& ev, const GridGeom& geom);

}  // namespace tanglab
