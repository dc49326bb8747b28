#include "tanglab/vectorfield.hpp"

#include <cmath>
#include <stdexcept>

#include "tanglab/fast_trig.hpp"

namespace tanglab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double trig_poly(const std::vector<WaveTerm>& terms, const Vec2& x) {
    double acc = 0.0;
    for (const auto& t : terms) {
        double s, c;
        sincos_turns(t.freq.dot(x), s, c);
        acc += t.cos_amp * c + t.sin_amp * s;
    }
    return acc;
}

Vec2 trig_poly_grad(const std::vector<WaveTerm>& terms, const Vec2& x) {
    double gx = 0.0, gy = 0.0;
    for (const auto& t : terms) {
        double s, c;
        sincos_turns(t.freq.dot(x), s, c);
        double d = t.sin_amp * c - t.cos_amp * s;
        gx += t.freq.x * d;
        gy += t.freq.y * d;
    }
    return {kTwoPi * gx, kTwoPi * gy};
}

// Winding number of V along a circle around z; +-1 at a nondegenerate zero.
int winding_index(const VectorFieldSpec& vf, const Vec2& z, double r) {
    const int n = 64;
    double total = 0.0;
    double prev_angle = 0.0;
    for (int i = 0; i <= n; ++i) {
        double th = kTwoPi * i / n;
        Vec2 p = z + Vec2{r * std::cos(th), r * std::sin(th)};
        Vec2 v = vf.coeff_value(p);
        double a = std::atan2(v.y, v.x);
        if (i > 0) {
            double d = a - prev_angle;
            while (d > 3.14159265358979323846) d -= kTwoPi;
            while (d < -3.14159265358979323846) d += kTwoPi;
            total += d;
        }
        prev_angle = a;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

std::vector<Vec2> locate_zeros(const VectorFieldSpec& vf) {
    // grid scan + 2-D Newton; duplicates collapse modulo the period
    const double L = vf.side;
    const int n = 64;
    const double h = L / n;
    std::vector<Vec2> zeros;
    auto try_newton = [&](Vec2 p) {
        for (int it = 0; it < 60; ++it) {
            Vec2 v = vf.coeff_value(p);
            if (std::abs(v.x) < 1e-12 && std::abs(v.y) < 1e-12) break;
            Vec2 d1, d2;
            vf.coeff_grads(p, d1, d2);
            double det = d1.x * d2.y - d1.y * d2.x;
            if (std::abs(det) < 1e-14) return;
            p -= Vec2{(v.x * d2.y - v.y * d1.y) / det, (v.y * d1.x - v.x * d2.x) / det};
        }
        Vec2 v = vf.coeff_value(p);
        if (std::abs(v.x) > 1e-10 || std::abs(v.y) > 1e-10) return;
        p.x -= std::floor(p.x / L) * L;
        p.y -= std::floor(p.y / L) * L;
        for (const auto& z : zeros) {
            double dx = std::abs(z.x - p.x), dy = std::abs(z.y - p.y);
            dx = std::min(dx, L - dx);
            dy = std::min(dy, L - dy);
            if (dx * dx + dy * dy < 1e-12) return;
        }
        zeros.push_back(p);
    };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) try_newton({(i + 0.5) * h, (j + 0.5) * h});

    for (const auto& z : zeros) {
        int idx = winding_index(vf, z, L / 128.0);
        if (idx == 0)
            throw std::invalid_argument("vector field: degenerate zero fails the winding audit");
    }
    return zeros;
}

}  // namespace

VectorFieldSpec VectorFieldSpec::constant(const Vec2& direction, double rho) {
    double n = direction.norm();
    if (!(n > 0.0)) throw std::invalid_argument("vector field: zero direction");
    VectorFieldSpec v;
    v.variant = VfVariant::Constant;
    v.zeta = direction * (1.0 / n);
    v.rho = rho;
    return v;
}

VectorFieldSpec VectorFieldSpec::constant_angle_deg(double angle_deg, double rho) {
    double a = angle_deg * 3.14159265358979323846 / 180.0;
    return constant({std::cos(a), std::sin(a)}, rho);
}

VectorFieldSpec VectorFieldSpec::torus_trig(std::vector<WaveTerm> a1, std::vector<WaveTerm> a2,
                                            double side, double rho) {
    if (!(side > 0.0)) throw std::invalid_argument("vector field: bad period");
    VectorFieldSpec v;
    v.variant = VfVariant::TorusTrig;
    v.a1 = std::move(a1);
    v.a2 = std::move(a2);
    v.side = side;
    v.rho = rho;
    v.zeros = locate_zeros(v);
    return v;
}

VectorFieldSpec VectorFieldSpec::torus_sines(double side, double rho) {
    double k = 1.0 / side;
    return torus_trig({{{k, 0.0}, 0.0, 1.0}}, {{{0.0, k}, 0.0, 1.0}}, side, rho);
}

VectorFieldSpec VectorFieldSpec::torus_morse_gradient(double side, double rho) {
    double k = 1.0 / side;
    // grad of (cos(2 pi x/L) + 2 cos(2 pi y/L)) scaled by -L/(2 pi)
    return torus_trig({{{k, 0.0}, 0.0, 1.0}}, {{{0.0, k}, 0.0, 2.0}}, side, rho);
}

Vec2 VectorFieldSpec::coeff_value(const Vec2& x) const {
    if (variant == VfVariant::Constant) return zeta;
    return {trig_poly(a1, x), trig_poly(a2, x)};
}

void VectorFieldSpec::coeff_grads(const Vec2& x, Vec2& da1, Vec2& da2) const {
    if (variant == VfVariant::Constant) {
        da1 = {0.0, 0.0};
        da2 = {0.0, 0.0};
        return;
    }
    da1 = trig_poly_grad(a1, x);
    da2 = trig_poly_grad(a2, x);
}

VfEval eval_vf(const VectorFieldSpec& vf, const FieldEvaluator& field, const Vec2& x) {
    VfEval out;
    if (vf.variant == VfVariant::Constant) {
        EvalResult r = field.full(x);
        out.v_value = vf.zeta;
        out.vf = vf.zeta.dot(r.grad);
        out.grad_vf = r.hess.apply(vf.zeta);
        return out;
    }
    EvalResult r = field.full(x);
    Vec2 a = vf.coeff_value(x);
    Vec2 da1, da2;
    vf.coeff_grads(x, da1, da2);
    out.v_value = a;
    out.vf = a.x * r.grad.x + a.y * r.grad.y;
    out.grad_vf = da1 * r.grad.x + da2 * r.grad.y +
                  Vec2{a.x * r.hess.xx + a.y * r.hess.xy, a.x * r.hess.xy + a.y * r.hess.yy};
    return out;
}

double VfScalarAdapter::value(const Vec2& x) const {
    if (vf_.variant == VfVariant::Constant) return field_.dir_deriv(x, vf_.zeta);
    Vec2 a = vf_.coeff_value(x);
    double val;
    Vec2 g;
    field_.value_grad(x, val, g);
    return a.dot(g);
}

void VfScalarAdapter::value_grad(const Vec2& x, double& val, Vec2& grad) const {
    if (vf_.variant == VfVariant::Constant) {
        field_.dir_deriv_grad(x, vf_.zeta, val, grad);
        return;
    }
    VfEval e = eval_vf(vf_, field_, x);
    val = e.vf;
    grad = e.grad_vf;
}

}  // namespace tanglab
