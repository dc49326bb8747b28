#pragma once

#include <cmath>
#include <cstdint>

namespace tanglab {

// sin/cos of 2*pi*t ("turns"). Phases of the trigonometric sums are carried as
// t = <k,x>, so range reduction is an exact t - round(t) instead of an
// argument reduction mod pi. The residual is split into a quadrant index and
// |w| <= 1/8 turns, where Taylor polynomials of sin(2*pi*w), cos(2*pi*w)
// converge to full double precision (truncation < 5e-17). Branch-free, so the
// wave loops of the field evaluator auto-vectorize.
inline void sincos_turns(double t, double& s, double& c) {
    double z = t - std::nearbyint(t);       // [-0.5, 0.5], exact
    double v = 4.0 * z;
    double qf = std::nearbyint(v);
    double w = 0.25 * (v - qf);             // [-1/8, 1/8] turns
    double y = w * w;

    double sp = -7.18122301778500560e-01;
    sp = sp * y + 3.81995258484828204e+00;
    sp = sp * y - 1.50946425768229897e+01;
    sp = sp * y + 4.20586939448976551e+01;
    sp = sp * y - 7.67058597530613895e+01;
    sp = sp * y + 8.16052492760750567e+01;
    sp = sp * y - 4.13417022403997620e+01;
    sp = sp * y + 6.28318530717958623e+00;
    sp *= w;

    double cp = -3.63828411425456688e-02;
    cp = cp * y + 2.82005968455791234e-01;
    cp = cp * y - 1.71439071108867203e+00;
    cp = cp * y + 7.90353637131846920e+00;
    cp = cp * y - 2.64262567833743987e+01;
    cp = cp * y + 6.02446413718766607e+01;
    cp = cp * y - 8.54568172066937279e+01;
    cp = cp * y + 6.49393940226682957e+01;
    cp = cp * y - 1.97392088021787160e+01;
    cp = cp * y + 1.0;

    // cos/sin of the quadrant angle qf*pi/2 for qf in {-2,...,2}, as low-degree
    // polynomials in qf; keeps the whole function branch-free.
    double q2 = qf * qf;
    double cq = 1.0 + q2 * (q2 * (1.0 / 6.0) - 7.0 / 6.0);
    double sq = qf * (4.0 / 3.0 - q2 * (1.0 / 3.0));
    c = cp * cq - sp * sq;
    s = sp * cq + cp * sq;
}

}  // namespace tanglab
