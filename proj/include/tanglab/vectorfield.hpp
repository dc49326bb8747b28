#pragma once

#include <vector>

#include "tanglab/field.hpp"
#include "tanglab/scalar_field.hpp"
#include "tanglab/vec2.hpp"

namespace tanglab {

enum class VfVariant { Constant, TorusTrig };

// A smooth vector field with finitely many zeros: either a constant unit
// direction, or a pair of trigonometric polynomials on the torus. TorusTrig
// zeros are located by Newton from a grid scan and each is audited by the
// winding number of V on a small surrounding circle.
struct VectorFieldSpec {
    VfVariant variant = VfVariant::Constant;
    Vec2 zeta{1.0, 0.0};             // Constant: unit vector
    std::vector<WaveTerm> a1, a2;    // TorusTrig component coefficient tables
    double side = 1.0;               // TorusTrig period
    std::vector<Vec2> zeros;         // empty for Constant
    double rho = 0.0;                // excision radius

    static VectorFieldSpec constant(const Vec2& direction, double rho = 0.0);
    static VectorFieldSpec constant_angle_deg(double angle_deg, double rho = 0.0);
    // V = (sin(2 pi x/side), sin(2 pi y/side)); 4 zeros at {0, side/2}^2.
    static VectorFieldSpec torus_sines(double side, double rho = 0.05);
    // Gradient of the Morse function cos(2 pi x/L) + 2 cos(2 pi y/L) (scaled).
    static VectorFieldSpec torus_morse_gradient(double side, double rho = 0.05);
    static VectorFieldSpec torus_trig(std::vector<WaveTerm> a1, std::vector<WaveTerm> a2,
                                      double side, double rho = 0.05);

    Vec2 coeff_value(const Vec2& x) const;                      // (a1, a2)
    void coeff_grads(const Vec2& x, Vec2& da1, Vec2& da2) const;
};

struct VfEval {
    double vf = 0.0;      // Vf = a1 d1f + a2 d2f
    Vec2 grad_vf;         // exact gradient of Vf
    Vec2 v_value;         // V(x)
};

VfEval eval_vf(const VectorFieldSpec& vf, const FieldEvaluator& field, const Vec2& x);

// Vf as a scalar field, for feeding the nodal extractor (method B).
class VfScalarAdapter final : public ScalarField {
  public:
    VfScalarAdapter(const VectorFieldSpec& vf, const FieldEvaluator& field)
        : vf_(vf), field_(field) {}
    double value(const Vec2& x) const override;
    void value_grad(const Vec2& x, double& val, Vec2& grad) const override;

  private:
    const VectorFieldSpec& vf_;
    const FieldEvaluator& field_;
};

}  // namespace tanglab
