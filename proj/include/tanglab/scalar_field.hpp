#pragma once

#include "tanglab/field.hpp"
#include "tanglab/vec2.hpp"

namespace tanglab {

// Exactly evaluable scalar function of the plane. The nodal extractor refines
// against this interface so it can run on f itself or on derived fields like
// Vf without caring where the values come from.
class ScalarField {
  public:
    virtual ~ScalarField() = default;
    virtual double value(const Vec2& x) const = 0;
    virtual void value_grad(const Vec2& x, double& val, Vec2& grad) const = 0;
};

class FieldValueAdapter final : public ScalarField {
  public:
    explicit FieldValueAdapter(const FieldEvaluator& ev) : ev_(ev) {}
    double value(const Vec2& x) const override { return ev_.value(x); }
    void value_grad(const Vec2& x, double& val, Vec2& grad) const override {
        ev_.value_grad(x, val, grad);
    }

  private:
    const FieldEvaluator& ev_;
};

// <dir, grad f> as a scalar field (constant vector field applied to f).
class DirDerivAdapter final : public ScalarField {
  public:
    DirDerivAdapter(const FieldEvaluator& ev, const Vec2& dir) : ev_(ev), dir_(dir) {}
    double value(const Vec2& x) const override { return ev_.dir_deriv(x, dir_); }
    void value_grad(const Vec2& x, double& val, Vec2& grad) const override {
        ev_.dir_deriv_grad(x, dir_, val, grad);
    }

  private:
    const FieldEvaluator& ev_;
    Vec2 dir_;
};

}  // namespace tanglab
