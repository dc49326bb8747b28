#pragma once

#include <vector>

#include "tanglab/nodal.hpp"
#include "tanglab/vectorfield.hpp"

namespace tanglab {

// One joint zero of (f, Vf) on a component. The margin is the normalized
// transversality determinant |det[grad f, grad Vf]| / (|grad f| |grad Vf|),
// dimensionless in [0,1].
struct TangencyRecord {
    Vec2 location;
    double margin = 0.0;
    bool sub_beta = false;
    bool method_agreement = false;
};

struct ComponentTangencies {
    int k = 0;
    std::vector<TangencyRecord> records;
    bool unresolved = false;   // root refinement failed; excluded from the measure
    bool degenerate = false;   // vanishing gradient at a root
    double min_margin = 1.0;
    double min_grad_norm = 1e300;  // min over vertices of |grad f| (the beta_1 condition;
                                   // |f| <= tol there, so max{|f|,|grad f|} = |grad f|)
};

// Method A: scan Vf over the component's vertices; refine each sign change by
// predictor-corrector tracing along the curve (tangent steps + Newton
// projection back to f = 0) until |Vf| <= tol_vf_abs.
ComponentTangencies count_tangencies_on_curve(const NodalComponent& comp,
                                              const VectorFieldSpec& vf,
                                              const FieldEvaluator& field, double beta,
                                              double tol_f_abs, double tol_vf_abs);

struct IntersectionCounts {
    std::vector<ComponentTangencies> per_component;
    long total_roots = 0;
    long roots_in_ball = 0;           // |x| <= radius on the plane; all on the torus
    long contained_roots = 0;         // on Contained, non-excised components
    long contained_excised_roots = 0;
    long boundary_roots_in_ball = 0;  // on BoundaryIntersecting components, inside the ball
};

// Method B: all intersection points between the f components and the
// extracted {Vf = 0} polylines. Chord crossings and near-misses seed a local
// 2-D Newton on the exact pair (f, Vf); roots are deduplicated and assigned to
// their f component. Closed contractible components whose count comes out odd
// or below two are re-scanned at eightfold-refined polyline resolution.
IntersectionCounts count_via_intersections(const std::vector<NodalComponent>& f_comps,
                                           const std::vector<NodalComponent>& vf_comps,
                                           const VectorFieldSpec& vf,
                                           const FieldEvaluator& field, const DomainSpec& dom,
                                           double grid_h, double beta, double tol_f_abs,
                                           double tol_vf_abs);

// Flags components whose polyline enters any ball B(z, rho) around a zero of
// V. Returns the number of flagged components.
int excise_zeros(const VectorFieldSpec& vf, std::vector<NodalComponent>& comps, double rho);

// Marks record.method_agreement on matching roots; returns per-component
// equality of counts.
void mark_method_agreement(ComponentTangencies& a, ComponentTangencies& b);

}  // namespace tanglab
