#pragma once

#include <utility>
#include <vector>

#include "tanglab/grid.hpp"
#include "tanglab/scalar_field.hpp"
#include "tanglab/vec2.hpp"

namespace tanglab {

enum class Containment { Contained, BoundaryIntersecting };
enum class SizeClass { Normal, XiSmall, DLong };

// Evaluation domain for extraction. Plane: the disc B(radius); the grid covers
// the square of half-width extent >= radius (a larger extent keeps components
// beyond the disc visible, which the sandwich checks need). Torus: the square
// fundamental domain of the given side.
struct DomainSpec {
    DomainKind kind = DomainKind::Plane;
    double radius = 50.0;
    double extent = 0.0;  // 0 -> radius
    double side = 1.0;

    double grid_halfwidth() const { return extent > 0.0 ? extent : radius; }
    double area() const;
};

// One connected component of the zero set, as a refined polyline. Vertices of
// torus components are lifted (unwrapped) coordinates; closed components
// repeat the first vertex at the end.
struct NodalComponent {
    std::vector<Vec2> vertices;
    bool closed = false;
    Containment containment = Containment::Contained;
    double enclosed_area = 0.0;
    double diameter = 0.0;
    SizeClass size_class = SizeClass::Normal;
    bool excised = false;
    bool unresolved = false;
    std::pair<int, int> winding{0, 0};  // torus lift; (0,0) = contractible
    Vec2 bbox_min, bbox_max;

    bool contractible() const { return winding.first == 0 && winding.second == 0; }
};

struct ExtractionResult {
    std::vector<NodalComponent> components;
    double field_scale = 0.0;  // max |f| over the grid
    int nudged_vertices = 0;
    long total_vertices = 0;
};

// Marching squares on the sign grid with cell-saddle disambiguation by exact
// evaluation at the cell center, edge crossings refined on the exact field to
// |f| <= tol_f * field_scale, segments stitched into components and segments
// longer than the grid step subdivided by projection back onto the zero set.
// Components come out in canonical order (lexicographic smallest vertex).
ExtractionResult extract_nodal_set(const ScalarField& field, const DomainSpec& dom, double grid_h,
                                   double tol_f);

// Same, reusing a pre-synthesized value grid (must match the domain geometry).
ExtractionResult extract_from_grid(const ScalarField& field, const ScalarGrid& grid,
                                   const DomainSpec& dom, double tol_f);

// Extraction geometry for the base field over a domain.
GridGeom extraction_grid(const DomainSpec& dom, double grid_h);

// Extraction geometry for derived fields like Vf: the base grid shifted by an
// irrational fraction of a cell (padded by one ring on the plane). Derived
// fields of symmetric fixtures can vanish exactly along aligned grid lines,
// which the degeneracy guard of the extractor would reject.
GridGeom derived_field_grid(const GridGeom& base, DomainKind kind);

// Pointwise sampling of a scalar field onto a grid (tests and small domains;
// the pipeline synthesizes trigonometric sums directly).
ScalarGrid sample_grid(const ScalarField& field, const GridGeom& geom);

// Shoelace area of a closed component (lifted path on the torus). Throws on
// open or non-contractible components.
double enclosed_area(const NodalComponent& comp);

// XiSmall iff closed and enclosed area < xi (takes precedence); DLong iff
// diameter > d_long; Normal otherwise.
void classify_components(std::vector<NodalComponent>& comps, double d_long, double xi);

// True if the closed polyline has no self-intersections (grid-hashed segment
// test, used by the Jordan-consistency property checks).
bool polyline_is_simple(const NodalComponent& comp, double cell_hint);

}  // namespace tanglab
