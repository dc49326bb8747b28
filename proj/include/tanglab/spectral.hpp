#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tanglab/vec2.hpp"

namespace tanglab {

// All lattice points (a,b) with a^2 + b^2 = n, in lexicographic order.
// Empty result means n is not a sum of two squares; n <= 0 is an error.
std::vector<std::pair<int, int>> lattice_points(int n);

enum class SpectralVariant { Circle, Annulus, AtomicLattice, AtomicGeneral };

// A symmetric probability measure on R^2 defining a stationary Gaussian field
// law. Continuous variants: normalized arc length on the unit circle, or
// normalized area measure of the annulus {alpha < |v| < 1}. Atomic variants
// live on the unit circle: the lattice set Lambda_n scaled by 1/sqrt(n), or an
// arbitrary symmetric weighted point set.
class SpectralModel {
  public:
    static SpectralModel circle();
    static SpectralModel annulus(double alpha);  // alpha in [0,1)
    static SpectralModel atomic_lattice(int n);
    // Angles in radians; the set is symmetrized (each atom also placed at the
    // antipode with half its weight) and weights normalized to total mass 1.
    static SpectralModel atomic_general(const std::vector<double>& angles,
                                        const std::vector<double>& weights);

    SpectralVariant variant() const { return variant_; }
    double alpha() const { return alpha_; }
    int lattice_n() const { return lattice_n_; }
    bool is_radial() const {
        return variant_ == SpectralVariant::Circle || variant_ == SpectralVariant::Annulus;
    }
    bool is_atomic() const { return !is_radial(); }

    // Atomic support: unit-circle points with weights (weights sum to 1).
    const std::vector<Vec2>& atoms() const { return atoms_; }
    const std::vector<double>& weights() const { return weights_; }
    // Unnormalized integer lattice points (AtomicLattice only).
    const std::vector<std::pair<int, int>>& lattice() const { return lattice_; }

    // Axiom flags.
    bool has_no_atoms() const { return is_radial(); }                       // (rho1)
    bool spans_plane() const;                                               // (rho3)
    bool has_interior() const { return variant_ == SpectralVariant::Annulus; }  // (rho4*)

    std::string tag() const;

  private:
    SpectralModel() = default;
    SpectralVariant variant_ = SpectralVariant::Circle;
    double alpha_ = 1.0;
    int lattice_n_ = 0;
    std::vector<Vec2> atoms_;
    std::vector<double> weights_;
    std::vector<std::pair<int, int>> lattice_;
};

// Radial covariance B(r) for the isotropic variants, B(0) = 1. Closed forms:
// circle gives J0(2*pi*r), the annulus reduces to a J1 difference.
// Throws for atomic variants ("anisotropic model requires covariance_lag").
double covariance(const SpectralModel& model, double r);

// r(u) = int cos(2*pi*<lambda,u>) drho(lambda); exact finite sum for atomic
// variants, closed form for the radial ones.
double covariance_lag(const SpectralModel& model, const Vec2& u);
long double covariance_lag_ld(const SpectralModel& model, double ux, double uy);

// Moments mu_pq = int l1^p l2^q drho through total degree max_degree.
class SpectralMoments {
  public:
    double mu(int p, int q) const;
    int max_degree() const { return max_degree_; }
    void set(int p, int q, double v) { values_[{p, q}] = v; }
    void set_max_degree(int d) { max_degree_ = d; }
    const std::map<std::pair<int, int>, double>& table() const { return values_; }

  private:
    std::map<std::pair<int, int>, double> values_;
    int max_degree_ = 0;
};

SpectralMoments moments(const SpectralModel& model, int max_degree);

// Directional moment int <lambda,e1>^p <lambda,e2>^q drho for an orthonormal
// frame (e1,e2). Equals mu(p,q) for the rotation-invariant variants.
double moment_dir(const SpectralModel& model, const Vec2& e1, const Vec2& e2, int p, int q);

}  // namespace tanglab
