#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tanglab/rng.hpp"
#include "tanglab/spectral.hpp"
#include "tanglab/vec2.hpp"

namespace tanglab {

enum class DomainKind { Plane, Torus };

struct WaveTerm {
    Vec2 freq;
    double cos_amp = 0.0;
    double sin_amp = 0.0;
};

struct SeedRecord {
    std::uint64_t master = 0;
    std::uint64_t trial = 0;
};

// A finite trigonometric sum with Gaussian coefficients:
//   f(x) = norm * sum_j scale_j * (cos_amp_j cos(2 pi <k_j,x>) + sin_amp_j sin(2 pi <k_j,x>))
// Evaluation of f, grad f, Hess f is exact. term_scales records the per-term
// standard deviation used at construction, so unit conditional variance is a
// checkable identity on the coefficients: sum (norm*scale_j)^2 = 1.
struct FieldRealization {
    std::vector<WaveTerm> terms;
    std::vector<double> term_scales;
    double norm = 1.0;
    DomainKind domain = DomainKind::Plane;
    double torus_side = 1.0;
    std::string model_tag;
    SeedRecord seed;
    bool deterministic = false;

    void validate() const;  // torus periodicity, scale bookkeeping
};

// Draws one realization. Circle/Annulus: n_waves i.i.d. frequencies from the
// spectral measure with independent N(0,1) cos/sin amplitudes, norm 1/sqrt(n).
// Atomic variants: the exact Gaussian law, one term per antipodal atom pair
// (n_waves ignored). AtomicLattice lives on the torus of side sqrt(n).
FieldRealization sample_field(const SpectralModel& model, int n_waves, SplitMix64& rng);

// Test fixtures and barrier-style deterministic functions.
FieldRealization inject_deterministic(const std::vector<WaveTerm>& terms,
                                      DomainKind domain = DomainKind::Plane,
                                      double torus_side = 1.0);

// tau_u f: eval(shift(F,u), x) == eval(F, x - u) exactly (phase absorption).
FieldRealization shift(const FieldRealization& f, const Vec2& u);

// Pointwise sum of two realizations (term concatenation), used to perturb a
// sample by an independent small field.
FieldRealization add_fields(const FieldRealization& a, const FieldRealization& b);

// Rescale amplitudes: evaluates to s * f.
FieldRealization scale_field(const FieldRealization& f, double s);

struct EvalResult {
    double value = 0.0;
    Vec2 grad;
    Sym2 hess;
};

// SoA evaluator; construction folds norm and term scales into the amplitude
// arrays. All methods are pure and safe to call concurrently.
class FieldEvaluator {
  public:
    explicit FieldEvaluator(const FieldRealization& f);

    double value(const Vec2& x) const;
    void value_grad(const Vec2& x, double& val, Vec2& grad) const;
    EvalResult full(const Vec2& x) const;

    // Directional derivative d . grad f, with its own gradient (Hess . d).
    double dir_deriv(const Vec2& x, const Vec2& d) const;
    void dir_deriv_grad(const Vec2& x, const Vec2& d, double& val, Vec2& grad) const;

    std::size_t n_terms() const { return kx_.size(); }
    const std::vector<double>& kx() const { return kx_; }
    const std::vector<double>& ky() const { return ky_; }
    const std::vector<double>& amp_cos() const { return ac_; }
    const std::vector<double>& amp_sin() const { return as_; }

  private:
    std::vector<double> kx_, ky_;    // frequencies (cycles per unit)
    std::vector<double> ac_, as_;    // norm * scale * amplitude
};

}  // namespace tanglab
