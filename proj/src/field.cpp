#include "tanglab/field.hpp"

#include <cmath>
#include <stdexcept>

#include "tanglab/fast_trig.hpp"

namespace tanglab {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

// Lexicographically positive representative of an antipodal pair.
bool is_pair_representative(const Vec2& v) {
    if (v.x > 1e-14) return true;
    if (v.x < -1e-14) return false;
    return v.y > 0.0;
}
}  // namespace

void FieldRealization::validate() const {
    if (terms.empty()) throw std::invalid_argument("field: empty term list");
    if (!(norm > 0.0)) throw std::invalid_argument("field: norm must be positive");
    if (domain == DomainKind::Torus) {
        for (const auto& t : terms) {
            double px = t.freq.x * torus_side, py = t.freq.y * torus_side;
            if (std::abs(px - std::nearbyint(px)) > 1e-9 ||
                std::abs(py - std::nearbyint(py)) > 1e-9)
                throw std::invalid_argument("field: torus frequencies must have integer periods");
        }
    }
    if (!deterministic) {
        double total = 0.0;
        for (double s : term_scales) total += norm * norm * s * s;
        if (std::abs(total - 1.0) > 1e-12)
            throw std::logic_error("field: variance normalization broken");
    }
}

FieldRealization sample_field(const SpectralModel& model, int n_waves, SplitMix64& rng) {
    FieldRealization f;
    f.model_tag = model.tag();
    if (model.is_radial()) {
        if (n_waves < 16)
            throw std::invalid_argument("sample_field: continuous models need n_waves >= 16");
        f.domain = DomainKind::Plane;
        f.norm = 1.0 / std::sqrt(static_cast<double>(n_waves));
        f.terms.reserve(n_waves);
        double alpha = model.alpha();
        bool annulus = model.variant() == SpectralVariant::Annulus;
        for (int j = 0; j < n_waves; ++j) {
            double theta = kTwoPi * rng.next_double();
            double r = 1.0;
            if (annulus) {
                // radius density proportional to r on [alpha, 1]
                double u = rng.next_double();
                r = std::sqrt(alpha * alpha + u * (1.0 - alpha * alpha));
            }
            WaveTerm t;
            t.freq = {r * std::cos(theta), r * std::sin(theta)};
            t.cos_amp = rng.next_normal();
            t.sin_amp = rng.next_normal();
            f.terms.push_back(t);
            f.term_scales.push_back(1.0);
        }
    } else {
        // Exact law: one cos/sin pair per antipodal atom pair, amplitude
        // variance twice the atom weight.
        if (model.variant() == SpectralVariant::AtomicLattice) {
            f.domain = DomainKind::Torus;
            f.torus_side = std::sqrt(static_cast<double>(model.lattice_n()));
        } else {
            f.domain = DomainKind::Plane;
        }
        const auto& atoms = model.atoms();
        const auto& w = model.weights();
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            if (!is_pair_representative(atoms[i])) continue;
            WaveTerm t;
            t.freq = atoms[i];
            double scale = std::sqrt(2.0 * w[i]);
            t.cos_amp = rng.next_normal();
            t.sin_amp = rng.next_normal();
            f.terms.push_back(t);
            f.term_scales.push_back(scale);
        }
        if (f.terms.empty()) throw std::invalid_argument("sample_field: empty atom set");
        f.norm = 1.0;
    }
    f.validate();
    return f;
}

FieldRealization inject_deterministic(const std::vector<WaveTerm>& terms, DomainKind domain,
                                      double torus_side) {
    if (terms.empty()) throw std::invalid_argument("inject_deterministic: empty term list");
    FieldRealization f;
    f.terms = terms;
    f.term_scales.assign(terms.size(), 1.0);
    f.norm = 1.0;
    f.domain = domain;
    f.torus_side = torus_side;
    f.model_tag = "deterministic";
    f.deterministic = true;
    f.validate();
    return f;
}

FieldRealization shift(const FieldRealization& f, const Vec2& u) {
    FieldRealization g = f;
    for (auto& t : g.terms) {
        // cos(th - phi), sin(th - phi) with phi = 2 pi <k,u> absorbed into amplitudes
        double phi = kTwoPi * t.freq.dot(u);
        double c = std::cos(phi), s = std::sin(phi);
        double ca = t.cos_amp, sa = t.sin_amp;
        t.cos_amp = ca * c - sa * s;
        t.sin_amp = ca * s + sa * c;
    }
    return g;
}

FieldRealization add_fields(const FieldRealization& a, const FieldRealization& b) {
    if (a.domain != b.domain)
        throw std::invalid_argument("add_fields: mismatched domains");
    FieldRealization g;
    g.domain = a.domain;
    g.torus_side = a.torus_side;
    g.model_tag = a.model_tag + "+" + b.model_tag;
    g.seed = a.seed;
    g.deterministic = true;  // sum is not unit-variance
    g.norm = 1.0;
    auto absorb = [&g](const FieldRealization& src) {
        for (std::size_t i = 0; i < src.terms.size(); ++i) {
            WaveTerm t = src.terms[i];
            double s = src.norm * (src.deterministic ? 1.0 : src.term_scales[i]);
            t.cos_amp *= s;
            t.sin_amp *= s;
            g.terms.push_back(t);
            g.term_scales.push_back(1.0);
        }
    };
    absorb(a);
    absorb(b);
    return g;
}

FieldRealization scale_field(const FieldRealization& f, double s) {
    FieldRealization g = f;
    g.deterministic = true;
    for (auto& t : g.terms) {
        t.cos_amp *= s;
        t.sin_amp *= s;
    }
    return g;
}

FieldEvaluator::FieldEvaluator(const FieldRealization& f) {
    std::size_t n = f.terms.size();
    kx_.resize(n);
    ky_.resize(n);
    ac_.resize(n);
    as_.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        double scale = f.norm * (f.term_scales.empty() ? 1.0 : f.term_scales[j]);
        kx_[j] = f.terms[j].freq.x;
        ky_[j] = f.terms[j].freq.y;
        ac_[j] = scale * f.terms[j].cos_amp;
        as_[j] = scale * f.terms[j].sin_amp;
    }
}

double FieldEvaluator::value(const Vec2& x) const {
    double acc = 0.0;
    std::size_t n = kx_.size();
    const double *kx = kx_.data(), *ky = ky_.data(), *ac = ac_.data(), *as = as_.data();
    for (std::size_t j = 0; j < n; ++j) {
        double s, c;
        sincos_turns(kx[j] * x.x + ky[j] * x.y, s, c);
        acc += ac[j] * c + as[j] * s;
    }
    return acc;
}

void FieldEvaluator::value_grad(const Vec2& x, double& val, Vec2& grad) const {
    double acc = 0.0, gx = 0.0, gy = 0.0;
    std::size_t n = kx_.size();
    const double *kx = kx_.data(), *ky = ky_.data(), *ac = ac_.data(), *as = as_.data();
    for (std::size_t j = 0; j < n; ++j) {
        double s, c;
        sincos_turns(kx[j] * x.x + ky[j] * x.y, s, c);
        double e = ac[j] * c + as[j] * s;
        double d = as[j] * c - ac[j] * s;
        acc += e;
        gx += kx[j] * d;
        gy += ky[j] * d;
    }
    val = acc;
    grad = {kTwoPi * gx, kTwoPi * gy};
}

EvalResult FieldEvaluator::full(const Vec2& x) const {
    double acc = 0.0, gx = 0.0, gy = 0.0, hxx = 0.0, hxy = 0.0, hyy = 0.0;
    std::size_t n = kx_.size();
    const double *kx = kx_.data(), *ky = ky_.data(), *ac = ac_.data(), *as = as_.data();
    for (std::size_t j = 0; j < n; ++j) {
        double s, c;
        sincos_turns(kx[j] * x.x + ky[j] * x.y, s, c);
        double e = ac[j] * c + as[j] * s;
        double d = as[j] * c - ac[j] * s;
        acc += e;
        gx += kx[j] * d;
        gy += ky[j] * d;
        hxx += kx[j] * kx[j] * e;
        hxy += kx[j] * ky[j] * e;
        hyy += ky[j] * ky[j] * e;
    }
    EvalResult r;
    r.value = acc;
    r.grad = {kTwoPi * gx, kTwoPi * gy};
    double k2 = kTwoPi * kTwoPi;
    r.hess = {-k2 * hxx, -k2 * hxy, -k2 * hyy};
    return r;
}

double FieldEvaluator::dir_deriv(const Vec2& x, const Vec2& dvec) const {
    double acc = 0.0;
    std::size_t n = kx_.size();
    const double *kx = kx_.data(), *ky = ky_.data(), *ac = ac_.data(), *as = as_.data();
    for (std::size_t j = 0; j < n; ++j) {
        double s, c;
        sincos_turns(kx[j] * x.x + ky[j] * x.y, s, c);
        acc += (kx[j] * dvec.x + ky[j] * dvec.y) * (as[j] * c - ac[j] * s);
    }
    return kTwoPi * acc;
}

void FieldEvaluator::dir_deriv_grad(const Vec2& x, const Vec2& dvec, double& val,
                                    Vec2& grad) const {
    double acc = 0.0, gx = 0.0, gy = 0.0;
    std::size_t n = kx_.size();
    const double *kx = kx_.data(), *ky = ky_.data(), *ac = ac_.data(), *as = as_.data();
    for (std::size_t j = 0; j < n; ++j) {
        double s, c;
        sincos_turns(kx[j] * x.x + ky[j] * x.y, s, c);
        double kd = kx[j] * dvec.x + ky[j] * dvec.y;
        double e = ac[j] * c + as[j] * s;
        acc += kd * (as[j] * c - ac[j] * s);
        gx += kd * kx[j] * e;
        gy += kd * ky[j] * e;
    }
    val = kTwoPi * acc;
    double k2 = kTwoPi * kTwoPi;
    grad = {-k2 * gx, -k2 * gy};
}

}  // namespace tanglab
