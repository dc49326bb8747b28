#include "tanglab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tanglab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double double_factorial(int n) {
    double v = 1.0;
    for (int k = n; k > 1; k -= 2) v *= k;
    return v;
}

// (1/2pi) int cos^p sin^q dtheta; zero unless p and q are both even.
double circle_angular_moment(int p, int q) {
    if (p % 2 != 0 || q % 2 != 0) return 0.0;
    return double_factorial(p - 1) * double_factorial(q - 1) / double_factorial(p + q);
}

// E[s^m] for radius density 2s/(1-alpha^2) on [alpha,1]; 1 on the circle.
double radial_moment(const SpectralModel& model, int m) {
    if (model.variant() == SpectralVariant::Circle) return 1.0;
    double a = model.alpha();
    return 2.0 * (1.0 - std::pow(a, m + 2)) / ((m + 2) * (1.0 - a * a));
}

}  // namespace

std::vector<std::pair<int, int>> lattice_points(int n) {
    if (n <= 0) throw std::invalid_argument("lattice_points: n must be positive");
    std::vector<std::pair<int, int>> pts;
    int bound = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    for (int a = -bound; a <= bound; ++a)
        for (int b = -bound; b <= bound; ++b)
            if (a * a + b * b == n) pts.emplace_back(a, b);
    std::sort(pts.begin(), pts.end());
    return pts;
}

SpectralModel SpectralModel::circle() {
    SpectralModel m;
    m.variant_ = SpectralVariant::Circle;
    m.alpha_ = 1.0;
    return m;
}

SpectralModel SpectralModel::annulus(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("annulus: alpha must lie in [0,1)");
    SpectralModel m;
    m.variant_ = SpectralVariant::Annulus;
    m.alpha_ = alpha;
    return m;
}

SpectralModel SpectralModel::atomic_lattice(int n) {
    auto pts = lattice_points(n);
    if (pts.empty()) throw std::invalid_argument("atomic_lattice: n not a sum of two squares");
    SpectralModel m;
    m.variant_ = SpectralVariant::AtomicLattice;
    m.lattice_n_ = n;
    m.lattice_ = pts;
    double rn = std::sqrt(static_cast<double>(n));
    double w = 1.0 / static_cast<double>(pts.size());
    for (auto& [a, b] : pts) {
        m.atoms_.push_back({a / rn, b / rn});
        m.weights_.push_back(w);
    }
    return m;
}

SpectralModel SpectralModel::atomic_general(const std::vector<double>& angles,
                                            const std::vector<double>& weights) {
    if (angles.empty() || angles.size() != weights.size())
        throw std::invalid_argument("atomic_general: need matching nonempty angles/weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("atomic_general: negative weight");
        total += w;
    }
    if (total <= 0.0) throw std::invalid_argument("atomic_general: zero total weight");
    SpectralModel m;
    m.variant_ = SpectralVariant::AtomicGeneral;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double w = weights[i] / total / 2.0;
        m.atoms_.push_back({std::cos(angles[i]), std::sin(angles[i])});
        m.weights_.push_back(w);
        m.atoms_.push_back({-std::cos(angles[i]), -std::sin(angles[i])});
        m.weights_.push_back(w);
    }
    return m;
}

bool SpectralModel::spans_plane() const {
    if (is_radial()) return true;
    // Support spans R^2 iff two atoms are linearly independent.
    for (std::size_t i = 0; i < atoms_.size(); ++i)
        for (std::size_t j = i + 1; j < atoms_.size(); ++j)
            if (std::abs(atoms_[i].cross(atoms_[j])) > 1e-12) return true;
    return false;
}

std::string SpectralModel::tag() const {
    switch (variant_) {
        case SpectralVariant::Circle: return "circle";
        case SpectralVariant::Annulus: return "annulus(" + std::to_string(alpha_) + ")";
        case SpectralVariant::AtomicLattice: return "lattice(" + std::to_string(lattice_n_) + ")";
        case SpectralVariant::AtomicGeneral: return "atomic_general";
    }
    return "?";
}

double covariance(const SpectralModel& model, double r) {
    if (r < 0.0) throw std::invalid_argument("covariance: negative lag");
    if (!model.is_radial())
        throw std::invalid_argument("anisotropic model requires covariance_lag");
    if (r == 0.0) return 1.0;
    double x = kTwoPi * r;
    if (model.variant() == SpectralVariant::Circle) return std::cyl_bessel_j(0.0, x);
    double a = model.alpha();
    // (1/|A|) int_A cos(2 pi <u,v>) dv = (J1(2 pi r) - a J1(2 pi a r)) / (pi r (1-a^2))
    double num = std::cyl_bessel_j(1.0, x) - a * std::cyl_bessel_j(1.0, a * x);
    return num / (3.14159265358979323846 * r * (1.0 - a * a));
}

double covariance_lag(const SpectralModel& model, const Vec2& u) {
    if (model.is_radial()) return covariance(model, u.norm());
    double s = 0.0;
    const auto& atoms = model.atoms();
    const auto& w = model.weights();
    for (std::size_t i = 0; i < atoms.size(); ++i) s += w[i] * std::cos(kTwoPi * atoms[i].dot(u));
    return s;
}

long double covariance_lag_ld(const SpectralModel& model, double ux, double uy) {
    constexpr long double two_pi = 6.283185307179586476925286766559L;
    if (model.is_radial()) {
        long double r = std::sqrt(static_cast<long double>(ux) * ux +
                                  static_cast<long double>(uy) * uy);
        if (r == 0.0L) return 1.0L;
        long double x = two_pi * r;
        if (model.variant() == SpectralVariant::Circle) return std::cyl_bessel_jl(0.0L, x);
        long double a = model.alpha();
        long double num = std::cyl_bessel_jl(1.0L, x) - a * std::cyl_bessel_jl(1.0L, a * x);
        return num / (3.14159265358979323846264338328L * r * (1.0L - a * a));
    }
    long double s = 0.0L;
    const auto& atoms = model.atoms();
    const auto& w = model.weights();
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        long double phase = two_pi * (static_cast<long double>(atoms[i].x) * ux +
                                      static_cast<long double>(atoms[i].y) * uy);
        s += static_cast<long double>(w[i]) * std::cos(phase);
    }
    return s;
}

double SpectralMoments::mu(int p, int q) const {
    if (p < 0 || q < 0) throw std::invalid_argument("moments: negative degree");
    auto it = values_.find({p, q});
    if (it == values_.end()) throw std::out_of_range("moments: degree beyond table");
    return it->second;
}

SpectralMoments moments(const SpectralModel& model, int max_degree) {
    if (max_degree < 4) throw std::invalid_argument("moments: max_degree must be >= 4");
    SpectralMoments m;
    m.set_max_degree(max_degree);
    for (int p = 0; p <= max_degree; ++p)
        for (int q = 0; p + q <= max_degree; ++q)
            m.set(p, q, moment_dir(model, {1, 0}, {0, 1}, p, q));
    return m;
}

double moment_dir(const SpectralModel& model, const Vec2& e1, const Vec2& e2, int p, int q) {
    if (p < 0 || q < 0) throw std::invalid_argument("moment_dir: negative degree");
    if ((p + q) % 2 != 0) return 0.0;  // central symmetry
    if (model.is_atomic()) {
        double s = 0.0;
        const auto& atoms = model.atoms();
        const auto& w = model.weights();
        for (std::size_t i = 0; i < atoms.size(); ++i)
            s += w[i] * std::pow(atoms[i].dot(e1), p) * std::pow(atoms[i].dot(e2), q);
        return s;
    }
    // Rotation invariance: any orthonormal frame gives the axis moments.
    return radial_moment(model, p + q) * circle_angular_moment(p, q);
}

}  // namespace tanglab
