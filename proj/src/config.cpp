#include "tanglab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tanglab {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw std::invalid_argument("config: bad boolean '" + v + "'");
}

std::string fmt_list(const std::vector<double>& v) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) ss << ",";
        ss << v[i];
    }
    return ss.str();
}

}  // namespace

void RunConfig::apply_override(const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "model.variant") model_variant = v;
    else if (key == "model.alpha") model_alpha = std::stod(v);
    else if (key == "model.n") model_n = std::stoi(v);
    else if (key == "model.angles_deg") model_angles_deg = parse_list(v);
    else if (key == "model.weights") model_weights = parse_list(v);
    else if (key == "domain.kind") domain_kind = v;
    else if (key == "domain.radius") domain_radius = std::stod(v);
    else if (key == "domain.extent") domain_extent = std::stod(v);
    else if (key == "domain.side") domain_side = std::stod(v);
    else if (key == "grid.h") grid_h = std::stod(v);
    else if (key == "grid.tol_f") grid_tol_f = std::stod(v);
    else if (key == "field.n_waves") field_n_waves = std::stoi(v);
    else if (key == "run.trials") run_trials = std::stol(v);
    else if (key == "run.seed") run_seed = std::stoull(v);
    else if (key == "run.workers") run_workers = std::stoi(v);
    else if (key == "vf.variant") vf_variant = v;
    else if (key == "vf.angle_deg") vf_angle_deg = std::stod(v);
    else if (key == "vf.preset") vf_preset = v;
    else if (key == "vf.rho") vf_rho = std::stod(v);
    else if (key == "tangency.beta") beta = std::stod(v);
    else if (key == "stability.b") stability_b = std::stod(v);
    else if (key == "classify.d_long") classify_d_long = std::stod(v);
    else if (key == "classify.xi_small") classify_xi_small = std::stod(v);
    else if (key == "flags.include_sub_beta") include_sub_beta = parse_bool(v);
    else if (key == "flags.emit_vertices") emit_vertices = parse_bool(v);
    else if (key == "output.dir") output_dir = v;
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_text(const std::string& text) {
    RunConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        " is not 'key = value'");
        cfg.apply_override(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    cfg.validate();
    return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

void RunConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("config: " + msg); };
    if (model_variant != "circle" && model_variant != "annulus" && model_variant != "lattice" &&
        model_variant != "atomic")
        fail("model.variant must be circle|annulus|lattice|atomic");
    if (model_variant == "annulus" && !(model_alpha >= 0.0 && model_alpha < 1.0))
        fail("model.alpha must lie in [0,1)");
    if (model_variant == "lattice" && model_n < 1) fail("model.n must be positive");
    if (!domain_kind.empty() && domain_kind != "plane" && domain_kind != "torus")
        fail("domain.kind must be plane|torus");
    if (!(domain_radius > 0.0)) fail("domain.radius must be positive");
    if (domain_extent < 0.0) fail("domain.extent must be >= 0");
    if (!(grid_h > 0.0 && grid_h <= 0.1)) fail("grid.h must lie in (0, 0.1]");
    if (!(grid_tol_f > 0.0 && grid_tol_f <= 1e-6)) fail("grid.tol_f must lie in (0, 1e-6]");
    if (field_n_waves < 16) fail("field.n_waves must be >= 16");
    if (run_trials < 1) fail("run.trials must be >= 1");
    if (run_workers < 1 || run_workers > 256) fail("run.workers must lie in [1, 256]");
    if (vf_variant != "constant" && vf_variant != "torus_trig")
        fail("vf.variant must be constant|torus_trig");
    if (vf_variant == "torus_trig" && vf_preset != "sines" && vf_preset != "morse")
        fail("vf.preset must be sines|morse");
    if (vf_rho < 0.0) fail("vf.rho must be >= 0");
    if (!(beta > 0.0 && beta < 1.0)) fail("tangency.beta must lie in (0,1)");
    if (stability_b < 0.0 || stability_b > beta / 4.0 + 1e-15)
        fail("stability.b must lie in [0, beta/4]");
    if (!(classify_d_long > 0.0)) fail("classify.d_long must be positive");
    if (!(classify_xi_small > 0.0)) fail("classify.xi_small must be positive");
    if (output_dir.empty()) fail("output.dir must be nonempty");
}

std::string RunConfig::canonical_text() const {
    std::ostringstream ss;
    ss.precision(17);
    ss << "classify.d_long=" << classify_d_long << "\n"
       << "classify.xi_small=" << classify_xi_small << "\n"
       << "domain.extent=" << domain_extent << "\n"
       << "domain.kind=" << domain_kind << "\n"
       << "domain.radius=" << domain_radius << "\n"
       << "domain.side=" << domain_side << "\n"
       << "field.n_waves=" << field_n_waves << "\n"
       << "flags.emit_vertices=" << emit_vertices << "\n"
       << "flags.include_sub_beta=" << include_sub_beta << "\n"
       << "grid.h=" << grid_h << "\n"
       << "grid.tol_f=" << grid_tol_f << "\n"
       << "model.alpha=" << model_alpha << "\n"
       << "model.angles_deg=" << fmt_list(model_angles_deg) << "\n"
       << "model.n=" << model_n << "\n"
       << "model.variant=" << model_variant << "\n"
       << "model.weights=" << fmt_list(model_weights) << "\n"
       << "run.seed=" << run_seed << "\n"
       << "run.trials=" << run_trials << "\n"
       << "stability.b=" << stability_b << "\n"
       << "tangency.beta=" << beta << "\n"
       << "vf.angle_deg=" << vf_angle_deg << "\n"
       << "vf.preset=" << vf_preset << "\n"
       << "vf.rho=" << vf_rho << "\n"
       << "vf.variant=" << vf_variant << "\n";
    return ss.str();
}

std::string RunConfig::canonical_hash() const {
    // FNV-1a 64
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

SpectralModel RunConfig::build_model() const {
    if (model_variant == "circle") return SpectralModel::circle();
    if (model_variant == "annulus") return SpectralModel::annulus(model_alpha);
    if (model_variant == "lattice") return SpectralModel::atomic_lattice(model_n);
    std::vector<double> rad;
    for (double a : model_angles_deg) rad.push_back(a * 3.14159265358979323846 / 180.0);
    return SpectralModel::atomic_general(rad, model_weights);
}

DomainSpec RunConfig::build_domain() const {
    DomainSpec dom;
    std::string kind = domain_kind;
    if (kind.empty()) kind = model_variant == "lattice" ? "torus" : "plane";
    dom.kind = kind == "torus" ? DomainKind::Torus : DomainKind::Plane;
    dom.radius = domain_radius;
    dom.extent = domain_extent;
    double side = domain_side;
    if (side <= 0.0)
        side = model_variant == "lattice" ? std::sqrt(static_cast<double>(model_n)) : 1.0;
    dom.side = side;
    return dom;
}

VectorFieldSpec RunConfig::build_vf() const {
    if (vf_variant == "constant") return VectorFieldSpec::constant_angle_deg(vf_angle_deg, vf_rho);
    double side = build_domain().side;
    return vf_preset == "morse" ? VectorFieldSpec::torus_morse_gradient(side, vf_rho)
                                : VectorFieldSpec::torus_sines(side, vf_rho);
}

AnalysisOptions RunConfig::build_options() const {
    AnalysisOptions opt;
    opt.grid_h = grid_h;
    opt.tol_f = grid_tol_f;
    opt.beta = beta;
    opt.rho = vf_rho;
    opt.d_long = classify_d_long;
    opt.xi_small = classify_xi_small;
    opt.include_sub_beta = include_sub_beta;
    return opt;
}

}  // namespace tanglab
