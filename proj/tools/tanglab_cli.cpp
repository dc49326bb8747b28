// Batch driver: seeded parallel trial execution, result persistence, check
// suites and static plots. Exit codes: 0 success, 1 suite failure, 2 usage or
// configuration error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

#include "CLI11.hpp"
#include "tanglab/config.hpp"
#include "tanglab/kacrice.hpp"
#include "tanglab/rng.hpp"
#include "tanglab/serialize.hpp"
#include "tanglab/svg.hpp"

using namespace tanglab;
using nlohmann::json;

namespace {

struct CliState {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    long trials = -1;
    long long seed = -1;
    int workers = -1;

    RunConfig load() const {
        RunConfig cfg = config_path.empty() ? RunConfig{} : RunConfig::from_file(config_path);
        for (const auto& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
            cfg.apply_override(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (!output_dir.empty()) cfg.output_dir = output_dir;
        if (trials > 0) cfg.run_trials = trials;
        if (seed >= 0) cfg.run_seed = static_cast<std::uint64_t>(seed);
        if (workers > 0) cfg.run_workers = workers;
        cfg.validate();
        return cfg;
    }
};

Provenance provenance(const RunConfig& cfg) {
    return {cfg.canonical_hash(), cfg.run_seed, tool_version()};
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.output_dir);
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

void add_common(CLI::App* cmd, CliState& st) {
    cmd->add_option("-c,--config", st.config_path, "configuration file (key = value lines)");
    cmd->add_option("--set", st.overrides, "override a configuration key (key=value)")
        ->take_all();
    cmd->add_option("--out", st.output_dir, "output directory")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--trials", st.trials, "number of trials")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--seed", st.seed, "master seed")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd->add_option("--workers", st.workers, "worker threads")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
}

int cmd_sample(const RunConfig& cfg) {
    auto model = cfg.build_model();
    for (long t = 0; t < cfg.run_trials; ++t) {
        SplitMix64 rng(derive_seed(cfg.run_seed, t));
        FieldRealization f = sample_field(model, cfg.field_n_waves, rng);
        f.seed = {cfg.run_seed, static_cast<std::uint64_t>(t)};
        json j = to_json(f);
        stamp(j, provenance(cfg));
        char name[64];
        std::snprintf(name, sizeof(name), "realization_%04ld.json", t);
        write_json_file(out_path(cfg, name), j);
    }
    std::printf("wrote %ld realizations to %s\n", cfg.run_trials, cfg.output_dir.c_str());
    return 0;
}

int cmd_extract(const RunConfig& cfg, const std::string& realization_file) {
    auto dom = cfg.build_domain();
    auto vf = cfg.build_vf();
    auto opt = cfg.build_options();
    opt.keep_geometry = cfg.emit_vertices;
    auto model = cfg.build_model();

    long done = 0;
    for (long t = 0; t < cfg.run_trials; ++t) {
        FieldRealization f;
        if (!realization_file.empty()) {
            std::ifstream in(realization_file);
            if (!in) throw std::invalid_argument("cannot open " + realization_file);
            json j;
            in >> j;
            f = realization_from_json(j);
        } else {
            SplitMix64 rng(derive_seed(cfg.run_seed, t));
            f = sample_field(model, cfg.field_n_waves, rng);
            f.seed = {cfg.run_seed, static_cast<std::uint64_t>(t)};
        }
        auto an = analyze_realization(f, vf, dom, opt);
        char name[64];
        std::snprintf(name, sizeof(name), "components_%04ld.jsonl", t);
        std::ofstream out(out_path(cfg, name));
        for (const auto& ca : an.comps) out << component_line(ca, cfg.emit_vertices).dump() << "\n";
        ++done;
        if (!realization_file.empty()) break;
    }
    std::printf("extracted components for %ld trials into %s\n", done, cfg.output_dir.c_str());
    return 0;
}

EnsembleResult run_from_config(const RunConfig& cfg, const TrialCallback& cb = {}) {
    return run_ensemble(cfg.build_model(), cfg.field_n_waves, cfg.build_vf(), cfg.build_domain(),
                        cfg.build_options(), cfg.run_seed, cfg.run_trials, cfg.run_workers, cb);
}

json estimate_json(const RunConfig& cfg, const EnsembleResult& res) {
    json j = to_json(estimate_ck(res.trials));
    j["pooled"] = to_json(res.pooled);
    j["method_checked"] = res.method_checked;
    j["method_agree"] = res.method_agree;
    j["certified_count"] = res.certified_count;
    j["certified_k_lt2"] = res.certified_k_lt2;
    j["certified_odd_or_zero"] = res.certified_odd_or_zero;
    j["noncontractible_included"] = res.noncontractible_included;
    stamp(j, provenance(cfg));
    return j;
}

int cmd_estimate(const RunConfig& cfg, bool emit_svg) {
    if (cfg.run_trials < 2) throw std::invalid_argument("estimate needs run.trials >= 2");
    EnsembleResult res = run_from_config(cfg);
    write_json_file(out_path(cfg, "estimate.json"), estimate_json(cfg, res));

    json dd = to_json(res.pooled);
    stamp(dd, provenance(cfg));
    write_json_file(out_path(cfg, "ddist.json"), dd);

    std::ofstream csv(out_path(cfg, "histogram.csv"));
    csv << "k,count,probability\n";
    for (const auto& [k, c] : res.pooled.counts) {
        char line[96];
        std::snprintf(line, sizeof(line), "%d,%ld,%.17g\n", k, c, res.pooled.probabilities.at(k));
        csv << line;
    }
    if (emit_svg) {
        std::ofstream svg(out_path(cfg, "histogram.svg"));
        svg << histogram_svg(res.pooled.probabilities,
                             "per-component tangency counts (" + cfg.model_variant + ")");
    }
    std::printf("estimate: %ld trials, %ld components in measure, mean k %.4f\n",
                cfg.run_trials, res.pooled.total, res.pooled.mean_k());
    return 0;
}

int cmd_check(const RunConfig& cfg, const std::string& suite) {
    json report;
    bool pass = false;
    auto model = cfg.build_model();
    auto dom = cfg.build_domain();
    auto vf = cfg.build_vf();
    auto opt = cfg.build_options();

    if (suite == "sandwich") {
        double r = dom.radius / 5.0;
        DomainSpec wide = dom;
        if (dom.kind == DomainKind::Plane) wide.extent = dom.radius + 2.0 * r + 1.0;
        AnalysisOptions kopt = opt;
        kopt.keep_geometry = true;
        kopt.run_method_a = false;
        json rows = json::array();
        std::mutex mu;
        bool all_hold = true;
        run_ensemble(model, cfg.field_n_waves, vf, wide, kopt, cfg.run_seed, cfg.run_trials,
                     cfg.run_workers, [&](std::uint64_t t, const RealizationAnalysis& an) {
                         std::vector<NodalComponent> comps;
                         std::vector<int> ks;
                         for (const auto& ca : an.comps) {
                             comps.push_back(ca.geo);
                             ks.push_back(ca.method_b.k);
                         }
                         for (int k : {-1, 2, 4}) {
                             auto rep = sandwich_check(comps, ks, k, r, dom.radius, r / 10.0);
                             std::lock_guard<std::mutex> lock(mu);
                             json row = to_json(rep);
                             row["trial"] = t;
                             row["k"] = k;
                             rows.push_back(row);
                             all_hold = all_hold && rep.holds;
                         }
                     });
        pass = all_hold;
        report["samples"] = rows;
        report["r"] = r;
        report["R"] = dom.radius;
    } else if (suite == "parity" || suite == "identity") {
        EnsembleResult res = run_from_config(cfg);
        if (suite == "parity") {
            double rate = res.certified_count > 0
                              ? 1.0 - static_cast<double>(res.certified_odd_or_zero) /
                                          res.certified_count
                              : 1.0;
            pass = rate >= 0.995 && res.certified_k_lt2 == 0;
            report["certified"] = res.certified_count;
            report["odd_or_zero"] = res.certified_odd_or_zero;
            report["k_lt2"] = res.certified_k_lt2;
            report["even_rate"] = rate;
        } else {
            bool all = true, equality_ok = true;
            json rows = json::array();
            for (const auto& tr : res.trials) {
                auto rep = tangency_sum_check(tr);
                all = all && rep.holds;
                bool ledger_empty = tr.ledger.boundary == 0 && tr.ledger.excised == 0 &&
                                    tr.ledger.unresolved == 0 && rep.boundary_roots == 0;
                if (ledger_empty && !rep.equality) equality_ok = false;
                rows.push_back(to_json(rep));
            }
            pass = all && equality_ok;
            report["samples"] = rows;
        }
    } else if (suite == "stability") {
        double b = cfg.stability_b > 0.0 ? cfg.stability_b : cfg.beta / 4.0;
        long certified = 0, preserved = 0, changed = 0, ambiguous = 0, lost = 0;
        json rows = json::array();
        for (long t = 0; t < cfg.run_trials; ++t) {
            SplitMix64 rng(derive_seed(cfg.run_seed, t));
            FieldRealization f = sample_field(model, cfg.field_n_waves, rng);
            auto rep = stability_check(f, model, cfg.field_n_waves, vf, cfg.beta, b, dom, opt,
                                       derive_seed(cfg.run_seed ^ 0x70657274ULL, t));
            certified += rep.certified;
            preserved += rep.preserved;
            changed += rep.changed;
            ambiguous += rep.ambiguous;
            lost += rep.lost;
            rows.push_back(to_json(rep));
        }
        pass = changed == 0 && lost == 0;
        report["b"] = b;
        report["certified"] = certified;
        report["preserved"] = preserved;
        report["changed"] = changed;
        report["ambiguous"] = ambiguous;
        report["lost"] = lost;
        report["samples"] = rows;
    } else if (suite == "ergodic") {
        DomainSpec big = dom;
        big.radius = 2.0 * dom.radius;
        big.extent = 0.0;
        SplitMix64 rng(derive_seed(cfg.run_seed ^ 0x626967ULL, 0));
        FieldRealization fbig = sample_field(model, cfg.field_n_waves, rng);
        auto an_big = analyze_realization(fbig, vf, big, opt);
        EnsembleResult res = run_from_config(cfg);
        std::vector<double> counts;
        for (const auto& tr : res.trials) counts.push_back(tr.contained_count);
        auto rep = ergodic_check(an_big.summary.contained_count, big.area(), counts, dom.area());
        pass = rep.relative_gap < 0.15;
        report = to_json(rep);
    } else if (suite == "covariance") {
        SplitMix64 lrng(1234);
        std::vector<Vec2> lags{{0.0, 0.0}};
        for (int i = 0; i < 19; ++i)
            lags.push_back({3.0 * lrng.next_double() - 1.5, 3.0 * lrng.next_double() - 1.5});
        auto rep = covariance_mc_check(model, static_cast<int>(cfg.run_trials), lags,
                                       cfg.field_n_waves, cfg.run_seed);
        pass = true;
        for (const auto& row : rep.rows)
            pass = pass && std::abs(row.empirical - row.expected) <= 3.0 * row.stderr_ + 1e-12;
        report = to_json(rep);
    } else if (suite == "kacrice") {
        Vec2 zeta = VectorFieldSpec::constant_angle_deg(cfg.vf_angle_deg).zeta;
        auto oracle = kac_rice_tangency_density(model, zeta, 1000000, cfg.run_seed ^ 0x6f72ULL);
        AnalysisOptions kopt = opt;
        kopt.run_method_a = false;
        auto vfp = VectorFieldSpec::constant(zeta.perp());
        EnsembleResult res = run_ensemble(model, cfg.field_n_waves, vfp, dom, kopt, cfg.run_seed,
                                          cfg.run_trials, cfg.run_workers);
        double zeros = 0.0, area = 0.0;
        for (const auto& tr : res.trials) {
            zeros += tr.joint_zeros_in_ball;
            area += tr.area;
        }
        double empirical = zeros / area;
        double rel = std::abs(empirical - oracle.density) / oracle.density;
        pass = rel < 0.05 && oracle.stderr_ / oracle.density < 0.01;
        report["oracle"] = to_json(oracle);
        report["empirical_density"] = empirical;
        report["relative_error"] = rel;
    } else {
        throw std::invalid_argument("unknown suite '" + suite + "'");
    }

    report["suite"] = suite;
    report["pass"] = pass;
    stamp(report, provenance(cfg));
    write_json_file(out_path(cfg, "check_" + suite + ".json"), report);
    std::printf("%s %s\n", pass ? "PASS" : "FAIL", suite.c_str());
    return pass ? 0 : 1;
}

int cmd_sweep(const RunConfig& base, const std::string& axis, const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("sweep: no values given");
    std::ofstream csv(out_path(base, "sweep_" + axis + ".csv"));
    csv << "axis,value,stat,k,mean,stderr,n\n";
    std::map<int, double> first_probs;
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunConfig cfg = base;
        cfg.run_seed = derive_seed(base.run_seed, 1000 + i);
        if (axis == "alpha") {
            cfg.model_variant = values[i] >= 1.0 ? "circle" : "annulus";
            cfg.model_alpha = values[i] >= 1.0 ? 0.5 : values[i];
        } else if (axis == "zeta_angle") {
            cfg.vf_angle_deg = values[i];
        } else if (axis == "rho") {
            cfg.vf_rho = values[i];
        } else if (axis == "R") {
            cfg.domain_radius = values[i];
        } else {
            throw std::invalid_argument("sweep axis must be alpha|zeta_angle|rho|R");
        }
        cfg.validate();
        EnsembleResult res = run_from_config(cfg);
        auto table = estimate_ck(res.trials);
        char line[160];
        for (const auto& [k, est] : table.per_k) {
            std::snprintf(line, sizeof(line), "%s,%.17g,C_k,%d,%.17g,%.17g,%ld\n", axis.c_str(),
                          values[i], k, est.mean, est.stderr_, est.n_trials);
            csv << line;
        }
        auto emit = [&](const char* stat, const PerKEstimate& e) {
            std::snprintf(line, sizeof(line), "%s,%.17g,%s,,%.17g,%.17g,%ld\n", axis.c_str(),
                          values[i], stat, e.mean, e.stderr_, e.n_trials);
            csv << line;
        };
        emit("ns_constant", table.ns_constant);
        emit("density_per_area", table.density_per_area);
        emit("mean_tangencies", table.mean_tangencies);
        long excised = 0;
        for (const auto& tr : res.trials) excised += tr.ledger.excised;
        std::snprintf(line, sizeof(line), "%s,%.17g,ledger_excised,,%ld,0,%ld\n", axis.c_str(),
                      values[i], excised, static_cast<long>(res.trials.size()));
        csv << line;
        if (i == 0) first_probs = res.pooled.probabilities;
        std::snprintf(line, sizeof(line), "%s,%.17g,tv_vs_first,,%.17g,0,%ld\n", axis.c_str(),
                      values[i], tv_distance(res.pooled.probabilities, first_probs),
                      static_cast<long>(res.trials.size()));
        csv << line;
    }
    std::printf("sweep over %s: %zu values -> %s\n", axis.c_str(), values.size(),
                out_path(base, "sweep_" + axis + ".csv").c_str());
    return 0;
}

int cmd_oracle(const RunConfig& cfg) {
    auto model = cfg.build_model();
    Vec2 zeta = VectorFieldSpec::constant_angle_deg(cfg.vf_angle_deg).zeta;
    json j;
    j["tangency_density"] = to_json(kac_rice_tangency_density(model, zeta, 1000000, cfg.run_seed));
    j["critical_density"] = to_json(kac_rice_critical_density(model, 1000000, cfg.run_seed + 1));
    stamp(j, provenance(cfg));
    write_json_file(out_path(cfg, "oracle.json"), j);
    std::printf("oracle densities written to %s\n", out_path(cfg, "oracle.json").c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo laboratory for nodal tangency statistics of Gaussian random waves"};
    app.require_subcommand(1);

    CliState st;
    std::string suite, axis, realization_file;
    std::vector<double> sweep_values;
    bool emit_svg = false;

    auto* sample = app.add_subcommand("sample", "draw and persist field realizations");
    add_common(sample, st);
    auto* extract = app.add_subcommand("extract", "extract nodal components per trial");
    add_common(extract, st);
    extract->add_option("--realization", realization_file, "replay one serialized realization");
    auto* estimate =
        app.add_subcommand("estimate", "full pipeline: direction distribution and C_k table");
    add_common(estimate, st);
    estimate->add_flag("--svg", emit_svg, "emit a bar chart of the k-histogram");
    auto* check = app.add_subcommand("check", "run a named acceptance suite");
    add_common(check, st);
    check->add_option("--suite", suite,
                      "sandwich|parity|identity|stability|ergodic|covariance|kacrice")
        ->required();
    auto* sweep = app.add_subcommand("sweep", "repeat estimate along a parameter axis");
    add_common(sweep, st);
    sweep->add_option("--axis", axis, "alpha|zeta_angle|rho|R")->required();
    sweep->add_option("--values", sweep_values, "axis values")->required()->delimiter(',');
    auto* oracle = app.add_subcommand("oracle", "Kac-Rice density oracles");
    add_common(oracle, st);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = st.load();
        if (sample->parsed()) return cmd_sample(cfg);
        if (extract->parsed()) return cmd_extract(cfg, realization_file);
        if (estimate->parsed()) return cmd_estimate(cfg, emit_svg);
        if (check->parsed()) return cmd_check(cfg, suite);
        if (sweep->parsed()) return cmd_sweep(cfg, axis, sweep_values);
        if (oracle->parsed()) return cmd_oracle(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
