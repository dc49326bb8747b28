#include "tanglab/serialize.hpp"

#include <fstream>
#include <stdexcept>

namespace tanglab {

using nlohmann::json;

std::string tool_version() { return "tanglab 0.1.0"; }

json to_json(const FieldRealization& f) {
    json terms = json::array();
    for (std::size_t i = 0; i < f.terms.size(); ++i) {
        const auto& t = f.terms[i];
        terms.push_back({t.freq.x, t.freq.y, t.cos_amp, t.sin_amp,
                         f.term_scales.empty() ? 1.0 : f.term_scales[i]});
    }
    return json{{"domain", f.domain == DomainKind::Plane ? "plane" : "torus"},
                {"torus_side", f.torus_side},
                {"norm", f.norm},
                {"model_tag", f.model_tag},
                {"seed_master", f.seed.master},
                {"seed_trial", f.seed.trial},
                {"deterministic", f.deterministic},
                {"terms", terms}};
}

FieldRealization realization_from_json(const json& j) {
    FieldRealization f;
    f.domain = j.at("domain") == "torus" ? DomainKind::Torus : DomainKind::Plane;
    f.torus_side = j.at("torus_side");
    f.norm = j.at("norm");
    f.model_tag = j.at("model_tag");
    f.seed.master = j.at("seed_master");
    f.seed.trial = j.at("seed_trial");
    f.deterministic = j.at("deterministic");
    for (const auto& row : j.at("terms")) {
        WaveTerm t;
        t.freq = {row.at(0).get<double>(), row.at(1).get<double>()};
        t.cos_amp = row.at(2);
        t.sin_amp = row.at(3);
        f.terms.push_back(t);
        f.term_scales.push_back(row.at(4));
    }
    f.validate();
    return f;
}

namespace {
json ledger_json(const ExclusionLedger& l) {
    return json{{"boundary", l.boundary},
                {"excised", l.excised},
                {"unresolved", l.unresolved},
                {"sub_beta_included_flagged", l.sub_beta_included_flagged}};
}
}  // namespace

json to_json(const DirectionDistribution& d) {
    json counts = json::object();
    json probs = json::object();
    for (const auto& [k, c] : d.counts) counts[std::to_string(k)] = c;
    for (const auto& [k, p] : d.probabilities) probs[std::to_string(k)] = p;
    return json{{"counts", counts},
                {"probabilities", probs},
                {"total", d.total},
                {"mean_k", d.mean_k()},
                {"ledger", ledger_json(d.ledger)},
                {"seed", d.seed}};
}

json to_json(const EstimateTable& t) {
    json per_k = json::object();
    for (const auto& [k, e] : t.per_k)
        per_k[std::to_string(k)] = {{"mean", e.mean}, {"stderr", e.stderr_}, {"n", e.n_trials}};
    auto est = [](const PerKEstimate& e) {
        return json{{"mean", e.mean}, {"stderr", e.stderr_}, {"n", e.n_trials}};
    };
    return json{{"C_k", per_k},
                {"density_per_area", est(t.density_per_area)},
                {"ns_constant_estimate", est(t.ns_constant)},
                {"mean_tangencies", est(t.mean_tangencies)},
                {"n_trials", t.n_trials}};
}

json to_json(const TangencyRecord& r) {
    return json{{"x", r.location.x},
                {"y", r.location.y},
                {"margin", r.margin},
                {"beta_class", r.sub_beta ? "sub_beta" : "transverse"},
                {"method_agreement", r.method_agreement}};
}

json to_json(const StabilityReport& r) {
    json verdicts = json::array();
    for (const auto& v : r.verdicts) {
        const char* outcome = v.outcome == StabilityOutcome::Preserved   ? "preserved"
                              : v.outcome == StabilityOutcome::Changed   ? "changed"
                              : v.outcome == StabilityOutcome::Ambiguous ? "match-ambiguous"
                                                                         : "lost";
        verdicts.push_back({{"component", v.component},
                            {"k_before", v.k_before},
                            {"k_after", v.k_after},
                            {"outcome", outcome}});
    }
    return json{{"b", r.b},
                {"psi_scale", r.psi_scale},
                {"psi_c2_certified", r.psi_c2_certified},
                {"certified", r.certified},
                {"preserved", r.preserved},
                {"changed", r.changed},
                {"ambiguous", r.ambiguous},
                {"lost", r.lost},
                {"verdicts", verdicts}};
}

json to_json(const SandwichReport& r) {
    return json{{"lower", r.lower},
                {"mid", r.mid},
                {"upper", r.upper},
                {"slack_lower", r.slack_lower},
                {"slack_upper", r.slack_upper},
                {"holds", r.holds},
                {"centers_lower", r.centers_lower},
                {"centers_upper", r.centers_upper}};
}

json to_json(const IdentityReport& r) {
    return json{{"lhs", r.lhs},
                {"rhs", r.rhs},
                {"holds", r.holds},
                {"equality", r.equality},
                {"boundary_roots", r.boundary_roots},
                {"excised_roots", r.excised_roots}};
}

json to_json(const ErgodicReport& r) {
    return json{{"spatial_density", r.spatial_density},
                {"ensemble_density", r.ensemble_density},
                {"relative_gap", r.relative_gap}};
}

json to_json(const KacRiceEstimate& e) {
    json cov = json::array();
    for (const auto& row : e.joint_cov) {
        json r = json::array();
        for (double v : row) r.push_back(v);
        cov.push_back(r);
    }
    json mom = json::object();
    for (const auto& [pq, v] : e.moments_used.table()) {
        if (v != 0.0)
            mom[std::to_string(pq.first) + "," + std::to_string(pq.second)] = v;
    }
    return json{{"density", e.density},
                {"stderr", e.stderr_},
                {"joint_covariance", cov},
                {"moments", mom}};
}

json to_json(const CovMcReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"lag", {row.lag.x, row.lag.y}},
                        {"empirical", row.empirical},
                        {"expected", row.expected},
                        {"stderr", row.stderr_}});
    return json{{"max_abs_error", r.max_abs_error}, {"rows", rows}};
}

json component_line(const ComponentAnalysis& ca, bool emit_vertices) {
    const char* flag = ca.flag == ComponentFlag::Ok                ? "ok"
                       : ca.flag == ComponentFlag::SubBetaIncluded ? "sub_beta"
                       : ca.flag == ComponentFlag::Boundary        ? "boundary"
                       : ca.flag == ComponentFlag::Excised         ? "excised"
                                                                   : "unresolved";
    const char* size_class = ca.geo.size_class == SizeClass::Normal    ? "normal"
                             : ca.geo.size_class == SizeClass::XiSmall ? "xi_small"
                                                                       : "d_long";
    json j{{"k", ca.method_b.k},
           {"k_method_a", ca.method_a.k},
           {"flag", flag},
           {"closed", ca.geo.closed},
           {"contained", ca.geo.containment == Containment::Contained},
           {"contractible", ca.geo.contractible()},
           {"winding", {ca.geo.winding.first, ca.geo.winding.second}},
           {"area", ca.geo.enclosed_area},
           {"diameter", ca.geo.diameter},
           {"size_class", size_class},
           {"vertex_count", ca.geo.vertices.size()},
           {"min_margin", ca.method_b.records.empty() ? 1.0 : ca.method_b.min_margin},
           {"certified", ca.certified}};
    json recs = json::array();
    for (const auto& r : ca.method_b.records) recs.push_back(to_json(r));
    j["records"] = recs;
    if (emit_vertices) {
        json vs = json::array();
        for (const auto& v : ca.geo.vertices) vs.push_back({v.x, v.y});
        j["vertices"] = vs;
    }
    return j;
}

void stamp(json& j, const Provenance& prov) {
    j["config_hash"] = prov.config_hash;
    j["master_seed"] = prov.seed;
    j["tool_version"] = prov.tool_version;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

}  // namespace tanglab
