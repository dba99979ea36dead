#include "hslab/json_io.hpp"

#include <chrono>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace hslab {

json space_to_json(const MetricMeasureSpace& space) {
    json doc;
    doc["name"] = space.name();
    const int n = space.size();
    std::vector<std::vector<double>> d(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d[i][j] = space.dist(i, j);
    doc["dist"] = d;
    doc["weights"] = space.weights();
    if (!space.coords().empty()) doc["coords"] = space.coords();
    return doc;
}

MetricMeasureSpace space_from_json(const json& doc) {
    if (!doc.contains("dist") || !doc.contains("weights"))
        throw Error(Errc::io_error, "space document needs 'dist' and 'weights'");
    std::vector<std::vector<double>> coords;
    if (doc.contains("coords")) coords = doc["coords"].get<std::vector<std::vector<double>>>();
    return MetricMeasureSpace(doc.value("name", "unnamed"),
                              doc["dist"].get<std::vector<std::vector<double>>>(),
                              doc["weights"].get<std::vector<double>>(), std::move(coords));
}

MetricMeasureSpace load_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::io_error, "cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw Error(Errc::io_error, "cannot parse " + path + ": " + e.what());
    }
    return space_from_json(doc);
}

void save_json(const json& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::io_error, "cannot write " + path);
    out << doc.dump(2) << "\n";
}

json to_json(const Ball& b) {
    return json{{"center", b.center}, {"radius", b.radius}, {"closed", b.closed}};
}

json to_json(const geometry::GeometrySummary& g) {
    json doc;
    doc["s"] = g.s;
    doc["resolution"] = g.resolution;
    doc["kappa"] = g.kappa;
    doc["kappa_witness"] = to_json(g.kappa_witness);
    doc["doubling_constant"] = g.doubling;
    doc["doubling_witness"] = to_json(g.doubling_witness);
    doc["relative_kappa"] = g.relative_kappa;
    doc["relative_witness_inner"] = to_json(g.relative_inner);
    doc["relative_witness_outer"] = to_json(g.relative_outer);
    if (g.lambda)
        doc["lambda"] = *g.lambda;
    else
        doc["lambda"] = nullptr;
    doc["lambda_eff"] = std::isnan(g.lambda_eff) ? json(nullptr) : json(g.lambda_eff);
    return doc;
}

json to_json(const SolverReport& r) {
    json doc;
    doc["g"] = r.g;
    doc["value"] = r.value;
    doc["method"] = method_name(r.method);
    doc["certified"] = r.certified;
    doc["duality_gap"] = r.duality_gap;
    doc["kkt_residual"] = r.kkt_residual;
    doc["feasibility_violation"] = r.feasibility_violation;
    doc["iterations"] = r.iterations;
    doc["enumerated"] = r.enumerated;
    return doc;
}

json to_json(const ConstructionFamily& f) {
    json doc;
    doc["kind"] = f.kind == FamilyKind::c1 ? "c1" : (f.kind == FamilyKind::c2 ? "c2" : "bump");
    doc["base"] = to_json(f.base);
    if (!std::isnan(f.lambda)) doc["lambda"] = f.lambda;
    if (!std::isnan(f.phi_r)) doc["phi"] = f.phi_r;
    doc["stabilization_index"] = f.stabilization_index;
    json members = json::array();
    for (const auto& m : f.members) {
        members.push_back(json{{"j", m.j},
                               {"r_out", m.r_out},
                               {"r_in", m.r_in},
                               {"lipschitz", m.lipschitz},
                               {"u", m.u},
                               {"g", m.g},
                               {"mass_outer", m.mass_outer},
                               {"mass_inner", m.mass_inner}});
    }
    doc["members"] = std::move(members);
    return doc;
}

json to_json(const RatioRow& r) {
    return json{{"ball", to_json(r.ball)},
                {"member", r.member},
                {"lhs", r.lhs},
                {"rhs_core", r.rhs_core},
                {"ratio", std::isinf(r.ratio) ? json("inf") : json(r.ratio)}};
}

json to_json(const EmbeddingReport& r) {
    json doc;
    doc["kind"] = kind_name(r.cse.kind);
    doc["s"] = r.cse.s;
    doc["p"] = r.cse.p;
    doc["sigma"] = r.cse.sigma;
    if (r.cse.kind == IneqKind::exponential || r.cse.kind == IneqKind::exponential_doubling) {
        doc["c1"] = r.cse.c1;
        doc["gamma"] = r.cse.gamma;
    }
    doc["constant"] = std::isinf(r.constant) ? json("inf") : json(r.constant);
    doc["constant_is_lower_bound"] = true;
    doc["witness_row"] = r.witness_row;
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(to_json(row));
    doc["rows"] = std::move(rows);
    return doc;
}

json to_json(const ChainCertificate& c) {
    json doc;
    doc["ball"] = to_json(c.b0);
    doc["sigma"] = c.sigma;
    doc["s"] = c.s;
    doc["p"] = c.p;
    doc["b"] = c.b;
    doc["trivial"] = c.trivial;
    doc["all_ok"] = c.all_ok;
    doc["gamma"] = c.gamma;
    doc["gamma_point"] = c.gamma_point;
    if (!c.trivial) {
        doc["k0"] = c.k0;
        doc["j_range"] = json::array({c.j_lo, c.j_hi});
        doc["gp_integral"] = c.gp_integral;
        doc["g_shifted"] = c.g_shifted;
        json levels = json::array();
        for (const auto& l : c.levels)
            levels.push_back(json{{"j", l.j},
                                  {"threshold", l.threshold},
                                  {"mass", l.mass},
                                  {"members", l.members}});
        doc["levels"] = std::move(levels);
        json chains = json::array();
        for (const auto& ch : c.chains) {
            json steps = json::array();
            for (const auto& st : ch.steps)
                steps.push_back(json{{"from", st.from},
                                     {"to", st.to},
                                     {"radius", st.radius},
                                     {"distance", st.distance},
                                     {"ball_mass", st.ball_mass},
                                     {"required_mass", st.required_mass},
                                     {"complement_mass", st.complement_mass}});
            chains.push_back(json{{"k", ch.k},
                                  {"start", ch.start},
                                  {"a_k", ch.a_k},
                                  {"steps", std::move(steps)},
                                  {"telescoped", ch.telescoped},
                                  {"geometric_bound", ch.geometric_bound}});
        }
        doc["chains"] = std::move(chains);
    }
    json checks = json::array();
    for (const auto& chk : c.checks)
        checks.push_back(json{{"what", chk.what}, {"lhs", chk.lhs}, {"rhs", chk.rhs}, {"ok", chk.ok}});
    doc["checks"] = std::move(checks);
    return doc;
}

json to_json(const BallVerdict& v) {
    json doc;
    doc["inner"] = to_json(v.inner);
    if (v.outer) doc["outer"] = to_json(*v.outer);
    doc["path"] = path_name(v.path);
    doc["c_hat"] = v.c_hat;
    doc["kappa"] = v.kappa;
    doc["lhs"] = v.lhs;
    doc["rhs"] = v.rhs;
    doc["pass"] = v.pass;
    if (!v.note.empty()) doc["note"] = v.note;
    return doc;
}

json to_json(const ExtractionReport& r) {
    json doc;
    doc["case"] = case_name(r.tcase);
    doc["params"] = json{{"s", r.params.s},
                         {"p", r.params.p},
                         {"sigma", r.params.sigma},
                         {"c1", r.params.c1},
                         {"gamma", r.params.gamma},
                         {"beta", r.params.beta},
                         {"resolution", r.params.resolution},
                         {"j_max", r.params.j_max}};
    doc["lambda_eff"] = std::isnan(r.lambda_eff) ? json(nullptr) : json(r.lambda_eff);
    doc["n_pass"] = r.n_pass;
    doc["n_fail"] = r.n_fail;
    doc["n_skip"] = r.n_skip;
    doc["n_trivial"] = r.n_trivial;
    doc["skip_fraction"] = r.skip_fraction;
    doc["all_pass"] = r.all_pass;
    json rows = json::array();
    for (const auto& row : r.rows) rows.push_back(to_json(row));
    doc["rows"] = std::move(rows);
    return doc;
}

std::string digest(const json& doc) {
    const std::string s = doc.dump();
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

json report_envelope(const json& config, const json& space_doc, json result) {
    json doc;
    doc["config"] = config;
    doc["config_hash"] = digest(config);
    doc["space_hash"] = digest(space_doc);
    doc["result"] = std::move(result);
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    doc["meta"] = json{
        {"tool", "hslab"},
        {"version", "0.1.0"},
        {"generated_at_ms", std::chrono::duration_cast<std::chrono::milliseconds>(now).count()}};
    return doc;
}

std::string embedding_csv(const EmbeddingReport& r) {
    std::ostringstream out;
    out << "ball_center,ball_radius,best_member,lhs,rhs_core,ratio\n";
    out.precision(17);
    for (const auto& row : r.rows)
        out << row.ball.center << "," << row.ball.radius << "," << row.member << "," << row.lhs << ","
            << row.rhs_core << "," << row.ratio << "\n";
    return out.str();
}

std::string extraction_csv(const ExtractionReport& r) {
    std::ostringstream out;
    out << "inner_center,inner_radius,outer_center,outer_radius,path,c_hat,kappa,lhs,rhs,pass,note\n";
    out.precision(17);
    for (const auto& row : r.rows) {
        out << row.inner.center << "," << row.inner.radius << ",";
        if (row.outer)
            out << row.outer->center << "," << row.outer->radius;
        else
            out << ",";
        out << "," << path_name(row.path) << "," << row.c_hat << "," << row.kappa << "," << row.lhs
            << "," << row.rhs << "," << (row.pass ? 1 : 0) << "," << row.note << "\n";
    }
    return out.str();
}

} // namespace hslab
