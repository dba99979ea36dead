// hslab: experiments on Hajlasz-Sobolev embeddings over finite metric
// measure spaces. Exit codes: 0 success, 2 invalid input/configuration,
// 3 a theorem-consequence assertion failed (always an implementation bug
// on valid inputs).

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hslab/corpus.hpp"
#include "hslab/json_io.hpp"

using namespace hslab;

namespace {

std::vector<double> parse_values(const std::string& inline_csv, const std::string& file,
                                 int expected) {
    std::vector<double> out;
    if (!file.empty()) {
        std::ifstream in(file);
        if (!in) throw Error(Errc::io_error, "cannot open " + file);
        json doc;
        in >> doc;
        out = doc.get<std::vector<double>>();
    } else {
        std::stringstream ss(inline_csv);
        std::string tok;
        while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    }
    if (static_cast<int>(out.size()) != expected)
        throw Error(Errc::bad_params, "expected " + std::to_string(expected) + " values, got " +
                                          std::to_string(out.size()));
    return out;
}

double resolve_resolution(const MetricMeasureSpace& space, const std::string& spec) {
    if (spec == "auto") return 3.0 * space.min_positive_distance();
    return std::stod(spec);
}

void write_reports(const json& config, const MetricMeasureSpace& space, json result,
                   const std::string& out_path, const std::string& csv_path,
                   const std::string& csv_payload) {
    const json envelope = report_envelope(config, space_to_json(space), std::move(result));
    if (out_path.empty())
        std::cout << envelope.dump(2) << "\n";
    else
        save_json(envelope, out_path);
    if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw Error(Errc::io_error, "cannot write " + csv_path);
        out << csv_payload;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hslab: embedding inequalities and lower mass bounds on finite metric measure spaces"};
    app.require_subcommand(1);

    // --- gen ---------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "generate a corpus space as a JSON document");
    int gen_grid_dim = 0, gen_grid_n = 0, gen_cantor = 0, gen_vd_n = 0, gen_rand_n = 0;
    double gen_vd_beta = 1.0, gen_snowflake = 0.0;
    unsigned long long gen_seed = 1;
    std::string gen_base, gen_out;
    gen->add_option("--grid-dim", gen_grid_dim, "grid dimension (1 or 2)");
    gen->add_option("--grid-n", gen_grid_n, "grid points per axis");
    gen->add_option("--cantor", gen_cantor, "middle-thirds level (1..8)");
    gen->add_option("--snowflake", gen_snowflake, "exponent alpha in (0,1); needs --base");
    gen->add_option("--base", gen_base, "base space JSON for --snowflake");
    gen->add_option("--vdensity-n", gen_vd_n, "vanishing-density point count");
    gen->add_option("--vdensity-beta", gen_vd_beta, "vanishing-density exponent");
    gen->add_option("--random-n", gen_rand_n, "random space point count");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--out", gen_out, "output path (stdout when omitted)");

    // --- analyze -----------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "measure the geometric constants of a space");
    std::string an_space, an_res = "auto", an_out;
    double an_s = 1.0;
    analyze->add_option("space", an_space, "space JSON path")->required();
    analyze->add_option("--s", an_s, "regularity exponent")->required();
    analyze->add_option("--resolution", an_res, "minimum radius scale, or 'auto' (= 3 x min gap)");
    analyze->add_option("--out", an_out, "report path");

    // --- gradient ----------------------------------------------------------
    auto* gradient = app.add_subcommand("gradient", "solve for the minimal generalized gradient");
    std::string gr_space, gr_u, gr_u_file, gr_out;
    double gr_p = 1.0;
    gradient->add_option("space", gr_space)->required();
    gradient->add_option("--p", gr_p, "exponent p > 0")->required();
    gradient->add_option("--u", gr_u, "function values, comma separated");
    gradient->add_option("--u-file", gr_u_file, "function values as a JSON array");
    gradient->add_option("--out", gr_out, "report path");

    // --- constants ---------------------------------------------------------
    auto* constants = app.add_subcommand(
        "constants", "empirical embedding constant over a first-kind cutoff corpus");
    std::string cn_space, cn_kind = "sobolev", cn_out, cn_csv, cn_balls = "auto";
    double cn_s = 1.0, cn_p = 0.5, cn_sigma = 2.0, cn_c1 = 1.0, cn_gamma = 1.0;
    constants->add_option("space", cn_space)->required();
    constants->add_option("--kind", cn_kind, "inequality kind (sobolev, poincare, ...)");
    constants->add_option("--s", cn_s)->required();
    constants->add_option("--p", cn_p)->required();
    constants->add_option("--sigma", cn_sigma);
    constants->add_option("--c1", cn_c1);
    constants->add_option("--gamma", cn_gamma);
    constants->add_option("--balls", cn_balls,
                          "'auto' (quartile radii at every center) or 'x:r;x:r;...'");
    constants->add_option("--out", cn_out, "report path");
    constants->add_option("--csv", cn_csv, "per-ball table CSV path");

    // --- extract -----------------------------------------------------------
    auto* extract = app.add_subcommand(
        "extract", "run one reverse-direction pipeline and certify the extracted mass bound");
    std::string ex_space, ex_case = "thm4.1-b", ex_res = "auto", ex_out, ex_csv;
    double ex_s = 1.0, ex_p = std::numeric_limits<double>::quiet_NaN(), ex_sigma = 2.0;
    double ex_c1 = 1.0, ex_gamma = 1.0, ex_beta = 2.0;
    int ex_jmax = 64;
    extract->add_option("space", ex_space)->required();
    extract->add_option("--case", ex_case, "thm4.1-b|thm4.1-c|thm4.4-b|thm4.4-c|thm5.1|thm5.4|thm6.1|thm6.2");
    extract->add_option("--s", ex_s)->required();
    extract->add_option("--p", ex_p, "defaults to s/2 (p<s cases) or 2s (holder cases)");
    extract->add_option("--sigma", ex_sigma);
    extract->add_option("--c1", ex_c1);
    extract->add_option("--gamma", ex_gamma);
    extract->add_option("--beta", ex_beta);
    extract->add_option("--resolution", ex_res);
    extract->add_option("--j-max", ex_jmax);
    extract->add_option("--out", ex_out, "report path");
    extract->add_option("--csv", ex_csv, "per-ball table CSV path");

    // --- verify ------------------------------------------------------------
    auto* verify = app.add_subcommand(
        "verify", "run every theorem case on one space; exit 3 on any FAIL row");
    std::string vf_space, vf_res = "auto", vf_out;
    double vf_s = 1.0, vf_sigma = 2.0;
    verify->add_option("space", vf_space)->required();
    verify->add_option("--s", vf_s)->required();
    verify->add_option("--sigma", vf_sigma);
    verify->add_option("--resolution", vf_res);
    verify->add_option("--out", vf_out, "report path");

    // --- trace -------------------------------------------------------------
    auto* trace = app.add_subcommand("trace", "execute the chaining proof on one input");
    std::string tr_space, tr_b = "auto", tr_u, tr_u_file, tr_bump, tr_out;
    int tr_center = 0;
    double tr_r0 = 0.25, tr_sigma = 2.0, tr_s = 1.0, tr_p = 0.5;
    trace->add_option("space", tr_space)->required();
    trace->add_option("--center", tr_center, "index of the ball center")->required();
    trace->add_option("--r0", tr_r0, "ball radius")->required();
    trace->add_option("--sigma", tr_sigma);
    trace->add_option("--s", tr_s)->required();
    trace->add_option("--p", tr_p)->required();
    trace->add_option("--b", tr_b, "V-condition constant, or 'auto' (= measured kappa / sigma^s)");
    trace->add_option("--u", tr_u, "function values, comma separated");
    trace->add_option("--u-file", tr_u_file, "function values as a JSON array");
    trace->add_option("--bump", tr_bump, "use a cutoff pair 'center,r,R' instead of --u");
    trace->add_option("--out", tr_out, "certificate path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            std::unique_ptr<MetricMeasureSpace> space;
            if (gen_grid_dim > 0)
                space = std::make_unique<MetricMeasureSpace>(corpus::grid(gen_grid_dim, gen_grid_n));
            else if (gen_cantor > 0)
                space = std::make_unique<MetricMeasureSpace>(corpus::cantor(gen_cantor));
            else if (gen_snowflake > 0.0) {
                if (gen_base.empty()) throw Error(Errc::bad_params, "--snowflake needs --base");
                space = std::make_unique<MetricMeasureSpace>(
                    corpus::snowflake(load_space(gen_base), gen_snowflake));
            } else if (gen_vd_n > 0)
                space = std::make_unique<MetricMeasureSpace>(
                    corpus::vanishing_density(gen_vd_n, gen_vd_beta));
            else if (gen_rand_n > 0)
                space = std::make_unique<MetricMeasureSpace>(corpus::random_space(gen_rand_n, gen_seed));
            else
                throw Error(Errc::bad_params, "choose a generator");
            const json doc = space_to_json(*space);
            if (gen_out.empty())
                std::cout << doc.dump(2) << "\n";
            else
                save_json(doc, gen_out);
            return 0;
        }

        if (analyze->parsed()) {
            const auto space = load_space(an_space);
            const double res = resolve_resolution(space, an_res);
            const auto summary = geometry::analyze(space, an_s, res);
            const json config{{"command", "analyze"}, {"s", an_s}, {"resolution", res}};
            write_reports(config, space, to_json(summary), an_out, "", "");
            return 0;
        }

        if (gradient->parsed()) {
            const auto space = load_space(gr_space);
            const auto u = parse_values(gr_u, gr_u_file, space.size());
            const auto rep = minimal_gradient(space, u, gr_p);
            const json config{{"command", "gradient"}, {"p", gr_p}, {"u", u}};
            write_reports(config, space, to_json(rep), gr_out, "", "");
            return 0;
        }

        if (constants->parsed()) {
            const auto space = load_space(cn_space);
            const auto kind = kind_from_name(cn_kind);
            if (!kind) throw Error(Errc::bad_params, "unknown kind " + cn_kind);
            InequalityCase cse;
            cse.kind = *kind;
            cse.s = cn_s;
            cse.p = cn_p;
            cse.sigma = cn_sigma;
            cse.c1 = cn_c1;
            cse.gamma = cn_gamma;
            std::vector<Ball> balls;
            if (cn_balls == "auto") {
                const double d = space.diameter();
                for (int x = 0; x < space.size(); ++x)
                    for (double r : {0.25 * d, 0.5 * d, d}) balls.push_back(open_ball(x, r));
            } else {
                std::stringstream ss(cn_balls);
                std::string tok;
                while (std::getline(ss, tok, ';')) {
                    const auto colon = tok.find(':');
                    if (colon == std::string::npos)
                        throw Error(Errc::bad_params, "ball spec needs 'center:radius'");
                    balls.push_back(
                        open_ball(std::stoi(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))));
                }
            }
            std::vector<HajlaszPair> corpus_pairs;
            for (const auto& ball : balls) {
                const auto fam = construction1(space, ball);
                for (const auto& m : fam.members)
                    corpus_pairs.push_back(
                        {m.u, m.g, "c1(" + std::to_string(ball.center) + "," +
                                        std::to_string(ball.radius) + ")#" + std::to_string(m.j)});
            }
            const auto rep = estimate_constant(space, cse, corpus_pairs, balls);
            const json config{{"command", "constants"}, {"kind", cn_kind}, {"s", cn_s},
                              {"p", cn_p},              {"sigma", cn_sigma}, {"balls", cn_balls}};
            write_reports(config, space, to_json(rep), cn_out, cn_csv, embedding_csv(rep));
            return 0;
        }

        if (extract->parsed()) {
            const auto space = load_space(ex_space);
            const auto tcase = case_from_name(ex_case);
            if (!tcase) throw Error(Errc::bad_params, "unknown case " + ex_case);
            PipelineParams params;
            params.s = ex_s;
            params.p = ex_p;
            params.sigma = ex_sigma;
            params.c1 = ex_c1;
            params.gamma = ex_gamma;
            params.beta = ex_beta;
            params.resolution = ex_res == "auto" ? std::numeric_limits<double>::quiet_NaN()
                                                 : std::stod(ex_res);
            params.j_max = ex_jmax;
            const auto rep = pipeline_verify(space, *tcase, params);
            const json config{{"command", "extract"}, {"case", ex_case}, {"s", ex_s},
                              {"p", params.p},        {"sigma", ex_sigma}, {"resolution", params.resolution}};
            write_reports(config, space, to_json(rep), ex_out, ex_csv, extraction_csv(rep));
            std::cerr << case_name(*tcase) << " on " << space.name() << ": " << rep.n_pass
                      << " pass, " << rep.n_fail << " fail, " << rep.n_skip << " skipped\n";
            return rep.all_pass ? 0 : 3;
        }

        if (verify->parsed()) {
            const auto space = load_space(vf_space);
            json results = json::array();
            bool all_ok = true;
            for (TheoremCase c : {TheoremCase::thm41b, TheoremCase::thm41c, TheoremCase::thm44b,
                                  TheoremCase::thm44c, TheoremCase::thm51, TheoremCase::thm54,
                                  TheoremCase::thm61, TheoremCase::thm62}) {
                PipelineParams params;
                params.s = vf_s;
                params.sigma = vf_sigma;
                params.resolution = vf_res == "auto" ? std::numeric_limits<double>::quiet_NaN()
                                                     : std::stod(vf_res);
                const auto rep = pipeline_verify(space, c, params);
                all_ok = all_ok && rep.all_pass;
                std::cout << (rep.all_pass ? "PASS " : "FAIL ") << case_name(c) << ": " << rep.n_pass
                          << " pass, " << rep.n_fail << " fail, " << rep.n_skip << " skipped ("
                          << rep.skip_fraction * 100.0 << "%)\n";
                json summary = to_json(rep);
                summary.erase("rows"); // the combined report keeps summaries only
                results.push_back(std::move(summary));
            }
            const json config{{"command", "verify"}, {"s", vf_s}, {"sigma", vf_sigma}};
            if (!vf_out.empty())
                save_json(report_envelope(config, space_to_json(space), std::move(results)), vf_out);
            return all_ok ? 0 : 3;
        }

        if (trace->parsed()) {
            const auto space = load_space(tr_space);
            std::vector<double> u, g;
            if (!tr_bump.empty()) {
                std::stringstream ss(tr_bump);
                std::string a, b, c;
                std::getline(ss, a, ',');
                std::getline(ss, b, ',');
                std::getline(ss, c, ',');
                const auto pair = bump(space, std::stoi(a), std::stod(b), std::stod(c));
                u = pair.u;
                g = pair.g;
            } else {
                u = parse_values(tr_u, tr_u_file, space.size());
                const auto rep = minimal_gradient(space, u, tr_p);
                g = rep.g;
            }
            double b_val;
            if (tr_b == "auto") {
                const auto lm = geometry::lower_mass_constant(space, tr_s,
                                                              space.min_positive_distance());
                b_val = lm.kappa * std::pow(tr_sigma, -tr_s);
            } else {
                b_val = std::stod(tr_b);
            }
            const auto cert = chaining_trace(space, open_ball(tr_center, tr_r0), tr_sigma, tr_s,
                                             tr_p, b_val, u, g);
            const json config{{"command", "trace"}, {"center", tr_center}, {"r0", tr_r0},
                              {"sigma", tr_sigma},  {"s", tr_s},           {"p", tr_p},
                              {"b", b_val}};
            write_reports(config, space, to_json(cert), tr_out, "", "");
            return cert.all_ok ? 0 : 3;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
