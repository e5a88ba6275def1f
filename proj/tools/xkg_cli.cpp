// Command-line driver: one subcommand per pipeline stage plus `verify`,
// which runs the acceptance gates. Exit codes: 0 ok, 1 criterion failure,
// 2 config error, 3 solver failure.

#include <sys/stat.h>

#include <cstdio>
#include <iostream>

#include "CLI11.hpp"
#include "xkg/acceptance.hpp"
#include "xkg/config.hpp"
#include "xkg/curvature_radial.hpp"
#include "xkg/momentum_oracle.hpp"

using namespace xkg;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 0;
    unsigned seed = 12345;
    int only = 0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "key=value config file");
    cmd->add_option("--out", a.out_dir, "output directory for CSVs");
    cmd->add_option("--workers", a.workers, "OpenMP thread count (0 = default)");
    cmd->add_option("--seed", a.seed, "seed for randomized probes");
    cmd->add_option("--only", a.only, "verify: run a single criterion id (1..13)");
}

Config load_config(const CommonArgs& a) {
    Config cfg;
    if (!a.config_path.empty()) cfg = Config::from_file(a.config_path);
    return cfg;
}

std::string out_path(const CommonArgs& a, const std::string& name) {
    mkdir(a.out_dir.c_str(), 0755);  // fine if it already exists
    return a.out_dir + "/" + name;
}

int cmd_burns_simanca(const CommonArgs& a) {
    const Config cfg = load_config(a);
    const int k = cfg.get("k", 3);
    if (k < 2) throw std::runtime_error("config: k must be >= 2");
    const BSMetric bs = solve_burns_simanca(
        k, cfg.get("t_min", 1e-4), cfg.get("t_max", 1e4), cfg.get("n_nodes", 2048));
    const BSExpansion e = expansion_data(bs);
    write_bs_csv(bs, e, out_path(a, "burns_simanca_k" + std::to_string(k) + ".csv"));
    const double sup = radial_scalar_curvature(bs.profile).cwiseAbs().maxCoeff();
    std::printf("k=%d sup|S|=%s psi_exponent=%s psi_tilde_exponent=%s\n", k,
                format_sci(sup).c_str(), format_sci(e.leading_exponent).c_str(),
                format_sci(e.tilde_exponent).c_str());
    return 0;
}

int cmd_assemble(const CommonArgs& a) {
    const Config cfg = load_config(a);
    const double eps = cfg.get("eps", 0.05);
    const ModelSpace space =
        make_model(ModelKind::Projective, cfg.get("n", 4), cfg.get("k", 3));
    const BSMetric bs = solve_burns_simanca(space.k);
    const GluedMetric g =
        assemble_omega_eps(space, bs, eps, cfg.get("n_nodes", 1024));
    {
        CsvWriter csv(out_path(a, "assemble.csv"));
        csv.comment("glued background at eps=" + format_sci(eps));
        csv.header({"d", "momentum", "momentum_lambda", "glue_potential",
                    "scalar_curvature"});
        for (int i = 0; i < g.bg.size(); ++i)
            csv.row({g.bg.d[i], g.bg.mj[0][i], g.bg.mj[1][i], g.bg.A[i],
                     g.bg.S[i]});
    }
    {
        CsvWriter csv(out_path(a, "assemble_neck.csv"));
        csv.header({"derivative", "sup", "rate", "constant"});
        for (const NeckEstimate& ne : neck_comparison(g))
            csv.row({static_cast<double>(ne.i), ne.sup, ne.rate, ne.constant});
    }
    std::printf("eps=%s positive on all regions, outer sup|A|=%s\n",
                format_sci(eps).c_str(), format_sci(outer_exactness(g)).c_str());
    return 0;
}

int cmd_moment_map(const CommonArgs& a) {
    const Config cfg = load_config(a);
    const ModelSpace space =
        make_model(ModelKind::Projective, cfg.get("n", 4), cfg.get("k", 3));
    const HamiltonianSpace hs =
        make_hamiltonian_space(space, cfg.get("quad_order", 8));
    std::vector<int> normal(space.k);
    for (int i = 0; i < space.k; ++i) normal[i] = i;
    const MomentResult mr = submanifold_moment(hs, normal);
    CsvWriter csv(out_path(a, "moment.csv"));
    csv.header({"basis_index", "coefficient", "integral"});
    for (int i = 0; i < mr.vector.size(); ++i)
        csv.row({static_cast<double>(i), mr.vector[i], mr.integrals[i]});
    csv.comment("vol_S=" + format_sci(mr.vol_S) +
                " const=" + format_sci(mr.const_coeff) +
                " mu_delta=" + format_sci(mr.mu_delta_coeff));
    std::printf("mu_S(S) = %s + %s mu_Delta, vol_S=%s offdiag=%s\n",
                format_sci(mr.const_coeff).c_str(),
                format_sci(mr.mu_delta_coeff).c_str(),
                format_sci(mr.vol_S).c_str(),
                format_sci(mr.offdiag_sup).c_str());
    return 0;
}

int cmd_linear_study(const CommonArgs& a) {
    const Config cfg = load_config(a);
    const ModelSpace space =
        make_model(ModelKind::Projective, cfg.get("n", 4), cfg.get("k", 3));
    const BSMetric bs = solve_burns_simanca(space.k);
    const double delta = cfg.get("delta", 4.0 - 2.0 * space.k + 0.1);
    const InverseBoundStudy st = inverse_bound_study(
        space, bs, cfg.get_list("eps_sweep", {0.1, 0.05, 0.025}), delta,
        cfg.get("n_nodes", 512), cfg.get("probes", 20), a.seed);
    CsvWriter csv(out_path(a, "linear_study.csv"));
    csv.comment("slope=" + format_sci(st.slope) + " stderr=" +
                format_sci(st.slope_stderr));
    csv.header({"eps", "inverse_bound"});
    for (size_t i = 0; i < st.eps.size(); ++i) csv.row({st.eps[i], st.bound[i]});
    std::printf("inverse bound slope=%s +- %s over %zu eps\n",
                format_sci(st.slope).c_str(), format_sci(st.slope_stderr).c_str(),
                st.eps.size());
    return 0;
}

int cmd_residual_study(const CommonArgs& a) {
    const Config cfg = load_config(a);
    const ModelSpace space =
        make_model(ModelKind::Projective, cfg.get("n", 4), cfg.get("k", 3));
    const BSMetric bs = solve_burns_simanca(space.k);
    const double delta = cfg.get("delta", 4.0 - 2.0 * space.k + 0.1);
    const ScalingStudy st = residual_scaling_study(
        space, bs, cfg.get_list("eps_sweep", {0.025, 0.0125, 0.00625, 0.003125}),
        delta, cfg.get("n_nodes", 1024), cfg.get("with_correction", 1) != 0);
    CsvWriter csv(out_path(a, "residual_study.csv"));
    csv.comment("exponent=" + format_sci(st.exponent) + " stderr=" +
                format_sci(st.exponent_stderr) + " target=" +
                format_sci(st.target));
    csv.header({"eps", "residual_norm"});
    for (size_t i = 0; i < st.eps.size(); ++i) csv.row({st.eps[i], st.norm[i]});
    std::printf("residual exponent=%s +- %s (target %s)\n",
                format_sci(st.exponent).c_str(),
                format_sci(st.exponent_stderr).c_str(),
                format_sci(st.target).c_str());
    return 0;
}

int cmd_solve(const CommonArgs& a) {
    const Config cfg = load_config(a);
    const ModelSpace space =
        make_model(ModelKind::Projective, cfg.get("n", 4), cfg.get("k", 3));
    const BSMetric bs = solve_burns_simanca(space.k);
    const double eps = cfg.get("eps", 0.025);
    const double delta = cfg.get("delta", 4.0 - 2.0 * space.k + 0.1);
    const int n_nodes = cfg.get("n_nodes", 512);
    const PicardResult pr = picard_solve(space, bs, eps, delta, n_nodes, -1.0,
                                         cfg.get("tol", 1e-10),
                                         cfg.get("max_iter", 50), a.seed);
    {
        CsvWriter csv(out_path(a, "solve_iterations.csv"));
        csv.comment("eps=" + format_sci(eps) + " ball=" +
                    format_sci(pr.ball_radius) + " C=" + format_sci(pr.C));
        csv.header({"iteration", "step_norm"});
        for (size_t i = 0; i < pr.state.step_history.size(); ++i)
            csv.row({static_cast<double>(i + 1), pr.state.step_history[i]});
    }
    {
        const FixedPointProblem p =
            make_fixed_point_problem(space, bs, eps, delta, n_nodes);
        const Vec S = p.metric.bg.scalar_curvature_of(pr.u_full);
        CsvWriter csv(out_path(a, "solve_solution.csv"));
        csv.comment("g0=" + format_sci(pr.state.g0) + " g1=" +
                    format_sci(pr.state.g1) + " final_residual=" +
                    format_sci(pr.final_residual));
        csv.header({"d", "u", "v", "scalar_curvature"});
        for (int i = 0; i < p.metric.bg.size(); ++i)
            csv.row({p.metric.bg.d[i], pr.u_full[i], pr.state.v[i], S[i]});
    }
    std::printf("eps=%s converged in %d iterations, |state|=%s ball=%s\n",
                format_sci(eps).c_str(), pr.state.iter,
                format_sci(pr.state.v_norm + pr.state.g_norm).c_str(),
                format_sci(pr.ball_radius).c_str());
    return 0;
}

int cmd_verify(const CommonArgs& a) {
    if (a.only < 0 || a.only > kNumCriteria)
        throw std::runtime_error("config: --only must be 1..13");
    std::vector<CriterionResult> results;
    if (a.only > 0)
        results.push_back(run_criterion(a.only, a.workers, a.seed));
    else
        results = run_all_criteria(a.workers, a.seed);
    CsvWriter csv(out_path(a, "verify.csv"));
    csv.header({"id", "name", "pass", "details"});
    bool all = true;
    for (const CriterionResult& r : results) {
        all = all && r.pass;
        std::printf("[%s] criterion %2d: %s — %s\n", r.pass ? "PASS" : "FAIL",
                    r.id, r.name.c_str(), r.details.c_str());
        csv.raw_row({std::to_string(r.id), r.name, r.pass ? "1" : "0",
                     r.details});
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for glued extremal metrics on blowups"};
    app.require_subcommand(1);
    CommonArgs a;
    std::map<std::string, std::function<int(const CommonArgs&)>> dispatch = {
        {"burns-simanca", cmd_burns_simanca}, {"assemble", cmd_assemble},
        {"moment-map", cmd_moment_map},       {"linear-study", cmd_linear_study},
        {"residual-study", cmd_residual_study}, {"solve", cmd_solve},
        {"verify", cmd_verify},
    };
    const char* help[] = {"Burns-Simanca model metric and decay fits",
                          "glued approximate metric and region diagnostics",
                          "moment-map quadrature suite",
                          "inverse-bound eps-uniformity study",
                          "residual scaling study",
                          "Picard solve of the extremal equation",
                          "run the acceptance criteria"};
    int hi = 0;
    for (auto& [name, fn] : dispatch) (void)fn, (void)name;
    for (const char* nm : {"burns-simanca", "assemble", "moment-map",
                           "linear-study", "residual-study", "solve", "verify"})
        add_common(app.add_subcommand(nm, help[hi++]), a);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        return dispatch.at(app.get_subcommands().front()->get_name())(a);
    } catch (const NotContracting& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const LeftBall& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const SolverFailed& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const IllConditioned& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
}
