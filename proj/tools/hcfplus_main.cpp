//
// hcfplus: curvature-flow laboratory for complex 2-step nilpotent Lie
// algebras given by structure constants.
//
// Subcommands: validate, curvature, flow, normalized-flow, metric-flow,
// soliton, moment-test, probe-uniqueness, catalog. Input is either an algebra
// JSON file (positional) or a --catalog constructor. Reports are JSON on
// stdout; with --out DIR the report, the trace CSV and optional SVG plots are
// written as files. Exit codes: 0 success, 2 validation failure, 3 numerical
// failure.
//

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hcf/algebra.hpp"
#include "hcf/catalog.hpp"
#include "hcf/curvature.hpp"
#include "hcf/flow.hpp"
#include "hcf/io.hpp"
#include "hcf/plot.hpp"
#include "hcf/rng.hpp"
#include "hcf/soliton.hpp"
#include "hcf/version.hpp"

namespace fs = std::filesystem;
using hcf::io::json;

namespace {

struct Options {
    std::string file;
    std::string catalog_name;
    double s_re = 1.0, s_im = 0.0;
    double a_re = 1.0, a_im = 0.0;
    double b_re = 1.0, b_im = 0.0;
    int m = 3;
    int n = 3;
    int dim = 5;

    std::string out;
    std::string format = "csv";
    std::string plot = "none";
    std::uint64_t seed = 0;
    std::size_t samples = 0;
    double t_end = 10.0;
    double rel_tol = 1e-9;
    double fixed_point_tol = 1e-10;
    double time_scale = 1.0;
    int general = 2;
};

struct Input {
    hcf::Algebra algebra;
    std::optional<hcf::MatC> metric;
    std::string name;
    json echo;
};

void add_input_options(CLI::App* cmd, Options& o) {
    cmd->add_option("file", o.file, "algebra JSON file");
    cmd->add_option("--catalog", o.catalog_name,
                    "catalog constructor: heisenberg3|weighted_h5|heisenberg|free_two_step|abelian");
    cmd->add_option("--s", o.s_re, "heisenberg3 weight, real part");
    cmd->add_option("--s-im", o.s_im, "heisenberg3 weight, imaginary part");
    cmd->add_option("--a", o.a_re, "weighted_h5 first weight, real part");
    cmd->add_option("--a-im", o.a_im, "weighted_h5 first weight, imaginary part");
    cmd->add_option("--b", o.b_re, "weighted_h5 second weight, real part");
    cmd->add_option("--b-im", o.b_im, "weighted_h5 second weight, imaginary part");
    cmd->add_option("--m", o.m, "free_two_step generator count");
    cmd->add_option("--n", o.n, "abelian dimension");
    cmd->add_option("--dim", o.dim, "heisenberg dimension (odd)");
}

void add_output_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "output directory for report/trace/plots");
    cmd->add_option("--format", o.format, "trace format: csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--plot", o.plot, "plot emission: none|svg")
        ->check(CLI::IsMember({"none", "svg"}));
    cmd->add_option("--seed", o.seed, "seed for any pseudo-random sampling");
    cmd->add_option("--samples", o.samples, "sample count / emitted row cap (command-specific)");
}

void add_integrator_options(CLI::App* cmd, Options& o) {
    cmd->add_option("--t-end", o.t_end, "integration horizon");
    cmd->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
    cmd->add_option("--fixed-point-tol", o.fixed_point_tol, "fixed-point stopping residual");
}

hcf::Algebra catalog_by_name(const Options& o) {
    using namespace hcf::catalog;
    const hcf::cplx s(o.s_re, o.s_im), a(o.a_re, o.a_im), b(o.b_re, o.b_im);
    if (o.catalog_name == "heisenberg3") return heisenberg3(s);
    if (o.catalog_name == "weighted_h5") return weighted_h5(a, b);
    if (o.catalog_name == "heisenberg") return heisenberg(o.dim);
    if (o.catalog_name == "free_two_step") return free_two_step(o.m);
    if (o.catalog_name == "abelian") return abelian(o.n);
    throw hcf::ValidationError("bad_parameter", "unknown catalog name: " + o.catalog_name);
}

Input resolve_input(const Options& o) {
    if (!o.file.empty() && !o.catalog_name.empty())
        throw hcf::ValidationError("bad_parameter", "give either a file or --catalog, not both");
    if (!o.file.empty()) {
        hcf::io::AlgebraFile f = hcf::io::load_algebra_file(o.file);
        return Input{hcf::validate(f.bracket), f.metric, f.name, f.echo};
    }
    if (!o.catalog_name.empty()) {
        hcf::Algebra alg = catalog_by_name(o);
        json echo = hcf::io::bracket_to_json(alg.bracket(), o.catalog_name);
        return Input{std::move(alg), std::nullopt, o.catalog_name, std::move(echo)};
    }
    throw hcf::ValidationError("bad_parameter", "no input: give an algebra file or --catalog");
}

hcf::IntegratorConfig config_of(const Options& o) {
    hcf::IntegratorConfig cfg;
    cfg.t_end = o.t_end;
    cfg.rel_tol = o.rel_tol;
    cfg.abs_tol = std::min(1e-12, o.rel_tol * 1e-3);
    cfg.fixed_point_tol = o.fixed_point_tol;
    return cfg;
}

json fingerprint_to_json(const hcf::Fingerprint& fp) {
    json j;
    j["k_spectrum"] = hcf::io::vec_to_json(fp.k_spectrum);
    j["F"] = fp.f_value;
    j["dim_center"] = fp.dim_center;
    j["dim_der"] = fp.dim_der;
    j["center_profile"] = hcf::io::vec_to_json(fp.center_profile);
    j["pairing_present"] = fp.has_pairing;
    j["pairing_invariant"] = fp.pairing_invariant;
    return j;
}

json soliton_report_to_json(const hcf::SolitonReport& rep) {
    json j;
    j["c"] = rep.c;
    j["classification"] = rep.classification;
    j["soliton_residual"] = rep.soliton_residual;
    j["derivation_residual"] = rep.derivation_residual;
    j["d_hermitian"] = rep.d_hermitian;
    j["d_hermitian_defect"] = rep.d_hermitian_defect;
    j["c_imag_abs"] = rep.c_imag_abs;
    j["shortcut_c"] = rep.shortcut_c;
    j["shortcut_derivation_residual"] = rep.shortcut_derivation_residual;
    j["derivation"] = hcf::io::matrix_to_json(rep.derivation);
    return j;
}

// Trace emission: CSV file (or embedded JSON), SVG plots parsed back from the
// CSV text so plotting never touches the numeric path.
void emit_trace(const Options& o, json& report, const std::vector<hcf::io::TraceRow>& all_rows,
                int n, const std::string& time_label, bool log_time_axis) {
    auto rows = hcf::io::subsample(all_rows, o.samples);
    const std::string csv = hcf::io::rows_to_csv(rows, n);
    report["payload"]["rows_emitted"] = rows.size();
    if (o.format == "json") {
        report["payload"]["samples"] = hcf::io::rows_to_json(rows);
    }
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        if (o.format == "csv")
            hcf::io::write_text_file((fs::path(o.out) / "trace.csv").string(), csv);
    }
    if (o.plot == "svg" && !o.out.empty()) {
        fs::create_directories(o.out);
        hcf::plot::Csv parsed = hcf::plot::parse_csv(csv);
        auto write_plot = [&](const std::string& file, const std::string& col,
                              hcf::plot::PlotOptions opt) {
            opt.xlabel = time_label;
            const std::string svg = hcf::plot::line_plot(parsed.column("t"), parsed.column(col), opt);
            hcf::io::write_text_file((fs::path(o.out) / file).string(), svg);
        };
        hcf::plot::PlotOptions norm_opt;
        norm_opt.title = "|mu|^2 vs " + time_label;
        norm_opt.ylabel = "norm_sq";
        norm_opt.logx = true;
        norm_opt.logy = true;
        norm_opt.reference = true;   // t^-1 guide
        write_plot("norm_sq.svg", "norm_sq", norm_opt);
        hcf::plot::PlotOptions f_opt;
        f_opt.title = "F vs " + time_label;
        f_opt.ylabel = "F";
        f_opt.logx = log_time_axis;
        write_plot("f_value.svg", "F", f_opt);
        hcf::plot::PlotOptions r_opt;
        r_opt.title = "fixed-point residual vs " + time_label;
        r_opt.ylabel = "residual";
        r_opt.logx = log_time_axis;
        r_opt.logy = true;
        write_plot("residual.svg", "residual", r_opt);
    }
}

json run_validate(const Options& o) {
    Input in = resolve_input(o);
    json rep = hcf::io::make_report("validate", in.echo, o.seed);
    json& p = rep["payload"];
    p["dim"] = in.algebra.dim();
    p["jacobi_residual"] = in.algebra.jacobi_residual();
    p["two_step"] = in.algebra.is_two_step();
    p["center_dim"] = in.algebra.center_dim();
    p["der_dim"] = in.algebra.derivation_dim();
    p["has_metric"] = in.metric.has_value();
    return rep;
}

json run_curvature(const Options& o) {
    Input in = resolve_input(o);
    json rep = hcf::io::make_report("curvature", in.echo, o.seed);
    json& p = rep["payload"];
    const hcf::Bracket& mu = in.algebra.bracket();
    hcf::CurvatureOperator k = hcf::k_from_bracket(mu);
    p["k"] = hcf::io::matrix_to_json(k.matrix);
    p["spectrum"] = hcf::io::vec_to_json(k.spectrum);
    hcf::TraceChecks tc = hcf::trace_checks(mu);
    p["trK"] = tc.tr_k;
    p["half_norm_sq"] = tc.half_norm_sq;
    p["static_residual"] = tc.static_residual;
    p["q_minus_k"] = (hcf::q_from_torsion(hcf::torsion(mu)) - k.matrix).norm();
    p["s_tensor_norm"] = hcf::s_tensor(mu).norm();
    if (in.metric) {
        hcf::MetricCurvature chol = hcf::k_from_metric(mu, *in.metric, hcf::Unitarization::cholesky);
        hcf::MetricCurvature eig = hcf::k_from_metric(mu, *in.metric, hcf::Unitarization::eigen);
        p["metric_tensor"] = hcf::io::matrix_to_json(chol.tensor);
        p["metric_spectrum"] = hcf::io::vec_to_json(chol.spectrum);
        p["frame_independence"] = (chol.op - eig.op).norm();
    }
    return rep;
}

json run_flow(const Options& o) {
    Input in = resolve_input(o);
    json rep = hcf::io::make_report("flow", in.echo, o.seed);
    json& p = rep["payload"];
    hcf::IntegratorConfig cfg = config_of(o);
    // direct integration at moderate horizons; the normalized flow plus the
    // norm companion carries the long-horizon asymptotics
    const bool companion = o.t_end > 100.0 && in.algebra.bracket().norm() > 0.0;
    if (companion) {
        cfg.t_end = 1e9;  // tau horizon; the companion stops on t
        hcf::CompanionTrace trace = hcf::integrate_norm_companion(in.algebra, o.t_end, cfg);
        p["route"] = "companion";
        p["termination"] = hcf::to_string(trace.termination);
        p["limit_ty"] = trace.limit_ty;
        p["F_bar"] = trace.f_bar;
        auto rows = hcf::io::rows_of(trace);
        p["final"] = json{{"t", rows.back().t}, {"norm_sq", rows.back().norm_sq}};
        emit_trace(o, rep, rows, in.algebra.dim(), "t", true);
    } else {
        hcf::FlowTrace trace = hcf::integrate_bracket_flow(in.algebra, cfg);
        p["route"] = "direct";
        p["termination"] = hcf::to_string(trace.termination);
        p["final"] = hcf::io::diagnostics_to_json(trace.back().diag);
        emit_trace(o, rep, hcf::io::rows_of(trace), in.algebra.dim(), "t", false);
    }
    return rep;
}

json run_normalized_flow(const Options& o) {
    Input in = resolve_input(o);
    json rep = hcf::io::make_report("normalized-flow", in.echo, o.seed);
    json& p = rep["payload"];
    hcf::IntegratorConfig cfg = config_of(o);
    if (o.t_end == 10.0) cfg.t_end = 1e3;  // convergence horizon default
    hcf::FlowTrace trace = hcf::integrate_normalized_flow(in.algebra, cfg);
    p["termination"] = hcf::to_string(trace.termination);
    p["final_residual"] = trace.final_residual;
    p["final"] = hcf::io::diagnostics_to_json(trace.back().diag);
    if (trace.termination == hcf::Termination::fixed_point) {
        hcf::SolitonReport cert = hcf::fixed_point_is_soliton(
            hcf::Algebra(trace.back().bracket), std::nullopt, std::max(1e-8, 10 * cfg.fixed_point_tol));
        p["soliton"] = soliton_report_to_json(cert);
        p["fingerprint"] = fingerprint_to_json(hcf::fingerprint(hcf::Algebra(trace.back().bracket)));
    }
    emit_trace(o, rep, hcf::io::rows_of(trace), in.algebra.dim(), "tau", false);
    return rep;
}

json run_metric_flow(const Options& o) {
    Input in = resolve_input(o);
    json rep = hcf::io::make_report("metric-flow", in.echo, o.seed);
    json& p = rep["payload"];
    hcf::MatC h0 = in.metric ? *in.metric
                             : hcf::MatC(hcf::MatC::Identity(in.algebra.dim(), in.algebra.dim()));
    hcf::IntegratorConfig cfg = config_of(o);
    hcf::MetricTrace trace = hcf::integrate_metric_flow(in.algebra, h0, cfg, o.time_scale);
    p["termination"] = hcf::to_string(trace.termination);
    p["time_scale"] = o.time_scale;
    p["final_h"] = hcf::io::matrix_to_json(trace.samples.back().h);
    p["final_spectrum"] = hcf::io::vec_to_json(trace.samples.back().spectrum);
    emit_trace(o, rep, hcf::io::rows_of(trace), in.algebra.dim(), "t", false);
    return rep;
}

json run_soliton(const Options& o) {
    Input in = resolve_input(o);
    json rep = hcf::io::make_report("soliton", in.echo, o.seed);
    json& p = rep["payload"];
    hcf::SolitonReport sol = hcf::soliton_solve(in.algebra);
    p["soliton"] = soliton_report_to_json(sol);
    p["static"] = json{{"c_candidate", hcf::static_check(in.algebra.bracket()).c_candidate},
                       {"residual", hcf::static_check(in.algebra.bracket()).residual}};
    p["fingerprint"] = fingerprint_to_json(hcf::fingerprint(in.algebra));
    return rep;
}

json run_moment_test(const Options& o) {
    json input;
    input["dim"] = o.dim;
    json rep = hcf::io::make_report("moment-test", input, o.seed);
    json& p = rep["payload"];
    const std::size_t count = o.samples == 0 ? 100 : o.samples;
    hcf::Rng rng(o.seed);
    double max_abs = 0.0, max_rel = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        hcf::Algebra alg(hcf::random_two_step(rng, o.dim));
        hcf::MatC e = hcf::random_center_supported(rng, alg);
        const double defect = std::abs(hcf::moment_defect(alg, e));
        const double scale = alg.bracket().norm_sq() * std::max(e.norm(), 1e-300);
        max_abs = std::max(max_abs, defect);
        max_rel = std::max(max_rel, defect / scale);
    }
    p["samples"] = count;
    p["max_abs_defect"] = max_abs;
    p["max_rel_defect"] = max_rel;
    p["pass_1e-10"] = max_rel <= 1e-10;
    return rep;
}

json run_probe_uniqueness(const Options& o) {
    Input in = resolve_input(o);
    json rep = hcf::io::make_report("probe-uniqueness", in.echo, o.seed);
    json& p = rep["payload"];
    hcf::IntegratorConfig cfg = config_of(o);
    if (o.t_end == 10.0) cfg.t_end = 1e3;
    const int orbit = o.samples == 0 ? 10 : static_cast<int>(o.samples);
    hcf::UniquenessReport rpt = hcf::uniqueness_probe(in.algebra, orbit, o.general, o.seed, cfg);
    auto limits_json = [](const std::vector<hcf::ProbeLimit>& limits) {
        json arr = json::array();
        for (const auto& lim : limits) {
            json jl;
            jl["converged"] = lim.converged;
            jl["residual"] = lim.residual;
            jl["fingerprint"] = fingerprint_to_json(lim.fp);
            arr.push_back(std::move(jl));
        }
        return arr;
    };
    p["orbit_limits"] = limits_json(rpt.orbit_limits);
    p["general_limits"] = limits_json(rpt.general_limits);
    p["max_orbit_delta"] = rpt.max_orbit_delta;
    p["single_fingerprint"] = rpt.single_fingerprint;
    return rep;
}

json run_catalog(const Options& o) {
    if (o.catalog_name.empty())
        throw hcf::ValidationError("bad_parameter", "catalog requires --name");
    hcf::Algebra alg = catalog_by_name(o);
    json algebra_json = hcf::io::bracket_to_json(alg.bracket(), o.catalog_name);
    json rep = hcf::io::make_report("catalog", algebra_json, o.seed);
    rep["payload"]["algebra"] = algebra_json;
    rep["payload"]["two_step"] = alg.is_two_step();
    rep["payload"]["center_dim"] = alg.center_dim();
    if (!o.out.empty()) {
        fs::create_directories(o.out);
        hcf::io::write_text_file((fs::path(o.out) / "algebra.json").string(),
                                 algebra_json.dump(2) + "\n");
    }
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"positive Hermitian curvature flow on complex 2-step nilpotent Lie algebras"};
    app.require_subcommand(1);
    Options o;
    std::function<json()> run;

    auto* validate = app.add_subcommand("validate", "validate a bracket and report its splitting");
    add_input_options(validate, o);
    add_output_options(validate, o);
    validate->callback([&] { run = [&] { return run_validate(o); }; });

    auto* curvature = app.add_subcommand("curvature", "curvature operator, torsion cross-check, trace identity");
    add_input_options(curvature, o);
    add_output_options(curvature, o);
    curvature->callback([&] { run = [&] { return run_curvature(o); }; });

    auto* flow = app.add_subcommand("flow", "integrate the bracket flow");
    add_input_options(flow, o);
    add_output_options(flow, o);
    add_integrator_options(flow, o);
    flow->callback([&] { run = [&] { return run_flow(o); }; });

    auto* nflow = app.add_subcommand("normalized-flow", "integrate the norm-normalized flow to its fixed point");
    add_input_options(nflow, o);
    add_output_options(nflow, o);
    add_integrator_options(nflow, o);
    nflow->callback([&] { run = [&] { return run_normalized_flow(o); }; });

    auto* mflow = app.add_subcommand("metric-flow", "integrate the metric flow on a fixed bracket");
    add_input_options(mflow, o);
    add_output_options(mflow, o);
    add_integrator_options(mflow, o);
    mflow->add_option("--time-scale", o.time_scale,
                      "clock factor: 1 = curvature flow, 2 = bracket-flow clock");
    mflow->callback([&] { run = [&] { return run_metric_flow(o); }; });

    auto* soliton = app.add_subcommand("soliton", "algebraic soliton detection and certification");
    add_input_options(soliton, o);
    add_output_options(soliton, o);
    soliton->callback([&] { run = [&] { return run_soliton(o); }; });

    auto* mtest = app.add_subcommand("moment-test", "randomized verification of the moment-map identity");
    mtest->add_option("--dim", o.dim, "maximum bracket dimension")->capture_default_str();
    add_output_options(mtest, o);
    mtest->callback([&] { run = [&] { return run_moment_test(o); }; });

    auto* probe = app.add_subcommand("probe-uniqueness", "flow limits across center-block transformations");
    add_input_options(probe, o);
    add_output_options(probe, o);
    add_integrator_options(probe, o);
    probe->add_option("--general", o.general, "extra transformations outside the center block");
    probe->callback([&] { run = [&] { return run_probe_uniqueness(o); }; });

    auto* cat = app.add_subcommand("catalog", "emit a catalog algebra as an algebra file");
    cat->add_option("--name", o.catalog_name, "constructor name")->required();
    add_input_options(cat, o);  // parameter flags; the positional stays unused
    add_output_options(cat, o);
    cat->callback([&] { run = [&] { return run_catalog(o); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        json rep = run();
        rep["wall_time_s"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const std::string text = rep.dump(2) + "\n";
        std::cout << text;
        if (!o.out.empty()) {
            fs::create_directories(o.out);
            hcf::io::write_text_file((fs::path(o.out) / "report.json").string(), text);
        }
        return 0;
    } catch (const hcf::Error& e) {
        json err;
        err["error"] = {{"code", e.code()}, {"message", e.what()}};
        std::cout << err.dump(2) << "\n";
        return e.kind() == hcf::ErrorKind::validation ? 2 : 3;
    } catch (const std::exception& e) {
        json err;
        err["error"] = {{"code", "internal_error"}, {"message", e.what()}};
        std::cout << err.dump(2) << "\n";
        return 3;
    }
}
