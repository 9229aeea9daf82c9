//
// Acceptance suite: every shipped guarantee of the library, run end to end at
// its stated tolerance, one pass/fail line per criterion. Exit code is the
// number of failures.
//

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "hcf/catalog.hpp"
#include "hcf/curvature.hpp"
#include "hcf/flow.hpp"
#include "hcf/rng.hpp"
#include "hcf/soliton.hpp"

using namespace hcf;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string description;
    std::function<Outcome()> run;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// C01: K(heisenberg3(2)) = diag(0,0,2) to 1e-12.
Outcome heisenberg_curvature() {
    MatC k = k_matrix(catalog::heisenberg3(2.0).bracket());
    MatC expected = MatC::Zero(3, 3);
    expected(2, 2) = 2.0;
    const double err = (k - expected).norm();
    return {err <= 1e-12, "|K - diag(0,0,2)| = " + num(err)};
}

// C02: bracket flow from s0 = 1 to t = 100 against |mu_t|^2 = 1/(1+t),
// max relative error <= 1e-6.
Outcome heisenberg_flow_closed_form() {
    IntegratorConfig cfg;
    cfg.t_end = 100.0;
    cfg.rel_tol = 1e-10;
    cfg.abs_tol = 1e-13;
    FlowTrace trace = integrate_bracket_flow(catalog::heisenberg3(1.0), cfg);
    double worst = 0.0;
    for (const auto& s : trace.samples)
        worst = std::max(worst, std::abs(s.diag.norm_sq - 1.0 / (1.0 + s.t)) * (1.0 + s.t));
    return {worst <= 1e-6,
            "max rel err vs 1/(1+t) over " + std::to_string(trace.samples.size()) +
                " samples = " + num(worst)};
}

// C03: finite-difference d/dt |mu|^2 vs -4|K|^2 on 50 random 2-step brackets,
// relative error <= 1e-6.
Outcome decay_law() {
    Rng rng(101);
    IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.rel_tol = 1e-12;
    cfg.abs_tol = 1e-15;
    const double h = 2e-3, t0 = 0.1;
    const std::vector<double> times{t0 - 2 * h, t0 - h, t0, t0 + h, t0 + 2 * h};
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Algebra alg(random_two_step_unit(rng, 6));
        FlowTrace t = integrate_bracket_flow_sampled(alg, times, cfg);
        auto y = [&](int i) { return t.samples[i].diag.norm_sq; };
        const double fd = (y(0) - 8 * y(1) + 8 * y(3) - y(4)) / (12 * h);
        const double analytic = -4.0 * k_norm_sq(t.samples[2].bracket);
        worst = std::max(worst, std::abs(fd - analytic) / std::abs(analytic));
    }
    return {worst <= 1e-6, "50 brackets, max rel err = " + num(worst)};
}

// C04: tr K = |mu|^2 / 2 on the catalog and 100 random brackets, 1e-12 rel.
Outcome trace_identity() {
    Rng rng(102);
    double worst = 0.0;
    auto check = [&](const Bracket& mu) {
        TraceChecks tc = trace_checks(mu);
        worst = std::max(worst,
                         std::abs(tc.tr_k - tc.half_norm_sq) / std::max(1e-300, tc.half_norm_sq));
    };
    for (const auto& e : catalog::nonabelian_roster()) check(e.algebra.bracket());
    for (int i = 0; i < 100; ++i) check(random_two_step(rng, 6));
    return {worst <= 1e-12, "max rel err = " + num(worst)};
}

// C05: moment-map identity on 100 random (mu, E), defect <= 1e-10 |mu|^2 |E|.
Outcome moment_map_identity() {
    Rng rng(103);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        Algebra alg(random_two_step(rng, 6));
        MatC e = random_center_supported(rng, alg);
        const double scale = alg.bracket().norm_sq() * std::max(e.norm(), 1e-300);
        worst = std::max(worst, std::abs(moment_defect(alg, e)) / scale);
    }
    return {worst <= 1e-10, "100 pairs, max |defect| / (|mu|^2 |E|) = " + num(worst)};
}

std::vector<Algebra> convergence_seeds() {
    Rng rng(104);
    std::vector<Algebra> out;
    for (int i = 0; i < 20; ++i) out.emplace_back(random_two_step_dim(rng, 6));
    return out;
}

std::vector<FlowTrace> run_convergence_suite() {
    IntegratorConfig cfg;
    cfg.t_end = 1e3;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-14;
    cfg.fixed_point_tol = 1e-11;
    std::vector<FlowTrace> traces;
    for (const Algebra& alg : convergence_seeds())
        traces.push_back(integrate_normalized_flow(alg, cfg));
    return traces;
}

// C06: 20 seeded dim-6 starts reach residual < 1e-8 before t_end = 1e3; each
// limit is a certified expanding soliton with Hermitian D and tr K = 1/2.
// (The trace is +1/2 under this library's PSD convention.)
Outcome convergence_to_solitons() {
    auto traces = run_convergence_suite();
    int converged = 0;
    double worst_res = 0.0, worst_tr = 0.0;
    bool all_certified = true;
    std::string why;
    for (auto& trace : traces) {
        worst_res = std::max(worst_res, trace.final_residual);
        if (trace.final_residual < 1e-8) ++converged;
        Algebra limit(trace.back().bracket);
        SolitonReport rep = soliton_solve(limit);
        const double k_norm = k_matrix(limit.bracket()).norm();
        if (rep.classification != "expanding" || !(rep.c < 0) || !rep.d_hermitian ||
            rep.soliton_residual > 1e-8 * k_norm || rep.derivation_residual > 1e-8 * k_norm) {
            all_certified = false;
            why = rep.classification;
        }
        worst_tr = std::max(worst_tr, std::abs(trace.back().diag.tr_k - 0.5));
    }
    const bool pass = converged == 20 && all_certified && worst_tr <= 1e-8;
    return {pass, std::to_string(converged) + "/20 converged, max residual = " + num(worst_res) +
                      ", max |trK - 1/2| = " + num(worst_tr) +
                      (all_certified ? ", all limits certified expanding" : ", certification failed: " + why)};
}

// C07: F non-increasing along every normalized trace (slack 1e-12); F is
// stationary exactly where the fixed-point residual is below tolerance.
Outcome f_monotone() {
    auto traces = run_convergence_suite();
    bool monotone = true;
    for (const auto& trace : traces) {
        for (std::size_t i = 0; i + 1 < trace.samples.size(); ++i)
            if (trace.samples[i + 1].diag.f_value >
                trace.samples[i].diag.f_value + 1e-12)
                monotone = false;
    }
    // stationarity <-> residual, on a step-capped trace with measurable drops
    Rng rng(105);
    Algebra alg(random_two_step_gens(rng, 6, 4));
    IntegratorConfig cfg;
    cfg.t_end = 1e3;
    cfg.max_step = 0.02;
    FlowTrace trace = integrate_normalized_flow(alg, cfg);
    bool iff = trace.termination == Termination::fixed_point;
    for (std::size_t i = 0; i + 1 < trace.samples.size(); ++i) {
        const auto& a = trace.samples[i];
        const auto& b = trace.samples[i + 1];
        const double drop = a.diag.f_value - b.diag.f_value;
        const double r2 = a.diag.fixed_point_residual * a.diag.fixed_point_residual;
        if (a.diag.fixed_point_residual >= 1e-6 && !(drop > 0)) iff = false;   // moving => decreasing
        if (r2 * (b.t - a.t) < 1e-16 && drop > 1e-11) iff = false;             // stalled => flat
    }
    // converged endpoint: flat at slack level
    const auto& tail = trace.samples;
    const double final_drop =
        tail.size() >= 2 ? tail[tail.size() - 2].diag.f_value - tail.back().diag.f_value : 0.0;
    if (std::abs(final_drop) > 1e-10) iff = false;
    return {monotone && iff,
            std::string(monotone ? "monotone with 1e-12 slack" : "monotonicity violated") +
                (iff ? "; stationary exactly at residual < tol" : "; stationarity mismatch")};
}

// C08: static residual > 0.1 for every non-abelian catalog algebra.
Outcome static_nonexistence() {
    double worst = 1e300;
    std::string argmin;
    for (const auto& e : catalog::nonabelian_roster()) {
        const double r = static_check(e.algebra.bracket()).residual;
        if (r < worst) {
            worst = r;
            argmin = e.name;
        }
    }
    return {worst > 0.1, "min static residual = " + num(worst) + " (" + argmin + ")"};
}

// C09: t |mu_t|^2 at t = 1e4 within 1% of 1/(4 F_bar) for heisenberg3 (-> 1)
// and free_two_step(3) (-> 3).
Outcome asymptotics() {
    IntegratorConfig cfg;
    cfg.t_end = 1e9;
    auto check = [&](const Algebra& alg, double expect) {
        CompanionTrace trace = integrate_norm_companion(alg, 1e4, cfg);
        const double target = 1.0 / (4.0 * trace.f_bar);
        return std::tuple{std::abs(trace.limit_ty - target) <= 0.01 * target, trace.limit_ty,
                          std::abs(target - expect) < 1e-6 * expect};
    };
    auto [ok1, ty1, t1ok] = check(catalog::heisenberg3(1.0), 1.0);
    auto [ok2, ty2, t2ok] = check(catalog::free_two_step(3), 3.0);
    return {ok1 && ok2 && t1ok && t2ok,
            "t*y(1e4): heisenberg3 = " + num(ty1) + " (target 1), free_two_step(3) = " + num(ty2) +
                " (target 3)"};
}

// C10: off-center block of K stays <= 1e-12 at all samples along the flow.
Outcome block_vanishing() {
    Rng rng(106);
    IntegratorConfig cfg;
    cfg.t_end = 10.0;
    double worst = 0.0;
    std::vector<Algebra> cases;
    cases.push_back(catalog::heisenberg3(1.0));
    cases.push_back(catalog::weighted_h5(2.0, 1.0));
    for (int i = 0; i < 5; ++i) cases.emplace_back(random_two_step_dim(rng, 6));
    for (const Algebra& alg : cases) {
        const MatC off = MatC::Identity(alg.dim(), alg.dim()) - alg.center_projector();
        FlowTrace trace = integrate_bracket_flow(alg, cfg);
        for (const auto& s : trace.samples) {
            MatC k = k_matrix(s.bracket);
            worst = std::max(worst, std::max((off * k).norm(), (k * off).norm()));
        }
    }
    return {worst <= 1e-12, "max off-center |K| entry block norm = " + num(worst)};
}

// C11: metric-flow K spectra (bracket-flow clock) match bracket-flow K
// spectra at 10 equal times, 1e-6.
Outcome metric_bracket_equivalence() {
    Algebra alg = catalog::heisenberg3(1.0);
    std::vector<double> times;
    for (int i = 1; i <= 10; ++i) times.push_back(0.45 * i);
    IntegratorConfig cfg;
    cfg.t_end = 10.0;
    cfg.rel_tol = 1e-11;
    cfg.abs_tol = 1e-14;
    MetricTrace metric = integrate_metric_flow_sampled(alg, MatC::Identity(3, 3), times, cfg, 2.0);
    FlowTrace bracket = integrate_bracket_flow_sampled(alg, times, cfg);
    double worst = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i)
        worst = std::max(worst, (metric.samples[i].spectrum - bracket.samples[i].diag.spectrum)
                                    .cwiseAbs()
                                    .maxCoeff());
    return {worst <= 1e-6, "10 sampled times, max spectrum gap = " + num(worst)};
}

// C12: Q~ from torsion equals K and S vanishes on every catalog algebra.
Outcome torsion_cross_check() {
    double worst_q = 0.0, worst_s = 0.0;
    for (const auto& e : catalog::nonabelian_roster()) {
        const Bracket& mu = e.algebra.bracket();
        MatC k = k_matrix(mu);
        worst_q = std::max(worst_q,
                           (q_from_torsion(torsion(mu)) - k).norm() / std::max(1.0, k.norm()));
        worst_s = std::max(worst_s, s_tensor(mu).norm());
    }
    return {worst_q <= 1e-12 && worst_s <= 1e-12,
            "max |Q~ - K| = " + num(worst_q) + ", max |S| = " + num(worst_s)};
}

// C13: limits from 10 random center transformations share one fingerprint,
// for heisenberg3(1) and weighted_h5(1,1).
Outcome orbit_uniqueness() {
    IntegratorConfig cfg;
    cfg.t_end = 1e3;
    UniquenessReport h3 = uniqueness_probe(catalog::heisenberg3(1.0), 10, 0, 107, cfg);
    UniquenessReport w5 = uniqueness_probe(catalog::weighted_h5(1.0, 1.0), 10, 0, 108, cfg);
    const bool pass = h3.single_fingerprint && w5.single_fingerprint &&
                      h3.max_orbit_delta <= 1e-8 && w5.max_orbit_delta <= 1e-8;
    return {pass, "max fingerprint delta: heisenberg3 = " + num(h3.max_orbit_delta) +
                      ", weighted_h5 = " + num(w5.max_orbit_delta)};
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {"C01", "Heisenberg curvature matrix", heisenberg_curvature},
        {"C02", "Heisenberg flow closed form to t = 100", heisenberg_flow_closed_form},
        {"C03", "decay law d|mu|^2/dt = -4|K|^2 (50 random)", decay_law},
        {"C04", "trace identity trK = |mu|^2/2", trace_identity},
        {"C05", "moment-map identity (100 random pairs)", moment_map_identity},
        {"C06", "normalized flow converges to certified solitons (20 seeds)", convergence_to_solitons},
        {"C07", "F monotone, stationary iff fixed point", f_monotone},
        {"C08", "no static metrics: residual > 0.1 on the catalog", static_nonexistence},
        {"C09", "t |mu|^2 -> 1/(4 F_bar) at t = 1e4", asymptotics},
        {"C10", "off-center block of K vanishes along the flow", block_vanishing},
        {"C11", "metric flow matches bracket flow at equal times", metric_bracket_equivalence},
        {"C12", "torsion route: Q~ = K and S = 0 on the catalog", torsion_cross_check},
        {"C13", "orbit-restricted uniqueness of flow limits", orbit_uniqueness},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s (%s)\n", out.pass ? "PASS" : "FAIL", c.id.c_str(),
                    c.description.c_str(), out.detail.c_str());
        if (!out.pass) ++failures;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures;
}
