#ifndef HCF_FLOW_HPP
#define HCF_FLOW_HPP

//
// Bracket-flow integration.
//
//   unnormalized:  d/dt mu = -pi(K_mu) mu
//   normalized:    d/dt nu = -pi(K_nu + r_nu Id) nu,   r_nu = 2 |K_nu|^2
//   companion:     y = |mu|^2 alongside the normalized flow, carried in the
//                  unnormalized time variable via dy/dtau = -4 y |K_nu|^2,
//                  dt/dtau = 1/y  (quadratic homogeneity |K_mu| = |mu|^2 |K_nu|)
//   metric:        d/dt h = -time_scale * K(h) on a fixed bracket
//
// Both bracket flows confine to the linear subspace of tensors that vanish on
// center inputs and map into the center of the initial splitting: the
// velocity of any such state lies in the same subspace, exactly. The
// integrator therefore carries the state as the z x Lambda^2(z-perp) block W,
// in which the vector field collapses to
//
//     dW/dt = -K_z W,        K_z = (1/2) W W^H
//     dW/dtau = -(K_z - r) W  (normalized)
//
// and the ambient tensor state cannot drift off the 2-step Jacobi variety.
// (In ambient coordinates the variety is transversally unstable under the
// normalized equation: roundoff grows like e^{+tau}.) Samples reconstruct the
// full bracket in the caller's basis, and every accepted step re-checks the
// Jacobi/2-step residuals and the decay identity d|mu|^2/dt = -4|K|^2 through
// the full tensor machinery; drift beyond 1e-6 aborts, it is never projected
// away.
//
// The normalized flow is the gradient flow of F(nu) = |K_nu|^2/|nu|^4 up to
// reparameterization: dF/dtau = -2 |pi(K_nu + r_nu Id) nu|^2, so F decreases
// monotonically and stalls exactly at fixed points.
//

#include <utility>
#include <vector>

#include "hcf/algebra.hpp"
#include "hcf/bracket.hpp"
#include "hcf/curvature.hpp"
#include "hcf/ode.hpp"

namespace hcf {

struct Diagnostics {
    double norm_sq = 0.0;
    double f_value = 0.0;   // |K_nu|^2 at unit norm; 0 with zero_bracket flag when mu = 0
    double tr_k = 0.0;
    double fixed_point_residual = 0.0;
    VecR spectrum;          // eigenvalues of K_mu, ascending
    bool zero_bracket = false;
};

namespace detail {

inline Bracket bracket_velocity_raw(const Bracket& mu) {
    Bracket v = pi_action(k_matrix(mu), mu);
    v *= -1.0;
    return v;
}

inline Bracket normalized_velocity_raw(const Bracket& nu) {
    const int n = nu.dim();
    MatC k = k_matrix(nu);
    double r = 2.0 * k.squaredNorm();
    k += r * MatC::Identity(n, n);
    Bracket v = pi_action(k, nu);
    v *= -1.0;
    return v;
}

}  // namespace detail

inline double r_value(const Bracket& nu) { return 2.0 * k_norm_sq(nu); }

inline Bracket normalize(const Bracket& mu) {
    const double nrm = mu.norm();
    if (nrm == 0.0) throw ValidationError("zero_bracket", "cannot normalize the zero bracket");
    Bracket out = mu;
    out *= 1.0 / nrm;
    return out;
}

// |pi(K_nu + r_nu Id) nu| on the normalized bracket; scale-invariant, 0 for
// the zero bracket.
inline double fixed_point_residual(const Bracket& mu) {
    if (mu.norm() == 0.0) return 0.0;
    return detail::normalized_velocity_raw(normalize(mu)).norm();
}

inline Diagnostics diagnostics(const Bracket& mu) {
    Diagnostics d;
    d.norm_sq = mu.norm_sq();
    CurvatureOperator k = k_from_bracket(mu);
    d.tr_k = k.trace;
    d.spectrum = k.spectrum;
    if (d.norm_sq == 0.0) {
        d.zero_bracket = true;
        return d;
    }
    d.f_value = k.matrix.squaredNorm() / (d.norm_sq * d.norm_sq);
    d.fixed_point_residual = fixed_point_residual(mu);
    return d;
}

// -pi(K_mu) mu; requires a validated 2-step bracket. The velocity's image
// lies in the center and it vanishes on center inputs, so the flow stays on
// the 2-step variety.
inline Bracket bracket_velocity(const Algebra& alg) {
    if (!alg.is_two_step())
        throw ValidationError("not_two_step", "bracket flow requires a 2-step nilpotent algebra");
    return detail::bracket_velocity_raw(alg.bracket());
}

// -pi(K_nu + r_nu Id) nu; requires |nu| = 1 up to 1e-9. The result is
// <.,nu>-orthogonal to nu, which is what preserves the norm.
inline Bracket normalized_velocity(const Bracket& nu) {
    if (std::abs(nu.norm() - 1.0) > 1e-9)
        throw ValidationError("not_unit_norm", "normalized flow requires a unit-norm bracket");
    return detail::normalized_velocity_raw(nu);
}

enum class Termination { t_end, fixed_point, step_failure };

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::t_end: return "t_end";
        case Termination::fixed_point: return "fixed_point";
        case Termination::step_failure: return "step_failure";
    }
    return "?";
}

struct FlowSample {
    double t = 0.0;
    Bracket bracket;
    Diagnostics diag;
};

struct FlowTrace {
    std::vector<FlowSample> samples;
    Termination termination = Termination::t_end;
    double final_residual = 0.0;

    const FlowSample& back() const { return samples.back(); }
};

namespace detail {

inline void check_structure(const Bracket& mu) {
    const double jr = jacobi_residual(mu);
    const double nr = nilpotency_residual(mu);
    if (jr > 1e-6 || nr > 1e-6)
        throw NumericalError("structure_drift",
                             "flow left the 2-step Jacobi variety (jacobi " + std::to_string(jr) +
                                 ", 2-step " + std::to_string(nr) + ")");
}

// |mu|^2 must decay at exactly -4|K|^2 (moment-map identity applied to the
// velocity); checked against the ambient vector field at every accepted state.
inline void check_decay_identity(const Bracket& mu) {
    const Bracket vel = bracket_velocity_raw(mu);
    const double lhs = 2.0 * std::real(bracket_inner(vel, mu));
    const double k2 = k_norm_sq(mu);
    if (std::abs(lhs + 4.0 * k2) > 1e-9 * (1.0 + k2))
        throw NumericalError("structure_drift", "decay identity violated along the flow");
}

inline void require_two_step_entry(const Algebra& alg) {
    if (!alg.is_two_step())
        throw ValidationError("not_two_step", "flow entry points require a 2-step nilpotent algebra");
}

// Reduced flow state: the bracket as a map Lambda^2 z-perp -> z of the fixed
// initial splitting. Exactly flow-invariant; reconstruction returns to the
// caller's basis.
class ReducedState {
public:
    explicit ReducedState(const Algebra& alg)
        : q_(alg.complement_basis()), z_(alg.center_basis()), n_(alg.dim()) {
        const int qn = static_cast<int>(q_.cols());
        pair_count_ = qn * (qn - 1) / 2;
        // frame [q | z]; pairs of frame vectors with both legs in q carry W
        MatC frame(n_, n_);
        frame.leftCols(qn) = q_;
        frame.rightCols(z_.cols()) = z_;
        frame_ = frame;
        lambda2_adj_ = lambda2(frame.adjoint());
    }

    int rows() const { return static_cast<int>(z_.cols()); }
    int cols() const { return pair_count_; }
    Eigen::Index state_size() const { return static_cast<Eigen::Index>(rows()) * cols(); }

    MatC reduce(const Bracket& mu) const {
        const int qn = static_cast<int>(q_.cols());
        MatC w(rows(), std::max(pair_count_, 1));
        w.setZero();
        int p = 0;
        for (int a = 0; a < qn; ++a)
            for (int b = a + 1; b < qn; ++b, ++p)
                w.col(p) = z_.adjoint() * mu.eval(q_.col(a), q_.col(b));
        return w.leftCols(pair_count_);
    }

    Bracket reconstruct(const MatC& w) const {
        const int qn = static_cast<int>(q_.cols());
        Bracket lam(n_);  // bracket in the [q | z] frame
        int p = 0;
        for (int a = 0; a < qn; ++a)
            for (int b = a + 1; b < qn; ++b, ++p)
                lam.pair_matrix().col(lam.pair_index(a, b)).tail(z_.cols()) = w.col(p);
        return Bracket(n_, frame_ * lam.pair_matrix() * lambda2_adj_);
    }

    VecC pack(const MatC& w) const { return Eigen::Map<const VecC>(w.data(), w.size()); }
    MatC unpack(const VecC& s) const {
        return Eigen::Map<const MatC>(s.data(), rows(), cols());
    }

    static MatC kz(const MatC& w) { return curvature::pair_weight * (w * w.adjoint()); }

private:
    MatC q_, z_, frame_, lambda2_adj_;
    int n_ = 0;
    int pair_count_ = 0;
};

inline ReducedState make_reduced(const Algebra& alg) {
    require_two_step_entry(alg);
    ReducedState red(alg);
    // the splitting must represent the bracket to roundoff
    Bracket back = red.reconstruct(red.reduce(alg.bracket()));
    if ((back.pair_matrix() - alg.bracket().pair_matrix()).norm() >
        1e-8 * std::max(1.0, alg.bracket().norm()))
        throw ValidationError("not_two_step",
                              "bracket is not represented by its center splitting");
    return red;
}

}  // namespace detail

// Adaptive integration of d/dt mu = -pi(K_mu) mu up to cfg.t_end, recording
// every accepted step.
inline FlowTrace integrate_bracket_flow(const Algebra& alg, const IntegratorConfig& cfg) {
    detail::ReducedState red = detail::make_reduced(alg);
    auto f = [&red](double, const VecC& y) {
        MatC w = red.unpack(y);
        return red.pack((-detail::ReducedState::kz(w) * w).eval());
    };
    Rk45Stepper stepper(f, red.pack(red.reduce(alg.bracket())), 0.0, cfg);
    FlowTrace trace;
    trace.samples.push_back({0.0, alg.bracket(), diagnostics(alg.bracket())});
    while (stepper.t() < cfg.t_end) {
        stepper.step(cfg.t_end - stepper.t());
        Bracket mu = red.reconstruct(red.unpack(stepper.y()));
        detail::check_structure(mu);
        detail::check_decay_identity(mu);
        trace.samples.push_back({stepper.t(), mu, diagnostics(mu)});
    }
    trace.termination = Termination::t_end;
    trace.final_residual = trace.samples.back().diag.fixed_point_residual;
    return trace;
}

// Same flow, sampled at exactly the given (strictly increasing) times.
inline FlowTrace integrate_bracket_flow_sampled(const Algebra& alg, const std::vector<double>& times,
                                                const IntegratorConfig& cfg) {
    detail::ReducedState red = detail::make_reduced(alg);
    auto f = [&red](double, const VecC& y) {
        MatC w = red.unpack(y);
        return red.pack((-detail::ReducedState::kz(w) * w).eval());
    };
    Rk45Stepper stepper(f, red.pack(red.reduce(alg.bracket())), 0.0, cfg);
    FlowTrace trace;
    for (double target : times) {
        stepper.step_to(target);
        Bracket mu = red.reconstruct(red.unpack(stepper.y()));
        detail::check_structure(mu);
        trace.samples.push_back({target, mu, diagnostics(mu)});
    }
    trace.termination = Termination::t_end;
    if (!trace.samples.empty())
        trace.final_residual = trace.samples.back().diag.fixed_point_residual;
    return trace;
}

// Normalized flow in its own time variable, renormalized to unit norm after
// every accepted step (the velocity is norm-preserving, so the per-step drift
// is at integration-error level). Stops at the first sample whose
// fixed-point residual drops below cfg.fixed_point_tol; reaching t_end is
// reported through the termination reason and final residual.
inline FlowTrace integrate_normalized_flow(const Algebra& alg, const IntegratorConfig& cfg) {
    if (alg.bracket().norm() == 0.0)
        throw ValidationError("zero_bracket", "normalized flow requires a nonzero bracket");
    detail::ReducedState red = detail::make_reduced(alg);
    Bracket nu0 = normalize(alg.bracket());
    auto f = [&red](double, const VecC& y) {
        MatC w = red.unpack(y);
        MatC kz = detail::ReducedState::kz(w);
        const double r = 2.0 * kz.squaredNorm();
        return red.pack(((r * w - kz * w)).eval());
    };
    Rk45Stepper stepper(f, red.pack(red.reduce(nu0)), 0.0, cfg);
    FlowTrace trace;
    trace.samples.push_back({0.0, nu0, diagnostics(nu0)});
    trace.final_residual = trace.samples.back().diag.fixed_point_residual;
    if (trace.final_residual < cfg.fixed_point_tol) {
        trace.termination = Termination::fixed_point;
        return trace;
    }
    while (stepper.t() < cfg.t_end) {
        stepper.step(cfg.t_end - stepper.t());
        stepper.y_mutable() /= stepper.y().norm();
        Bracket nu = red.reconstruct(red.unpack(stepper.y()));
        detail::check_structure(nu);
        trace.samples.push_back({stepper.t(), nu, diagnostics(nu)});
        trace.final_residual = trace.samples.back().diag.fixed_point_residual;
        if (trace.final_residual < cfg.fixed_point_tol) {
            trace.termination = Termination::fixed_point;
            return trace;
        }
    }
    trace.termination = Termination::t_end;
    return trace;
}

struct CompanionSample {
    double tau = 0.0;  // normalized-flow time
    double t = 0.0;    // unnormalized time
    double y = 0.0;    // |mu|^2(t)
    Diagnostics diag;  // of the normalized bracket
};

struct CompanionTrace {
    std::vector<CompanionSample> samples;
    std::vector<Bracket> normalized_brackets;  // per sample
    double limit_ty = 0.0;  // t * |mu_t|^2 at the final sample
    double f_bar = 0.0;     // |K_nu|^2 at the final sample
    Termination termination = Termination::t_end;
};

// Integrates the normalized flow together with the norm along the
// unnormalized clock, stopping once t reaches t_target (the final step is
// bisected to land on the target).
inline CompanionTrace integrate_norm_companion(const Algebra& alg, double t_target,
                                               const IntegratorConfig& cfg) {
    if (alg.bracket().norm() == 0.0)
        throw ValidationError("zero_bracket", "norm companion requires a nonzero bracket");
    detail::ReducedState red = detail::make_reduced(alg);
    const Eigen::Index nb = red.state_size();
    Bracket nu0 = normalize(alg.bracket());

    VecC y0(nb + 2);
    y0.head(nb) = red.pack(red.reduce(nu0));
    y0(nb) = alg.bracket().norm_sq();  // y
    y0(nb + 1) = 0.0;                  // t

    auto f = [&red, nb](double, const VecC& s) {
        MatC w = red.unpack(s.head(nb));
        MatC kz = detail::ReducedState::kz(w);
        const double k2 = kz.squaredNorm();
        const double y = std::real(s(nb));
        VecC out(nb + 2);
        out.head(nb) = red.pack(((2.0 * k2) * w - kz * w).eval());
        out(nb) = -4.0 * y * k2;
        out(nb + 1) = 1.0 / y;
        return out;
    };

    Rk45Stepper stepper(f, y0, 0.0, cfg);
    CompanionTrace trace;
    auto record = [&](const Rk45Stepper& s) {
        Bracket nu = red.reconstruct(red.unpack(s.y().head(nb)));
        CompanionSample sample;
        sample.tau = s.t();
        sample.t = std::real(s.y()(nb + 1));
        sample.y = std::real(s.y()(nb));
        sample.diag = diagnostics(nu);
        trace.samples.push_back(std::move(sample));
        trace.normalized_brackets.push_back(std::move(nu));
    };
    record(stepper);

    const double land_tol = 1e-9 * std::max(1.0, t_target);
    while (std::real(stepper.y()(nb + 1)) < t_target - land_tol) {
        Rk45Stepper before = stepper;
        stepper.step();
        if (std::real(stepper.y()(nb + 1)) > t_target + land_tol) {
            // bisect the final step length to land on t_target
            double lo = 0.0, hi = stepper.t() - before.t();
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                Rk45Stepper probe = before;
                probe.step_to(before.t() + mid);
                const double reached = std::real(probe.y()(nb + 1));
                stepper = probe;
                if (std::abs(reached - t_target) <= land_tol) break;
                (reached < t_target ? lo : hi) = mid;
                if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
            }
        }
        double nrm = stepper.y().head(nb).norm();
        stepper.y_mutable().head(nb) /= nrm;
        record(stepper);
    }

    const auto& last = trace.samples.back();
    trace.limit_ty = last.t * last.y;
    trace.f_bar = last.diag.f_value;
    trace.termination = Termination::t_end;
    return trace;
}

struct MetricSample {
    double t = 0.0;
    MatC h;
    VecR spectrum;     // eigenvalues of the K-operator relative to h, ascending
    Diagnostics diag;  // of the h-unitary-frame bracket
};

struct MetricTrace {
    std::vector<MetricSample> samples;
    Termination termination = Termination::t_end;
};

namespace detail {

struct MetricOde {
    const Bracket* mu;
    int n;
    double time_scale;

    MatC unpack(const VecC& y) const {
        MatC h = Eigen::Map<const MatC>(y.data(), n, n);
        return (0.5 * (h + h.adjoint())).eval();  // stages are Hermitian up to roundoff
    }
    VecC operator()(double, const VecC& y) const {
        MatC h = unpack(y);
        MatC dh = -time_scale * (h * k_from_metric(*mu, h).op);
        return VecC(Eigen::Map<const VecC>(dh.data(), dh.size()));
    }
};

}  // namespace detail

// d/dt h = -time_scale * K(h) on the fixed bracket, as the evolution of the
// Gram matrix: dH = -time_scale * (H K_op). time_scale 1 is the curvature
// flow's own clock; time_scale 2 matches the bracket flow's clock, under
// which equal-time K-spectra of the two flows agree.
inline MetricTrace integrate_metric_flow(const Algebra& alg, const MatC& h0,
                                         const IntegratorConfig& cfg, double time_scale = 1.0) {
    detail::require_two_step_entry(alg);
    require_positive_definite(h0);
    detail::MetricOde ode{&alg.bracket(), alg.dim(), time_scale};
    VecC y0 = Eigen::Map<const VecC>(h0.data(), h0.size());
    Rk45Stepper stepper(ode, y0, 0.0, cfg);
    MetricTrace trace;
    auto record = [&](double t, const MatC& h) {
        MetricCurvature mc = k_from_metric(*ode.mu, h);
        trace.samples.push_back({t, h, mc.spectrum, diagnostics(mc.unitary_frame_bracket)});
    };
    record(0.0, h0);
    while (stepper.t() < cfg.t_end) {
        stepper.step(cfg.t_end - stepper.t());
        MatC h = ode.unpack(stepper.y());
        require_positive_definite(h);  // failure here is a bug signal, not expected behavior
        record(stepper.t(), h);
    }
    trace.termination = Termination::t_end;
    return trace;
}

// Metric flow sampled at exact times.
inline MetricTrace integrate_metric_flow_sampled(const Algebra& alg, const MatC& h0,
                                                 const std::vector<double>& times,
                                                 const IntegratorConfig& cfg,
                                                 double time_scale = 1.0) {
    detail::require_two_step_entry(alg);
    require_positive_definite(h0);
    detail::MetricOde ode{&alg.bracket(), alg.dim(), time_scale};
    VecC y0 = Eigen::Map<const VecC>(h0.data(), h0.size());
    Rk45Stepper stepper(ode, y0, 0.0, cfg);
    MetricTrace trace;
    for (double target : times) {
        stepper.step_to(target);
        MatC h = ode.unpack(stepper.y());
        require_positive_definite(h);
        MetricCurvature mc = k_from_metric(*ode.mu, h);
        trace.samples.push_back({target, h, mc.spectrum, diagnostics(mc.unitary_frame_bracket)});
    }
    return trace;
}

}  // namespace hcf

#endif
