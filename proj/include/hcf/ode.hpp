#ifndef HCF_ODE_HPP
#define HCF_ODE_HPP

//
// Embedded Dormand-Prince 5(4) with PI step-size control, on complex state
// vectors. The flows here are polynomial (cubic) in the state and non-stiff
// after normalization, so a dense explicit pair with error control is enough.
//
// The stepper exposes single accepted steps so callers can renormalize the
// state, run health checks and record samples between steps.
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "hcf/types.hpp"

namespace hcf {

struct IntegratorConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 = choose from the first derivative
    double max_step = std::numeric_limits<double>::infinity();
    double t_end = 10.0;
    long max_steps = 2'000'000;
    double fixed_point_tol = 1e-10;

    void check() const {
        if (!(rel_tol > 0) || !(abs_tol > 0))
            throw ValidationError("bad_parameter", "integrator tolerances must be positive");
        if (!(t_end > 0))
            throw ValidationError("bad_parameter", "t_end must be positive");
    }
};

class Rk45Stepper {
public:
    using Deriv = std::function<VecC(double, const VecC&)>;

    Rk45Stepper(Deriv f, VecC y0, double t0, const IntegratorConfig& cfg)
        : f_(std::move(f)), y_(std::move(y0)), t_(t0), cfg_(cfg) {
        cfg_.check();
        h_ = cfg_.initial_step > 0 ? cfg_.initial_step : suggest_initial_step();
        h_ = std::min(h_, cfg_.max_step);
    }

    double t() const { return t_; }
    const VecC& y() const { return y_; }
    VecC& y_mutable() { return y_; }  // for per-step renormalization
    long steps_taken() const { return n_accepted_; }
    long steps_rejected() const { return n_rejected_; }
    double current_step() const { return h_; }

    // One accepted adaptive step, at most h_cap long. Throws step_failure on
    // step-size underflow or step-count exhaustion.
    void step(double h_cap = std::numeric_limits<double>::infinity()) {
        double h = std::min({h_, h_cap, cfg_.max_step});
        for (;;) {
            if (n_accepted_ + n_rejected_ >= cfg_.max_steps)
                throw NumericalError("step_failure", "integrator exceeded max_steps");
            if (!(h > step_floor()))
                throw NumericalError("step_failure", "step size underflow at t = " + std::to_string(t_));
            double err = try_step(h);
            if (err <= 1.0) {
                t_ += h;
                y_ = y_high_;
                ++n_accepted_;
                double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5.0) *
                             std::pow(err_prev_, 0.4 / 5.0);
                err_prev_ = std::max(err, 1e-10);
                h_ = h * std::clamp(fac, 0.2, 5.0);
                h_ = std::min(h_, cfg_.max_step);
                return;
            }
            ++n_rejected_;
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        }
    }

    // Advance to exactly t_target (a sequence of accepted steps, the last one
    // clipped to land on the target).
    void step_to(double t_target) {
        while (t_ < t_target) {
            double cap = t_target - t_;
            if (cap <= 1e-14 * std::max(1.0, std::abs(t_target))) {
                t_ = t_target;
                return;
            }
            step(cap);
        }
    }

    VecC derivative() const { return f_(t_, y_); }

private:
    double step_floor() const { return 1e4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_)); }

    double suggest_initial_step() const {
        VecC f0 = f_(t_, y_);
        double d0 = weighted_norm(y_, y_);
        double d1 = weighted_norm(f0, y_);
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        return std::max(h, 1e-10);
    }

    double weighted_norm(const VecC& v, const VecC& scale_ref) const {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            double sc = cfg_.abs_tol + cfg_.rel_tol * std::abs(scale_ref(i));
            double q = std::abs(v(i)) / sc;
            acc += q * q;
        }
        return std::sqrt(acc / std::max<Eigen::Index>(1, v.size()));
    }

    // Returns the scaled error estimate for a trial step of size h; fills
    // y_high_ with the 5th-order result.
    double try_step(double h) {
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

        k1_ = f_(t_, y_);
        k2_ = f_(t_ + c2 * h, y_ + h * (a21 * k1_));
        k3_ = f_(t_ + c3 * h, y_ + h * (a31 * k1_ + a32 * k2_));
        k4_ = f_(t_ + c4 * h, y_ + h * (a41 * k1_ + a42 * k2_ + a43 * k3_));
        k5_ = f_(t_ + c5 * h, y_ + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_));
        k6_ = f_(t_ + h, y_ + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_));
        y_high_ = y_ + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        k7_ = f_(t_ + h, y_high_);
        VecC err = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
        // componentwise scale against the larger of old/new state
        double acc = 0.0;
        for (Eigen::Index i = 0; i < err.size(); ++i) {
            double sc = cfg_.abs_tol +
                        cfg_.rel_tol * std::max(std::abs(y_(i)), std::abs(y_high_(i)));
            double q = std::abs(err(i)) / sc;
            acc += q * q;
        }
        return std::sqrt(acc / std::max<Eigen::Index>(1, err.size()));
    }

    Deriv f_;
    VecC y_;
    double t_ = 0.0;
    IntegratorConfig cfg_;
    double h_ = 1e-3;
    double err_prev_ = 1.0;
    long n_accepted_ = 0;
    long n_rejected_ = 0;
    VecC k1_, k2_, k3_, k4_, k5_, k6_, k7_, y_high_;
};

}  // namespace hcf

#endif
