#include "costep/stepctl/controllers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace costep {

namespace {

constexpr double kEpsFloor = 1e-12;
constexpr double kTimeSlack = 1e-12;

void require_positive(double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw ArgumentError(std::string(what) + " must be positive");
    }
}

}  // namespace

FixedStepController::FixedStepController(double dt) : dt_(dt) {
    require_positive(dt, "fixed step size");
}

void StepSchedule::validate() const {
    if (pieces.empty()) throw ArgumentError("step schedule must have at least one piece");
    double prev_from = -std::numeric_limits<double>::infinity();
    for (const Piece& piece : pieces) {
        if (!std::isfinite(piece.from_time)) {
            throw ArgumentError("schedule piece start time must be finite");
        }
        require_positive(piece.dt, "schedule piece step size");
        if (!(piece.from_time > prev_from)) {
            throw ArgumentError("schedule piece start times must be strictly increasing");
        }
        prev_from = piece.from_time;
    }
}

double StepSchedule::dt_at(double t) const {
    const double slack = kTimeSlack * std::max(1.0, std::abs(t));
    // First piece strictly after t+slack; the active piece precedes it.
    const auto it = std::upper_bound(
        pieces.begin(), pieces.end(), t + slack,
        [](double value, const Piece& piece) { return value < piece.from_time; });
    if (it == pieces.begin()) {
        throw ControllerError("step schedule does not cover t = " + std::to_string(t));
    }
    return std::prev(it)->dt;
}

ScheduledController::ScheduledController(StepSchedule schedule)
    : schedule_(std::move(schedule)) {
    schedule_.validate();
}

double ScheduledController::next_dt(const Trace& trace) {
    return schedule_.dt_at(trace.back().t);
}

void BangBangParams::validate() const {
    require_positive(dt_small, "dt_small");
    require_positive(dt_large, "dt_large");
    if (!(dt_small < dt_large)) {
        throw ArgumentError("bang-bang requires dt_small < dt_large");
    }
    if (!std::isfinite(q_threshold)) throw ArgumentError("flow threshold must be finite");
    if (monitor.direction != PortDirection::output || monitor.role != PortRole::flow) {
        throw ArgumentError("bang-bang monitor must be a flow output");
    }
}

double bangbang_next(double monitor_value, const BangBangParams& params) {
    return monitor_value > params.q_threshold ? params.dt_small : params.dt_large;
}

BangBangController::BangBangController(BangBangParams params) : params_(std::move(params)) {
    params_.validate();
}

double BangBangController::next_dt(const Trace& trace) {
    const double q = trace.output(trace.row_count() - 1, params_.monitor);
    return bangbang_next(q, params_);
}

void PiControllerParams::validate() const {
    require_positive(dt0, "initial step size");
    require_positive(dt_min, "dt_min");
    require_positive(dt_max, "dt_max");
    require_positive(abs_tol, "absolute tolerance");
    require_positive(rel_tol, "relative tolerance");
    if (!(dt_min <= dt0 && dt0 <= dt_max)) {
        throw ArgumentError("PI controller requires dt_min <= dt0 <= dt_max");
    }
    if (!std::isfinite(theta_max) || !(theta_min > 0.0 && theta_min < 1.0 && theta_max > 1.0)) {
        throw ArgumentError("PI controller requires 0 < theta_min < 1 < theta_max");
    }
    if (!std::isfinite(kp) || !std::isfinite(ki)) {
        throw ArgumentError("PI gains must be finite");
    }
}

double ecco_residual(const PowerBond& bond, const Trace& trace, std::size_t n) {
    if (n == 0) {
        throw ArgumentError("energy residual needs a completed step (n >= 1)");
    }
    const double power_prev =
        trace.output(n - 1, bond.effort.source) * trace.output(n - 1, bond.flow.source);
    const double power_now =
        trace.output(n, bond.effort.source) * trace.output(n, bond.flow.source);
    return trace.dt(n - 1) * (power_prev - power_now);
}

double bond_power_scale(const PowerBond& bond, const Trace& trace, std::size_t n) {
    if (n == 0) {
        throw ArgumentError("power scale needs a completed step (n >= 1)");
    }
    const double power_prev =
        trace.output(n - 1, bond.effort.source) * trace.output(n - 1, bond.flow.source);
    const double power_now =
        trace.output(n, bond.effort.source) * trace.output(n, bond.flow.source);
    return trace.dt(n - 1) * std::max(std::abs(power_prev), std::abs(power_now));
}

double normalized_error(std::span<const double> residuals, std::span<const double> scales,
                        double abs_tol, double rel_tol) {
    if (residuals.empty() || residuals.size() != scales.size()) {
        throw ArgumentError("normalized_error needs matching, non-empty residual and scale lists");
    }
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const double w = residuals[i] / (abs_tol + rel_tol * scales[i]);
        sum_sq += w * w;
    }
    return std::sqrt(sum_sq / static_cast<double>(residuals.size()));
}

double pi_next(double eps_n, double eps_prev, double dt_prev, const PiControllerParams& params) {
    const double eps = std::max(eps_n, kEpsFloor);
    const double prev = std::max(eps_prev, kEpsFloor);
    double theta = std::pow(eps, -params.ki) * std::pow(prev / eps, params.kp);
    theta = std::clamp(theta, params.theta_min, params.theta_max);
    return std::clamp(theta * dt_prev, params.dt_min, params.dt_max);
}

PiController::PiController(PiControllerParams params, std::vector<PowerBond> bonds)
    : params_(params), bonds_(std::move(bonds)), dt_prev_(params.dt0) {
    params_.validate();
    if (bonds_.empty()) {
        throw ArgumentError("PI controller needs at least one power bond");
    }
}

double PiController::next_dt(const Trace& trace) {
    if (trace.row_count() < 2) {
        dt_prev_ = params_.dt0;
        return dt_prev_;
    }
    const std::size_t n = trace.row_count() - 1;
    std::vector<double> residuals(bonds_.size());
    std::vector<double> scales(bonds_.size());
    for (std::size_t i = 0; i < bonds_.size(); ++i) {
        residuals[i] = ecco_residual(bonds_[i], trace, n);
        scales[i] = bond_power_scale(bonds_[i], trace, n);
    }
    const double eps = normalized_error(residuals, scales, params_.abs_tol, params_.rel_tol);
    const double dt = pi_next(eps, eps_prev_, dt_prev_, params_);
    eps_prev_ = eps;
    dt_prev_ = dt;
    return dt;
}

}  // namespace costep
