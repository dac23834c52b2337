#pragma once

// Macro-step-size controllers. Each controller proposes Δt[n] from the trace
// recorded so far (latest row = the current communication point); the
// orchestrator may shorten the realized step to land exactly on an event or
// on the end of the run.
//
// The PI controller is driven by a per-bond energy residual: the power
// transmitted over a bond as sampled at the two ends of the last step. With
// zero-order-hold inputs the held power and the freshly sampled power
// disagree by exactly the extrapolation mismatch, which makes the residual a
// usable step-size error indicator.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "costep/core/trace.hpp"
#include "costep/core/types.hpp"

namespace costep {

class StepController {
public:
    virtual ~StepController() = default;

    /// Proposed macro step from the communication point in trace.back().
    virtual double next_dt(const Trace& trace) = 0;
};

// ---------------------------------------------------------------------------
// Fixed

class FixedStepController final : public StepController {
public:
    explicit FixedStepController(double dt);
    double next_dt(const Trace&) override { return dt_; }

private:
    double dt_;
};

// ---------------------------------------------------------------------------
// Scheduled

struct StepSchedule {
    struct Piece {
        double from_time = 0.0;
        double dt = 0.0;
    };
    std::vector<Piece> pieces;  // from_time strictly increasing

    void validate() const;

    /// Step size of the piece active at time t. Pieces take effect at the
    /// first communication point at or after their from_time.
    double dt_at(double t) const;
};

class ScheduledController final : public StepController {
public:
    explicit ScheduledController(StepSchedule schedule);
    double next_dt(const Trace& trace) override;

private:
    StepSchedule schedule_;
};

// ---------------------------------------------------------------------------
// Bang-bang

struct BangBangParams {
    PortRef monitor;            // a flow output
    double q_threshold = 0.5;   // switch level
    double dt_small = 0.001;
    double dt_large = 0.01;

    void validate() const;
};

/// dt_small while the monitored flow exceeds the threshold (strictly),
/// dt_large otherwise.
double bangbang_next(double monitor_value, const BangBangParams& params);

class BangBangController final : public StepController {
public:
    explicit BangBangController(BangBangParams params);
    double next_dt(const Trace& trace) override;

private:
    BangBangParams params_;
};

// ---------------------------------------------------------------------------
// Energy-residual PI

struct PiControllerParams {
    double dt0 = 0.1;         // initial step size
    double kp = 0.2;          // proportional gain
    double ki = 0.1;          // integral gain
    double dt_min = 1e-5;
    double dt_max = 0.1;
    double theta_min = 0.2;   // maximum relative step size reduction
    double theta_max = 1.2;   // maximum relative step size increase
    double abs_tol = 1e-6;    // δ
    double rel_tol = 1e-6;    // σ

    void validate() const;
};

/// Held-power vs sampled-power mismatch over the step ending at row n:
/// δE[n] = Δt[n−1]·(y_e[n−1]·y_f[n−1] − y_e[n]·y_f[n]). Requires n ≥ 1.
double ecco_residual(const PowerBond& bond, const Trace& trace, std::size_t n);

/// Normalization scale for a bond residual at row n:
/// Δt[n−1]·max(|y_e[n]·y_f[n]|, |y_e[n−1]·y_f[n−1]|).
double bond_power_scale(const PowerBond& bond, const Trace& trace, std::size_t n);

/// RMS of residuals, each normalized by abs_tol + rel_tol·scale.
double normalized_error(std::span<const double> residuals, std::span<const double> scales,
                        double abs_tol, double rel_tol);

/// One PI update: θ = eps^(−kI)·(eps_prev/eps)^(kP) with both errors floored
/// at 1e−12, θ clamped to [theta_min, theta_max], and the result clamped to
/// [dt_min, dt_max].
double pi_next(double eps_n, double eps_prev, double dt_prev, const PiControllerParams& params);

class PiController final : public StepController {
public:
    PiController(PiControllerParams params, std::vector<PowerBond> bonds);
    double next_dt(const Trace& trace) override;

private:
    PiControllerParams params_;
    std::vector<PowerBond> bonds_;
    double eps_prev_ = 1.0;
    double dt_prev_;
};

}  // namespace costep
