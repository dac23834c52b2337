#pragma once

// Discrepancy analysis: measures the gap between duplicated integral states
// from a trace and predicts it with closed-form expressions.
//
// For a flow q sampled at communication points and held by zero-order hold
// on the receiving side, the accumulated discrepancy between the ZOH
// integral and the exact integral is
//
//   Δx[n] = Δx[0] − Σ_{i<n} Σ_{k≥1} q^{(k)}(t_i)·Δt_i^{k+1}/(k+1)!
//
// (exact for polynomial q, where the series is finite), with the
// leading-order form
//
//   Δx[n] ≈ −½ Σ_{i<n} (q[i+1] − q[i])·Δt_i
//         = ½ q[0]Δt[0] + ½ Σ_{i=1}^{n−1} q[i](Δt[i] − Δt[i−1]) − ½ q[n]Δt[n−1],
//
// whose regrouped right-hand side exposes the step-size-change
// contributions. All series are accumulated with compensated summation.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "costep/core/trace.hpp"
#include "costep/core/types.hpp"
#include "costep/units/flow.hpp"

namespace costep {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct FlowSample {
    double t = 0.0;
    double q = 0.0;
};

/// Flow samples q[n] = q(t[n]) together with the macro step schedule.
struct FlowTrace {
    std::vector<FlowSample> samples;
    std::vector<double> schedule;  // Δt[n] = t[n+1] − t[n]; size = samples − 1

    static FlowTrace from_samples(std::vector<FlowSample> samples);
    void validate() const;
};

/// Samples of one output port across a trace, with the realized schedule.
FlowTrace flow_from_trace(const Trace& trace, const std::string& unit_id,
                          const std::string& port);

/// Leading-order predicted Δx at every communication point (Δx[0] = 0).
std::vector<double> predict_leading(const FlowTrace& flow);

/// Summation-by-parts form of predict_leading; algebraically identical.
std::vector<double> predict_regrouped(const FlowTrace& flow);

/// predict_leading with the sample-difference terms skipped on intervals
/// that end at one of `break_times`. Used when the flow has known exogenous
/// discontinuities (state-injection events): the jump across such a point is
/// not an extrapolation artifact, and the sample series is only piecewise
/// smooth.
std::vector<double> predict_leading_between_breaks(const FlowTrace& flow,
                                                   std::span<const double> break_times);

/// Exact predicted Δx for a polynomial flow over the given communication
/// points (the Taylor series truncates at the polynomial degree).
std::vector<double> predict_exact_sum(const Polynomial& q, std::span<const double> times,
                                      double dx0);

/// Asymptotic discrepancy of the oscillator after a single step-size change:
/// ½·v2[0]·Δt₁ + ½·v2[K]·(Δt₂ − Δt₁).
double oscillator_single_change_limit(double v2_0, double v2_K, double dt1, double dt2);

struct DiscrepancyPoint {
    double t = 0.0;
    double measured = 0.0;
    double predicted_leading = 0.0;
    std::optional<double> predicted_exact;
};

struct DiscrepancySeries {
    std::vector<DiscrepancyPoint> points;

    const DiscrepancyPoint& back() const;
};

/// Oscillator: measured Δx = x1 − x2 from states S1.x1 and S2.x2; the exact
/// prediction −(1/2m)·Σ u2[i]·Δt[i]² from the recorded force inputs; the
/// leading-order prediction from the sampled velocity flow S2.y2.
DiscrepancySeries measure_oscillator_discrepancy(const Trace& trace, double m = 1.0);

/// Reservoirs: measured ΔV = V_total(t) − V1 − V2, where V_total steps by
/// the injected amounts at their event times; the leading-order prediction
/// from the sampled flow S2.y2, piecewise between injections.
DiscrepancySeries measure_reservoir_discrepancy(const Trace& trace,
                                                const std::vector<Event>& injections);

/// General flow: measured Δx = x1 − x2 from states S1.x1 and S2.x2; exact
/// prediction from the polynomial; leading-order prediction from S2.y2.
DiscrepancySeries measure_flow_discrepancy(const Trace& trace, const Polynomial& q);

struct OscillatorState {
    double x = 0.0;
    double v = 0.0;
};

/// Closed-form solution of m·ẍ + c·ẋ + k·x = 0 for the underdamped case,
/// with initial conditions x(0) = x0, ẋ(0) = v0.
OscillatorState reference_oscillator(double t, double m = 1.0, double c = 1.0, double k = 1.0,
                                     double x0 = 1.0, double v0 = 0.0);

}  // namespace costep
