#include "costep/analysis/analysis.hpp"

#include <algorithm>

namespace costep {

namespace {

constexpr double kBreakSlack = 1e-9;

bool near_break(double t, std::span<const double> break_times) {
    return std::any_of(break_times.begin(), break_times.end(), [&](double b) {
        return std::abs(t - b) <= kBreakSlack * std::max(1.0, std::abs(b));
    });
}

}  // namespace

FlowTrace FlowTrace::from_samples(std::vector<FlowSample> samples) {
    FlowTrace flow;
    flow.samples = std::move(samples);
    if (!flow.samples.empty()) {
        flow.schedule.reserve(flow.samples.size() - 1);
        for (std::size_t i = 0; i + 1 < flow.samples.size(); ++i) {
            flow.schedule.push_back(flow.samples[i + 1].t - flow.samples[i].t);
        }
    }
    flow.validate();
    return flow;
}

void FlowTrace::validate() const {
    if (samples.empty()) throw ArgumentError("flow trace has no samples");
    if (schedule.size() + 1 != samples.size()) {
        throw ArgumentError("flow trace schedule length does not match its samples");
    }
    for (const FlowSample& sample : samples) {
        if (!std::isfinite(sample.q) || !std::isfinite(sample.t)) {
            throw ArgumentError("flow trace samples must be finite");
        }
    }
    for (double dt : schedule) {
        if (!std::isfinite(dt) || dt <= 0.0) {
            throw ArgumentError("flow trace step sizes must be positive");
        }
    }
}

FlowTrace flow_from_trace(const Trace& trace, const std::string& unit_id,
                          const std::string& port) {
    FlowTrace flow;
    flow.samples.reserve(trace.row_count());
    for (std::size_t n = 0; n < trace.row_count(); ++n) {
        flow.samples.push_back(FlowSample{trace.t(n), trace.output(n, unit_id, port)});
    }
    flow.schedule.reserve(trace.step_count());
    for (std::size_t n = 0; n < trace.step_count(); ++n) {
        flow.schedule.push_back(trace.dt(n));
    }
    flow.validate();
    return flow;
}

std::vector<double> predict_leading(const FlowTrace& flow) {
    flow.validate();
    std::vector<double> series(flow.samples.size(), 0.0);
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < flow.samples.size(); ++i) {
        acc.add(-0.5 * (flow.samples[i + 1].q - flow.samples[i].q) * flow.schedule[i]);
        series[i + 1] = acc.value();
    }
    return series;
}

std::vector<double> predict_regrouped(const FlowTrace& flow) {
    flow.validate();
    const auto& q = flow.samples;
    const auto& h = flow.schedule;
    std::vector<double> series(q.size(), 0.0);
    CompensatedSum middle;  // Σ_{i=1}^{n-1} q[i]·(Δt[i] − Δt[i−1])
    for (std::size_t n = 1; n < q.size(); ++n) {
        if (n >= 2) {
            middle.add(q[n - 1].q * (h[n - 1] - h[n - 2]));
        }
        series[n] =
            0.5 * q[0].q * h[0] + 0.5 * middle.value() - 0.5 * q[n].q * h[n - 1];
    }
    return series;
}

std::vector<double> predict_leading_between_breaks(const FlowTrace& flow,
                                                   std::span<const double> break_times) {
    flow.validate();
    std::vector<double> series(flow.samples.size(), 0.0);
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < flow.samples.size(); ++i) {
        if (!near_break(flow.samples[i + 1].t, break_times)) {
            acc.add(-0.5 * (flow.samples[i + 1].q - flow.samples[i].q) * flow.schedule[i]);
        }
        series[i + 1] = acc.value();
    }
    return series;
}

std::vector<double> predict_exact_sum(const Polynomial& q, std::span<const double> times,
                                      double dx0) {
    if (times.empty()) throw ArgumentError("predict_exact_sum needs at least one time point");

    std::vector<Polynomial> derivatives;  // q^{(k)} for k = 1..degree
    Polynomial d = q.derivative();
    for (std::size_t k = 1; k <= q.degree(); ++k) {
        derivatives.push_back(d);
        d = d.derivative();
    }
    std::vector<double> inv_factorial(derivatives.size() + 2, 1.0);  // 1/(k+1)!
    for (std::size_t k = 1; k < inv_factorial.size(); ++k) {
        inv_factorial[k] = inv_factorial[k - 1] / static_cast<double>(k);
    }

    std::vector<double> series(times.size(), dx0);
    CompensatedSum acc;
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double h = times[i + 1] - times[i];
        if (!(h > 0.0)) throw ArgumentError("time points must be strictly increasing");
        double power = h;  // h^{k+1} as k runs
        double term = 0.0;
        for (std::size_t k = 1; k <= derivatives.size(); ++k) {
            power *= h;
            term += derivatives[k - 1](times[i]) * power * inv_factorial[k + 1];
        }
        acc.add(-term);
        series[i + 1] = dx0 + acc.value();
    }
    return series;
}

double oscillator_single_change_limit(double v2_0, double v2_K, double dt1, double dt2) {
    return 0.5 * v2_0 * dt1 + 0.5 * v2_K * (dt2 - dt1);
}

const DiscrepancyPoint& DiscrepancySeries::back() const {
    if (points.empty()) throw ArgumentError("discrepancy series is empty");
    return points.back();
}

DiscrepancySeries measure_oscillator_discrepancy(const Trace& trace, double m) {
    if (!(m > 0.0)) throw ArgumentError("mass must be positive");
    const FlowTrace flow = flow_from_trace(trace, "S2", "y2");
    const std::vector<double> leading = predict_leading(flow);

    DiscrepancySeries series;
    series.points.resize(trace.row_count());
    CompensatedSum force_sum;  // Σ u2[i]·Δt[i]²
    for (std::size_t n = 0; n < trace.row_count(); ++n) {
        DiscrepancyPoint& point = series.points[n];
        point.t = trace.t(n);
        point.measured = trace.state(n, "S1", "x1") - trace.state(n, "S2", "x2");
        point.predicted_leading = leading[n];
        point.predicted_exact = -force_sum.value() / (2.0 * m);
        if (n < trace.step_count()) {
            const double dt = trace.dt(n);
            force_sum.add(trace.input(n, "S2", "u2") * dt * dt);
        }
    }
    return series;
}

DiscrepancySeries measure_reservoir_discrepancy(const Trace& trace,
                                                const std::vector<Event>& injections) {
    const FlowTrace flow = flow_from_trace(trace, "S2", "y2");
    std::vector<double> break_times;
    break_times.reserve(injections.size());
    for (const Event& event : injections) break_times.push_back(event.time);
    const std::vector<double> leading = predict_leading_between_breaks(flow, break_times);

    const double v_total_0 = trace.state(0, "S1", "V1") + trace.state(0, "S2", "V2");

    DiscrepancySeries series;
    series.points.resize(trace.row_count());
    for (std::size_t n = 0; n < trace.row_count(); ++n) {
        DiscrepancyPoint& point = series.points[n];
        point.t = trace.t(n);
        double v_total = v_total_0;
        for (const Event& event : injections) {
            if (event.time <= point.t + kBreakSlack * std::max(1.0, std::abs(event.time))) {
                v_total += event.amount;
            }
        }
        point.measured = v_total - trace.state(n, "S1", "V1") - trace.state(n, "S2", "V2");
        point.predicted_leading = leading[n];
    }
    return series;
}

DiscrepancySeries measure_flow_discrepancy(const Trace& trace, const Polynomial& q) {
    const FlowTrace flow = flow_from_trace(trace, "S2", "y2");
    const std::vector<double> leading = predict_leading(flow);

    std::vector<double> times;
    times.reserve(trace.row_count());
    for (std::size_t n = 0; n < trace.row_count(); ++n) times.push_back(trace.t(n));
    const double dx0 = trace.state(0, "S1", "x1") - trace.state(0, "S2", "x2");
    const std::vector<double> exact = predict_exact_sum(q, times, dx0);

    DiscrepancySeries series;
    series.points.resize(trace.row_count());
    for (std::size_t n = 0; n < trace.row_count(); ++n) {
        DiscrepancyPoint& point = series.points[n];
        point.t = trace.t(n);
        point.measured = trace.state(n, "S1", "x1") - trace.state(n, "S2", "x2");
        point.predicted_leading = leading[n];
        point.predicted_exact = exact[n];
    }
    return series;
}

OscillatorState reference_oscillator(double t, double m, double c, double k, double x0,
                                     double v0) {
    if (!(m > 0.0) || !(k > 0.0) || c < 0.0 || !std::isfinite(m) || !std::isfinite(c) ||
        !std::isfinite(k)) {
        throw ArgumentError("oscillator parameters must satisfy m > 0, k > 0, c >= 0");
    }
    const double omega_n = std::sqrt(k / m);
    const double zeta = c / (2.0 * std::sqrt(m * k));
    if (!(zeta < 1.0)) {
        throw ArgumentError("closed form requires an underdamped system (zeta < 1)");
    }
    const double omega_d = omega_n * std::sqrt(1.0 - zeta * zeta);
    const double a = x0;
    const double b = (v0 + zeta * omega_n * x0) / omega_d;
    const double decay = std::exp(-zeta * omega_n * t);
    const double cs = std::cos(omega_d * t);
    const double sn = std::sin(omega_d * t);
    OscillatorState state;
    state.x = decay * (a * cs + b * sn);
    state.v = decay * ((b * omega_d - zeta * omega_n * a) * cs -
                       (a * omega_d + zeta * omega_n * b) * sn);
    return state;
}

}  // namespace costep
