#include "costep/units/flow.hpp"

#include <cmath>

namespace costep {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    for (double c : coeffs_) {
        if (!std::isfinite(c)) throw ArgumentError("polynomial coefficients must be finite");
    }
    while (coeffs_.size() > 1 && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double t) const {
    double value = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        value = value * t + *it;
    }
    return value;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        d[i - 1] = coeffs_[i] * static_cast<double>(i);
    }
    return Polynomial{std::move(d)};
}

Polynomial Polynomial::antiderivative() const {
    std::vector<double> p(coeffs_.size() + 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        p[i + 1] = coeffs_[i] / static_cast<double>(i + 1);
    }
    return Polynomial{std::move(p)};
}

ScriptedFlowStep scripted_flow_step(const Polynomial& q, double t, double dt, double x2) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ArgumentError("macro step size must be positive and finite");
    }
    const Polynomial p = q.antiderivative();
    return ScriptedFlowStep{x2 + (p(t + dt) - p(t)), q(t + dt)};
}

ScriptedFlowSourceUnit::ScriptedFlowSourceUnit(Polynomial q, double t_start, double x2_0)
    : q_(std::move(q)),
      antiderivative_(q_.antiderivative()),
      t_start_(t_start),
      t_now_(t_start),
      x2_offset_(x2_0),
      x2_(x2_0) {
    if (q_.degree() > kMaxFlowDegree) {
        throw ArgumentError("flow polynomial degree exceeds " + std::to_string(kMaxFlowDegree));
    }
    if (!std::isfinite(t_start) || !std::isfinite(x2_0)) {
        throw ArgumentError("flow source initial values must be finite");
    }
    declare_output("y2", PortRole::flow);
    declare_state("x2", &x2_);
}

void ScriptedFlowSourceUnit::add_to_state(const std::string& name, double amount) {
    SimulationUnit::add_to_state(name, amount);
    x2_offset_ += amount;
}

void ScriptedFlowSourceUnit::step_impl(double t, double dt) {
    // Anchoring the integral at t_start keeps x2 a single antiderivative
    // difference instead of a sum of per-step increments.
    t_now_ = t + dt;
    x2_ = x2_offset_ + (antiderivative_(t_now_) - antiderivative_(t_start_));
}

double ScriptedFlowSourceUnit::output_impl(const std::string&) const {
    return q_(t_now_);
}

AccumulatorUnit::AccumulatorUnit(double x1_0) : x1_(x1_0) {
    if (!std::isfinite(x1_0)) throw ArgumentError("initial accumulator value must be finite");
    declare_input("u1", PortRole::flow);
    declare_state("x1", &x1_);
}

void AccumulatorUnit::step_impl(double, double dt) {
    x1_ += input("u1") * dt;
}

double AccumulatorUnit::output_impl(const std::string&) const {
    throw ConfigError("accumulator unit has no outputs");
}

}  // namespace costep
