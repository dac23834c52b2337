#pragma once

// Synthetic units for the general two-integrator setup: a scripted flow
// source whose signal q(t) is a polynomial (so its Taylor series is finite
// and every integral is available in closed form), and a plain zero-order-
// hold accumulator playing the receiving side.

#include <cstddef>
#include <vector>

#include "costep/core/unit.hpp"

namespace costep {

class Polynomial {
public:
    /// q(t) = Σ coeffs[i]·t^i. An empty coefficient list is the zero
    /// polynomial; trailing zero coefficients are trimmed.
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial() : Polynomial(std::vector<double>{}) {}

    double operator()(double t) const;

    Polynomial derivative() const;
    /// Antiderivative with zero constant term.
    Polynomial antiderivative() const;

    std::size_t degree() const { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    std::vector<double> coeffs_;
};

struct ScriptedFlowStep {
    double x2 = 0.0;  // integral state after the step
    double y = 0.0;   // q sampled at the step's end
};

/// One macro step of the scripted flow: x2 grows by the closed-form
/// antiderivative difference over [t, t+dt], and y becomes q(t+dt).
ScriptedFlowStep scripted_flow_step(const Polynomial& q, double t, double dt, double x2);

class ScriptedFlowSourceUnit final : public SimulationUnit {
public:
    /// Flow polynomials are capped at degree 8.
    static constexpr std::size_t kMaxFlowDegree = 8;

    ScriptedFlowSourceUnit(Polynomial q, double t_start, double x2_0);

    void add_to_state(const std::string& name, double amount) override;

private:
    void step_impl(double t, double dt) override;
    double output_impl(const std::string& port) const override;

    Polynomial q_;
    Polynomial antiderivative_;
    double t_start_;
    double t_now_;
    double x2_offset_;  // x2 at t_start, shifted by add_to_state
    double x2_;
};

class AccumulatorUnit final : public SimulationUnit {
public:
    explicit AccumulatorUnit(double x1_0);

private:
    void step_impl(double t, double dt) override;
    double output_impl(const std::string& port) const override;

    double x1_;
};

}  // namespace costep
