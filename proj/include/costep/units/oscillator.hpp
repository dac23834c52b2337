#pragma once

// The damped harmonic oscillator split into two simulation units.
//
// S1 (spring + damper): state x1 integrates the held velocity input,
//   x1[n+1] = x1[n] + u1[n]·Δt[n], and outputs the opposing force
//   y1 = −k·x1 − c·ũ1.
// S2 (mass): states (x2, v2) advance under the held force input,
//   x2[n+1] = x2[n] + v2[n]·Δt[n] + u2[n]·Δt[n]²/(2m),
//   v2[n+1] = v2[n] + u2[n]·Δt[n]/m, and output y2 = v2.
// Both steps are the exact solutions of the units' ODEs under zero-order
// hold, so no micro integration takes place.

#include "costep/core/unit.hpp"

namespace costep {

/// Force opposing the extension: −k·x1 − c·u1.
double spring_damper_output(double x1, double u1, double k, double c);

struct MassState {
    double x2 = 0.0;
    double v2 = 0.0;
};

/// Exact advance of the mass under a held force over one macro step.
MassState mass_step(double x2, double v2, double u2, double m, double dt);

class SpringDamperUnit final : public SimulationUnit {
public:
    SpringDamperUnit(double k, double c, double x1_0);

private:
    void step_impl(double t, double dt) override;
    double output_impl(const std::string& port) const override;

    double k_;
    double c_;
    double x1_;
};

class MassUnit final : public SimulationUnit {
public:
    MassUnit(double m, double x2_0, double v2_0);

private:
    void step_impl(double t, double dt) override;
    double output_impl(const std::string& port) const override;

    double m_;
    double x2_;
    double v2_;
};

}  // namespace costep
