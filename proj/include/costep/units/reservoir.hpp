#pragma once

// The connected fluid reservoirs split into two simulation units.
//
// S1 (reservoir 1): V̇1 = −ũ1 with the flow input held, integrated exactly
//   as V1[n+1] = V1[n] − u1[n]·Δt[n]; outputs the interface pressure
//   y1 = V1/C. Supports add_to_state("V1", amount) for injection events.
// S2 (reservoir 2 + pipe): V̇2 = Q = ũ2/R − V2/(CR) with the pressure input
//   held; the exact exponential step is evaluated in expm1 form so the
//   per-step volume increment stays accurate for dt ≪ RC. Output y2 = Q.

#include "costep/core/unit.hpp"

namespace costep {

/// Exact advance of V2 under a held pressure: C·u2 + (V2 − C·u2)·e^{−dt/(RC)}.
double reservoir_pipe_step(double v2, double u2, double capacitance, double resistance,
                           double dt);

class ReservoirUnit final : public SimulationUnit {
public:
    ReservoirUnit(double capacitance, double v1_0);

private:
    void step_impl(double t, double dt) override;
    double output_impl(const std::string& port) const override;

    double capacitance_;
    double v1_;
};

class ReservoirPipeUnit final : public SimulationUnit {
public:
    ReservoirPipeUnit(double capacitance, double resistance, double v2_0);

private:
    void step_impl(double t, double dt) override;
    double output_impl(const std::string& port) const override;

    double capacitance_;
    double resistance_;
    double v2_;
};

}  // namespace costep
