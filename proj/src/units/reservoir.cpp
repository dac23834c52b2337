#include "costep/units/reservoir.hpp"

#include <cmath>

namespace costep {

namespace {

void require_positive(double value, const char* what) {
    if (!std::isfinite(value) || value <= 0.0) {
        throw ArgumentError(std::string(what) + " must be positive");
    }
}

}  // namespace

double reservoir_pipe_step(double v2, double u2, double capacitance, double resistance,
                           double dt) {
    // V2 + (C·u2 − V2)·(1 − e^{−x}) is algebraically the textbook form but
    // keeps the increment accurate when x is small.
    const double x = dt / (resistance * capacitance);
    return v2 + (capacitance * u2 - v2) * (-std::expm1(-x));
}

ReservoirUnit::ReservoirUnit(double capacitance, double v1_0)
    : capacitance_(capacitance), v1_(v1_0) {
    require_positive(capacitance, "hydraulic capacitance");
    if (!std::isfinite(v1_0)) throw ArgumentError("initial volume must be finite");
    declare_input("u1", PortRole::flow);
    declare_output("y1", PortRole::effort);
    declare_state("V1", &v1_);
}

void ReservoirUnit::step_impl(double, double dt) {
    v1_ -= input("u1") * dt;
}

double ReservoirUnit::output_impl(const std::string&) const {
    return v1_ / capacitance_;
}

ReservoirPipeUnit::ReservoirPipeUnit(double capacitance, double resistance, double v2_0)
    : capacitance_(capacitance), resistance_(resistance), v2_(v2_0) {
    require_positive(capacitance, "hydraulic capacitance");
    require_positive(resistance, "hydraulic resistance");
    if (!std::isfinite(v2_0)) throw ArgumentError("initial volume must be finite");
    declare_input("u2", PortRole::effort);
    declare_output("y2", PortRole::flow);
    declare_state("V2", &v2_);
}

void ReservoirPipeUnit::step_impl(double, double dt) {
    v2_ = reservoir_pipe_step(v2_, input("u2"), capacitance_, resistance_, dt);
}

double ReservoirPipeUnit::output_impl(const std::string&) const {
    return input("u2") / resistance_ - v2_ / (capacitance_ * resistance_);
}

}  // namespace costep
