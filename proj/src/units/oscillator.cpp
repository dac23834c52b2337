#include "costep/units/oscillator.hpp"

#include <cmath>

namespace costep {

namespace {

void require_finite(double value, const char* what) {
    if (!std::isfinite(value)) {
        throw ArgumentError(std::string(what) + " must be finite");
    }
}

}  // namespace

double spring_damper_output(double x1, double u1, double k, double c) {
    return -k * x1 - c * u1;
}

MassState mass_step(double x2, double v2, double u2, double m, double dt) {
    return MassState{x2 + v2 * dt + u2 * dt * dt / (2.0 * m), v2 + u2 * dt / m};
}

SpringDamperUnit::SpringDamperUnit(double k, double c, double x1_0)
    : k_(k), c_(c), x1_(x1_0) {
    require_finite(k, "spring constant");
    require_finite(c, "damping coefficient");
    require_finite(x1_0, "initial displacement");
    declare_input("u1", PortRole::flow);
    declare_output("y1", PortRole::effort);
    declare_state("x1", &x1_);
}

void SpringDamperUnit::step_impl(double, double dt) {
    x1_ += input("u1") * dt;
}

double SpringDamperUnit::output_impl(const std::string&) const {
    return spring_damper_output(x1_, input("u1"), k_, c_);
}

MassUnit::MassUnit(double m, double x2_0, double v2_0) : m_(m), x2_(x2_0), v2_(v2_0) {
    if (!std::isfinite(m) || m <= 0.0) throw ArgumentError("mass must be positive");
    require_finite(x2_0, "initial displacement");
    require_finite(v2_0, "initial velocity");
    declare_input("u2", PortRole::effort);
    declare_output("y2", PortRole::flow);
    declare_state("x2", &x2_);
    declare_state("v2", &v2_);
}

void MassUnit::step_impl(double, double dt) {
    const MassState next = mass_step(x2_, v2_, input("u2"), m_, dt);
    x2_ = next.x2;
    v2_ = next.v2;
}

double MassUnit::output_impl(const std::string&) const {
    return v2_;
}

}  // namespace costep
