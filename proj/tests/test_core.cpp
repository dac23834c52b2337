#include <doctest.h>

#include <limits>
#include <string>
#include <vector>

#include "costep/core/trace.hpp"
#include "costep/core/unit.hpp"

using namespace costep;

namespace {

// Minimal unit for exercising the base contract: one flow input "u", one
// output "y" = 2·u, one state "s" integrating u.
class DoublerUnit final : public SimulationUnit {
public:
    DoublerUnit() {
        declare_input("u", PortRole::flow);
        declare_output("y", PortRole::flow);
        declare_state("s", &s_);
    }

private:
    void step_impl(double, double dt) override { s_ += input("u") * dt; }
    double output_impl(const std::string&) const override { return 2.0 * input("u"); }

    double s_ = 0.0;
};

}  // namespace

TEST_CASE("unit contract: port declaration and lookup") {
    DoublerUnit unit;
    CHECK(unit.input_names() == std::vector<std::string>{"u"});
    CHECK(unit.output_names() == std::vector<std::string>{"y"});
    CHECK(unit.state_names() == std::vector<std::string>{"s"});
    CHECK(unit.input_role("u") == PortRole::flow);
    CHECK_THROWS_AS(unit.input_role("u9"), ConfigError);
    CHECK_THROWS_AS(unit.output("nope"), ConfigError);
    CHECK_THROWS_AS(unit.state("nope"), ConfigError);
}

TEST_CASE("unit contract: set_input validates the port name") {
    DoublerUnit unit;
    CHECK_THROWS_AS(unit.set_input("u9", 1.0), ConfigError);
    unit.set_input("u", 3.0);
    CHECK(unit.held_input("u") == 3.0);
    CHECK(unit.output("y") == 6.0);
}

TEST_CASE("unit contract: stepping with unset inputs is an error") {
    DoublerUnit unit;
    CHECK_THROWS_AS(unit.do_step(0.0, 0.1), StateError);
    CHECK_THROWS_AS(unit.output("y"), StateError);
    unit.set_input("u", 1.0);
    CHECK_NOTHROW(unit.do_step(0.0, 0.1));
}

TEST_CASE("unit contract: non-positive or non-finite step sizes are rejected") {
    DoublerUnit unit;
    unit.set_input("u", 1.0);
    CHECK_THROWS_AS(unit.do_step(0.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(unit.do_step(0.0, -0.1), ArgumentError);
    CHECK_THROWS_AS(unit.do_step(0.0, std::numeric_limits<double>::infinity()), ArgumentError);
}

TEST_CASE("unit contract: ZOH means behaviour depends only on the held value") {
    DoublerUnit a;
    DoublerUnit b;
    a.set_input("u", 2.0);
    b.set_input("u", -5.0);
    b.set_input("u", 2.0);  // overwritten before stepping
    a.do_step(0.0, 0.25);
    b.do_step(0.0, 0.25);
    CHECK(a.state("s") == b.state("s"));
}

TEST_CASE("unit contract: add_to_state mutates a declared state") {
    DoublerUnit unit;
    unit.add_to_state("s", 1.5);
    CHECK(unit.state("s") == 1.5);
    CHECK_THROWS_AS(unit.add_to_state("nope", 1.0), ConfigError);
}

TEST_CASE("trace: append enforces the time chain and key consistency") {
    Trace trace;
    TraceRow row0;
    row0.index = 0;
    row0.t = 0.0;
    row0.inputs["S1.u"] = 1.0;
    trace.append(row0);

    SUBCASE("appending without a recorded step size fails") {
        TraceRow row1 = row0;
        row1.index = 1;
        row1.t = 0.1;
        CHECK_THROWS_AS(trace.append(row1), ArgumentError);
    }

    SUBCASE("time chain must be exact") {
        trace.set_dt(0, 0.1);
        TraceRow row1 = row0;
        row1.index = 1;
        row1.t = 0.1000001;
        CHECK_THROWS_AS(trace.append(row1), ArgumentError);
        row1.t = 0.0 + 0.1;
        CHECK_NOTHROW(trace.append(row1));
        CHECK(trace.step_count() == 1);
        CHECK(trace.dt(0) == 0.1);
    }

    SUBCASE("rows must share one key set") {
        trace.set_dt(0, 0.1);
        TraceRow row1;
        row1.index = 1;
        row1.t = 0.1;
        row1.inputs["S1.other"] = 1.0;
        CHECK_THROWS_AS(trace.append(row1), ArgumentError);
    }

    SUBCASE("indices must be contiguous") {
        trace.set_dt(0, 0.1);
        TraceRow row2 = row0;
        row2.index = 2;
        row2.t = 0.1;
        CHECK_THROWS_AS(trace.append(row2), ArgumentError);
    }
}

TEST_CASE("trace: lookups are keyed by unit and name") {
    Trace trace;
    TraceRow row;
    row.inputs["S2.u2"] = -1.0;
    row.outputs["S2.y2"] = 0.5;
    row.states["S2.v2"] = 0.5;
    trace.append(row);
    CHECK(trace.input(0, "S2", "u2") == -1.0);
    CHECK(trace.output(0, "S2", "y2") == 0.5);
    CHECK(trace.state(0, "S2", "v2") == 0.5);
    CHECK_THROWS_AS(trace.output(0, "S1", "y1"), ConfigError);
    CHECK_THROWS_AS(trace.dt(0), ArgumentError);
}
