#include <doctest.h>

#include <cmath>
#include <memory>

#include "costep/orchestrator/orchestrator.hpp"
#include "costep/units/oscillator.hpp"
#include "costep/units/reservoir.hpp"

using namespace costep;
using doctest::Approx;

namespace {

const PortRef kS1U1{"S1", "u1", PortDirection::input, PortRole::flow};
const PortRef kS1Y1{"S1", "y1", PortDirection::output, PortRole::effort};
const PortRef kS2U2{"S2", "u2", PortDirection::input, PortRole::effort};
const PortRef kS2Y2{"S2", "y2", PortDirection::output, PortRole::flow};

Model oscillator_model(double v2_0, bool mass_first = false) {
    Model model;
    if (mass_first) {
        model.add_unit("S2", std::make_unique<MassUnit>(1.0, 1.0, v2_0));
        model.add_unit("S1", std::make_unique<SpringDamperUnit>(1.0, 1.0, 1.0));
    } else {
        model.add_unit("S1", std::make_unique<SpringDamperUnit>(1.0, 1.0, 1.0));
        model.add_unit("S2", std::make_unique<MassUnit>(1.0, 1.0, v2_0));
    }
    model.connect(kS2Y2, kS1U1);
    model.connect(kS1Y1, kS2U2);
    return model;
}

Model reservoir_model(bool with_event = true) {
    Model model;
    model.add_unit("S1", std::make_unique<ReservoirUnit>(1.0, 0.6));
    model.add_unit("S2", std::make_unique<ReservoirPipeUnit>(1.0, 1.0, 0.4));
    model.connect(kS2Y2, kS1U1);
    model.connect(kS1Y1, kS2U2);
    if (with_event) model.add_event(Event{1.0, "S1", "V1", 1.0});
    return model;
}

bool traces_identical(const Trace& a, const Trace& b) {
    if (a.row_count() != b.row_count()) return false;
    for (std::size_t n = 0; n < a.row_count(); ++n) {
        const TraceRow& ra = a.row(n);
        const TraceRow& rb = b.row(n);
        if (ra.t != rb.t || ra.dt != rb.dt || ra.inputs != rb.inputs ||
            ra.outputs != rb.outputs || ra.states != rb.states) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("initialize: oscillator handshake exchanges consistent values") {
    Model model = oscillator_model(0.0);
    initialize(model);
    CHECK(model.unit("S1").held_input("u1") == 0.0);
    CHECK(model.unit("S2").held_input("u2") == -1.0);
}

TEST_CASE("initialize: reservoir handshake resolves the feedthrough chain") {
    Model model = reservoir_model(false);
    initialize(model);
    CHECK(model.unit("S2").held_input("u2") == Approx(0.6).epsilon(1e-15));
    CHECK(model.unit("S1").held_input("u1") == Approx(0.2).epsilon(1e-15));
}

TEST_CASE("initialize: an unconnected input is a configuration error") {
    Model model;
    model.add_unit("S1", std::make_unique<SpringDamperUnit>(1.0, 1.0, 1.0));
    model.add_unit("S2", std::make_unique<MassUnit>(1.0, 1.0, 0.0));
    model.connect(kS2Y2, kS1U1);  // S2.u2 left dangling
    CHECK_THROWS_AS(initialize(model), ConfigError);
}

TEST_CASE("model validation rejects bad wiring") {
    SUBCASE("role mismatch") {
        Model model = oscillator_model(0.0);
        model.connect(PortRef{"S2", "y2", PortDirection::output, PortRole::flow},
                      PortRef{"S2", "u2", PortDirection::input, PortRole::effort});
        CHECK_THROWS_AS(model.validate(), ConfigError);
    }
    SUBCASE("doubly covered input") {
        Model model = oscillator_model(0.0);
        model.connect(kS2Y2, kS1U1);
        CHECK_THROWS_AS(model.validate(), ConfigError);
    }
    SUBCASE("bond must reference model connections") {
        Model model = oscillator_model(0.0);
        PowerBond bond{Connection{kS1Y1, kS2U2}, Connection{kS2Y2, kS1U1}};
        model.add_bond(bond);
        CHECK_NOTHROW(model.validate());

        Model other = oscillator_model(0.0);
        PowerBond swapped{Connection{kS2Y2, kS1U1}, Connection{kS1Y1, kS2U2}};
        other.add_bond(swapped);  // effort leg is a flow connection
        CHECK_THROWS_AS(other.validate(), ConfigError);
    }
}

TEST_CASE("run: zero-length horizon yields only row 0") {
    Model model = oscillator_model(0.0);
    FixedStepController controller(0.1);
    RunConfig config{0.0, 0.0, &controller, {}};
    const Trace trace = run(model, config);
    CHECK(trace.row_count() == 1);
    CHECK(trace.t(0) == 0.0);
    CHECK(trace.output(0, "S1", "y1") == -1.0);
    CHECK(trace.input(0, "S2", "u2") == -1.0);
}

TEST_CASE("run: one fixed oscillator step reproduces the closed-form updates") {
    Model model = oscillator_model(0.0);
    FixedStepController controller(0.1);
    RunConfig config{0.0, 0.1, &controller, {}};
    const Trace trace = run(model, config);
    REQUIRE(trace.row_count() == 2);
    CHECK(trace.t(1) == Approx(0.1).epsilon(1e-15));
    CHECK(trace.state(1, "S1", "x1") == 1.0);  // x1 + u1·dt with u1 = 0
    CHECK(trace.state(1, "S2", "x2") == Approx(0.995).epsilon(1e-15));
    CHECK(trace.state(1, "S2", "v2") == Approx(-0.1).epsilon(1e-15));
    // The displacement discrepancy after one step: -(1/2m)·u2·dt² = 0.005.
    CHECK(trace.state(1, "S1", "x1") - trace.state(1, "S2", "x2") ==
          Approx(0.005).epsilon(1e-12));
}

TEST_CASE("run: trace time chain and connection correctness hold") {
    Model model = oscillator_model(1.0);
    FixedStepController controller(0.1);
    RunConfig config{0.0, 2.0, &controller, {}};
    const Trace trace = run(model, config);
    for (std::size_t n = 0; n + 1 < trace.row_count(); ++n) {
        CHECK(trace.t(n + 1) == trace.t(n) + trace.dt(n));
        // Inputs held during step n equal the outputs recorded at t[n].
        CHECK(trace.input(n, "S1", "u1") == trace.output(n, "S2", "y2"));
        CHECK(trace.input(n, "S2", "u2") == trace.output(n, "S1", "y1"));
    }
}

TEST_CASE("run: Jacobi purity, stepping order has no observable effect") {
    FixedStepController c1(0.1);
    FixedStepController c2(0.1);
    Model forward = oscillator_model(1.0, false);
    Model reversed = oscillator_model(1.0, true);
    RunConfig cfg1{0.0, 5.0, &c1, {}};
    RunConfig cfg2{0.0, 5.0, &c2, {}};
    CHECK(traces_identical(run(forward, cfg1), run(reversed, cfg2)));
}

TEST_CASE("run: determinism, identical runs produce identical traces") {
    FixedStepController c1(0.01);
    FixedStepController c2(0.01);
    Model a = reservoir_model();
    Model b = reservoir_model();
    RunConfig cfg1{0.0, 2.0, &c1, {}};
    RunConfig cfg2{0.0, 2.0, &c2, {}};
    CHECK(traces_identical(run(a, cfg1), run(b, cfg2)));
}

TEST_CASE("run: events land exactly and inject the full amount") {
    Model model = reservoir_model();
    FixedStepController controller(0.003);  // does not divide 1.0 evenly
    RunConfig config{0.0, 2.0, &controller, {}};
    const Trace trace = run(model, config);

    std::size_t event_row = 0;
    for (std::size_t n = 0; n < trace.row_count(); ++n) {
        if (trace.t(n) == 1.0) {
            event_row = n;
            break;
        }
    }
    REQUIRE(event_row > 0);

    // V1 at the event row equals the pre-event drain plus the injected unit.
    const double drained =
        trace.state(event_row - 1, "S1", "V1") -
        trace.input(event_row - 1, "S1", "u1") * trace.dt(event_row - 1);
    CHECK(trace.state(event_row, "S1", "V1") == Approx(drained + 1.0).epsilon(1e-15));

    // Post-event the recorded flow reflects the injected pressure.
    CHECK(trace.output(event_row, "S2", "y2") > 0.5);
    CHECK(trace.input(event_row, "S1", "u1") == trace.output(event_row, "S2", "y2"));

    // Total volume books balance: V1 + V2 - injections stays near 1.
    const double v_final = trace.state(trace.row_count() - 1, "S1", "V1") +
                           trace.state(trace.row_count() - 1, "S2", "V2");
    CHECK(v_final == Approx(2.0).epsilon(1e-2));
}

TEST_CASE("model validation rejects events targeting unknown states") {
    Model model = reservoir_model(false);
    model.add_event(Event{1.0, "S1", "V9", 1.0});
    CHECK_THROWS_AS(model.validate(), ConfigError);

    Model other = reservoir_model(false);
    other.add_event(Event{1.0, "S9", "V1", 1.0});
    CHECK_THROWS_AS(other.validate(), ConfigError);
}

TEST_CASE("run: event outside the horizon is rejected") {
    Model model = reservoir_model(false);
    model.add_event(Event{3.0, "S1", "V1", 1.0});
    FixedStepController controller(0.01);
    RunConfig config{0.0, 2.0, &controller, {}};
    CHECK_THROWS_AS(run(model, config), ConfigError);
}

TEST_CASE("run: controller failures carry context") {
    class BadController final : public StepController {
    public:
        double next_dt(const Trace&) override { return 0.0; }
    };
    Model model = oscillator_model(0.0);
    BadController controller;
    RunConfig config{0.0, 1.0, &controller, {}};
    CHECK_THROWS_AS(run(model, config), ControllerError);
}

TEST_CASE("run: scheduled controller realizes its schedule at non-clamped steps") {
    StepSchedule schedule;
    schedule.pieces = {{0.0, 0.1}, {0.35, 0.05}};
    ScheduledController controller(schedule);
    Model model = oscillator_model(0.0);
    RunConfig config{0.0, 1.0, &controller, {}};
    const Trace trace = run(model, config);
    for (std::size_t n = 0; n + 1 < trace.row_count(); ++n) {
        const bool clamped = trace.t(n + 1) == 1.0;
        if (!clamped) {
            CHECK(trace.dt(n) == schedule.dt_at(trace.t(n)));
        }
    }
}

TEST_CASE("run: recorded states can be restricted") {
    Model model = oscillator_model(0.0);
    FixedStepController controller(0.1);
    RunConfig config{0.0, 0.2, &controller, {{"S2", "v2"}}};
    const Trace trace = run(model, config);
    CHECK(trace.row(0).states.size() == 1);
    CHECK_NOTHROW(trace.state(0, "S2", "v2"));
    CHECK_THROWS_AS(trace.state(0, "S1", "x1"), ConfigError);
}
