#include "costep/cli/config.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <istream>
#include <sstream>

#include "costep/units/oscillator.hpp"
#include "costep/units/reservoir.hpp"

namespace costep {

namespace {

struct ConfigEntry {
    std::string section;
    std::string key;
    std::string value;
    std::size_t line = 0;
};

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& name, std::size_t line, const std::string& message) {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + message);
}

double parse_number(const ConfigEntry& entry, const std::string& name,
                    const std::string& text) {
    const std::string trimmed = trim(text);
    char* end = nullptr;
    const double value = std::strtod(trimmed.c_str(), &end);
    if (trimmed.empty() || end != trimmed.c_str() + trimmed.size()) {
        fail(name, entry.line, "expected a number for '" + entry.key + "', got '" + text + "'");
    }
    return value;
}

double parse_number(const ConfigEntry& entry, const std::string& name) {
    return parse_number(entry, name, entry.value);
}

std::vector<double> parse_numbers(const ConfigEntry& entry, const std::string& name) {
    std::vector<double> values;
    std::istringstream stream(entry.value);
    std::string token;
    while (stream >> token) {
        values.push_back(parse_number(entry, name, token));
    }
    if (values.empty()) {
        fail(name, entry.line, "expected one or more numbers for '" + entry.key + "'");
    }
    return values;
}

std::vector<ConfigEntry> tokenize(std::istream& in, const std::string& name) {
    static constexpr std::array<const char*, 4> known_sections{"model", "controller", "run",
                                                               "events"};
    std::vector<ConfigEntry> entries;
    std::string section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        const std::string content = trim(line);
        if (content.empty()) continue;
        if (content.front() == '[') {
            if (content.back() != ']') fail(name, line_no, "unterminated section header");
            section = trim(content.substr(1, content.size() - 2));
            if (std::find(known_sections.begin(), known_sections.end(), section) ==
                known_sections.end()) {
                fail(name, line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) fail(name, line_no, "expected 'key = value'");
        if (section.empty()) fail(name, line_no, "key outside of any [section]");
        ConfigEntry entry;
        entry.section = section;
        entry.key = trim(content.substr(0, eq));
        entry.value = trim(content.substr(eq + 1));
        entry.line = line_no;
        if (entry.key.empty()) fail(name, line_no, "empty key");
        entries.push_back(std::move(entry));
    }
    return entries;
}

const ConfigEntry* find_entry(const std::vector<ConfigEntry>& entries,
                              const std::string& section, const std::string& key) {
    for (const ConfigEntry& entry : entries) {
        if (entry.section == section && entry.key == key) return &entry;
    }
    return nullptr;
}

Event parse_event(const ConfigEntry& entry, const std::string& name) {
    std::istringstream stream(entry.value);
    std::string time_text;
    std::string amount_text;
    Event event;
    if (!(stream >> time_text >> event.unit_id >> event.state_name >> amount_text)) {
        fail(name, entry.line, "expected 'add = <time> <unit> <state> <amount>'");
    }
    std::string extra;
    if (stream >> extra) fail(name, entry.line, "trailing content after event fields");
    event.time = parse_number(entry, name, time_text);
    event.amount = parse_number(entry, name, amount_text);
    return event;
}

PortRef parse_port(const ConfigEntry& entry, const std::string& name, PortDirection direction,
                   PortRole role) {
    const auto dot = entry.value.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == entry.value.size()) {
        fail(name, entry.line, "expected '<unit>.<port>' for '" + entry.key + "'");
    }
    return PortRef{entry.value.substr(0, dot), entry.value.substr(dot + 1), direction, role};
}

}  // namespace

ExperimentConfig parse_experiment_config(std::istream& in, const std::string& name) {
    const std::vector<ConfigEntry> entries = tokenize(in, name);

    ExperimentConfig config;
    config.name = name;

    const ConfigEntry* model_kind = find_entry(entries, "model", "kind");
    if (!model_kind) throw ConfigError(name + ": missing 'kind' in [model]");
    const ConfigEntry* controller_kind = find_entry(entries, "controller", "kind");
    if (!controller_kind) throw ConfigError(name + ": missing 'kind' in [controller]");
    if (!find_entry(entries, "run", "t_end")) {
        throw ConfigError(name + ": missing 't_end' in [run]");
    }

    if (model_kind->value == "oscillator") {
        config.model = OscillatorSetup{};
    } else if (model_kind->value == "reservoirs") {
        config.model = ReservoirSetup{};
    } else if (model_kind->value == "general-flow") {
        config.model = GeneralFlowSetup{};
    } else {
        fail(name, model_kind->line, "unknown model kind '" + model_kind->value + "'");
    }

    ControllerSpec& ctrl = config.controller;
    if (controller_kind->value == "fixed") {
        ctrl.kind = ControllerSpec::Kind::fixed;
    } else if (controller_kind->value == "scheduled") {
        ctrl.kind = ControllerSpec::Kind::scheduled;
    } else if (controller_kind->value == "bangbang") {
        ctrl.kind = ControllerSpec::Kind::bangbang;
    } else if (controller_kind->value == "pi") {
        ctrl.kind = ControllerSpec::Kind::pi;
    } else {
        fail(name, controller_kind->line, "unknown controller kind '" + controller_kind->value +
                                              "'");
    }
    ctrl.bangbang.monitor = PortRef{"S2", "y2", PortDirection::output, PortRole::flow};

    for (const ConfigEntry& entry : entries) {
        if (entry.section == "model") {
            if (entry.key == "kind") continue;
            bool known = false;
            if (auto* osc = std::get_if<OscillatorSetup>(&config.model)) {
                known = true;
                if (entry.key == "m") osc->m = parse_number(entry, name);
                else if (entry.key == "c") osc->c = parse_number(entry, name);
                else if (entry.key == "k") osc->k = parse_number(entry, name);
                else if (entry.key == "x1_0") osc->x1_0 = parse_number(entry, name);
                else if (entry.key == "x2_0") osc->x2_0 = parse_number(entry, name);
                else if (entry.key == "v2_0") osc->v2_0 = parse_number(entry, name);
                else known = false;
            } else if (auto* res = std::get_if<ReservoirSetup>(&config.model)) {
                known = true;
                if (entry.key == "C") res->capacitance = parse_number(entry, name);
                else if (entry.key == "R") res->resistance = parse_number(entry, name);
                else if (entry.key == "V1_0") res->v1_0 = parse_number(entry, name);
                else if (entry.key == "V2_0") res->v2_0 = parse_number(entry, name);
                else known = false;
            } else if (auto* flow = std::get_if<GeneralFlowSetup>(&config.model)) {
                known = true;
                if (entry.key == "coeffs") flow->coeffs = parse_numbers(entry, name);
                else if (entry.key == "x1_0") flow->x1_0 = parse_number(entry, name);
                else if (entry.key == "x2_0") flow->x2_0 = parse_number(entry, name);
                else known = false;
            }
            if (!known) {
                fail(name, entry.line, "unknown key '" + entry.key + "' for model kind '" +
                                           model_kind->value + "'");
            }
        } else if (entry.section == "controller") {
            if (entry.key == "kind") continue;
            switch (ctrl.kind) {
                case ControllerSpec::Kind::fixed:
                    if (entry.key == "dt") {
                        ctrl.dt_fixed = parse_number(entry, name);
                    } else {
                        fail(name, entry.line,
                             "unknown key '" + entry.key + "' for the fixed controller");
                    }
                    break;
                case ControllerSpec::Kind::scheduled:
                    if (entry.key == "piece") {
                        const std::vector<double> values = parse_numbers(entry, name);
                        if (values.size() != 2) {
                            fail(name, entry.line, "expected 'piece = <from_time> <dt>'");
                        }
                        ctrl.schedule.pieces.push_back(StepSchedule::Piece{values[0], values[1]});
                    } else {
                        fail(name, entry.line,
                             "unknown key '" + entry.key + "' for the scheduled controller");
                    }
                    break;
                case ControllerSpec::Kind::bangbang:
                    if (entry.key == "dt_small") ctrl.bangbang.dt_small = parse_number(entry, name);
                    else if (entry.key == "dt_large") ctrl.bangbang.dt_large = parse_number(entry, name);
                    else if (entry.key == "q_threshold") ctrl.bangbang.q_threshold = parse_number(entry, name);
                    else if (entry.key == "monitor") ctrl.bangbang.monitor = parse_port(entry, name, PortDirection::output, PortRole::flow);
                    else fail(name, entry.line, "unknown key '" + entry.key + "' for the bang-bang controller");
                    break;
                case ControllerSpec::Kind::pi:
                    if (entry.key == "dt0") ctrl.pi.dt0 = parse_number(entry, name);
                    else if (entry.key == "kp") ctrl.pi.kp = parse_number(entry, name);
                    else if (entry.key == "ki") ctrl.pi.ki = parse_number(entry, name);
                    else if (entry.key == "dt_min") ctrl.pi.dt_min = parse_number(entry, name);
                    else if (entry.key == "dt_max") ctrl.pi.dt_max = parse_number(entry, name);
                    else if (entry.key == "theta_min") ctrl.pi.theta_min = parse_number(entry, name);
                    else if (entry.key == "theta_max") ctrl.pi.theta_max = parse_number(entry, name);
                    else if (entry.key == "abs_tol") ctrl.pi.abs_tol = parse_number(entry, name);
                    else if (entry.key == "rel_tol") ctrl.pi.rel_tol = parse_number(entry, name);
                    else fail(name, entry.line, "unknown key '" + entry.key + "' for the PI controller");
                    break;
            }
        } else if (entry.section == "run") {
            if (entry.key == "t_start") config.t_start = parse_number(entry, name);
            else if (entry.key == "t_end") config.t_end = parse_number(entry, name);
            else fail(name, entry.line, "unknown key '" + entry.key + "' in [run]");
        } else if (entry.section == "events") {
            if (entry.key == "add") config.events.push_back(parse_event(entry, name));
            else fail(name, entry.line, "unknown key '" + entry.key + "' in [events]");
        }
    }

    if (ctrl.kind == ControllerSpec::Kind::scheduled && ctrl.schedule.pieces.empty()) {
        throw ConfigError(name + ": scheduled controller needs at least one 'piece'");
    }
    return config;
}

Experiment build_experiment(const ExperimentConfig& config) {
    Experiment experiment;
    Model& model = experiment.model;

    const PortRef s1_u1{"S1", "u1", PortDirection::input, PortRole::flow};
    const PortRef s1_y1{"S1", "y1", PortDirection::output, PortRole::effort};
    const PortRef s2_u2{"S2", "u2", PortDirection::input, PortRole::effort};
    const PortRef s2_y2{"S2", "y2", PortDirection::output, PortRole::flow};

    if (const auto* osc = std::get_if<OscillatorSetup>(&config.model)) {
        model.add_unit("S1", std::make_unique<SpringDamperUnit>(osc->k, osc->c, osc->x1_0));
        model.add_unit("S2", std::make_unique<MassUnit>(osc->m, osc->x2_0, osc->v2_0));
        model.connect(s2_y2, s1_u1);
        model.connect(s1_y1, s2_u2);
        model.add_bond(PowerBond{Connection{s1_y1, s2_u2}, Connection{s2_y2, s1_u1}});
    } else if (const auto* res = std::get_if<ReservoirSetup>(&config.model)) {
        model.add_unit("S1", std::make_unique<ReservoirUnit>(res->capacitance, res->v1_0));
        model.add_unit("S2", std::make_unique<ReservoirPipeUnit>(res->capacitance,
                                                                 res->resistance, res->v2_0));
        model.connect(s2_y2, s1_u1);
        model.connect(s1_y1, s2_u2);
        model.add_bond(PowerBond{Connection{s1_y1, s2_u2}, Connection{s2_y2, s1_u1}});
    } else {
        const auto& flow = std::get<GeneralFlowSetup>(config.model);
        model.add_unit("S1", std::make_unique<AccumulatorUnit>(flow.x1_0));
        model.add_unit("S2", std::make_unique<ScriptedFlowSourceUnit>(
                                 Polynomial{flow.coeffs}, config.t_start, flow.x2_0));
        model.connect(s2_y2, s1_u1);
    }
    for (const Event& event : config.events) {
        model.add_event(event);
    }

    switch (config.controller.kind) {
        case ControllerSpec::Kind::fixed:
            experiment.controller =
                std::make_unique<FixedStepController>(config.controller.dt_fixed);
            break;
        case ControllerSpec::Kind::scheduled:
            experiment.controller =
                std::make_unique<ScheduledController>(config.controller.schedule);
            break;
        case ControllerSpec::Kind::bangbang:
            experiment.controller =
                std::make_unique<BangBangController>(config.controller.bangbang);
            break;
        case ControllerSpec::Kind::pi:
            if (model.bonds().empty()) {
                throw ConfigError(config.name +
                                  ": the PI controller needs a power bond; the general-flow "
                                  "model has none");
            }
            experiment.controller =
                std::make_unique<PiController>(config.controller.pi, model.bonds());
            break;
    }

    experiment.run.t_start = config.t_start;
    experiment.run.t_end = config.t_end;
    experiment.run.controller = experiment.controller.get();
    return experiment;
}

const char* model_kind_name(const ExperimentConfig& config) {
    if (std::holds_alternative<OscillatorSetup>(config.model)) return "oscillator";
    if (std::holds_alternative<ReservoirSetup>(config.model)) return "reservoirs";
    return "general-flow";
}

const char* controller_kind_name(ControllerSpec::Kind kind) {
    switch (kind) {
        case ControllerSpec::Kind::fixed: return "fixed";
        case ControllerSpec::Kind::scheduled: return "scheduled";
        case ControllerSpec::Kind::bangbang: return "bangbang";
        case ControllerSpec::Kind::pi: return "pi";
    }
    return "unknown";
}

}  // namespace costep
