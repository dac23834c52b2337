#include "costep/cli/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "costep/analysis/analysis.hpp"
#include "costep/cli/config.hpp"
#include "costep/cli/csv.hpp"
#include "costep/cli/experiments.hpp"

namespace costep {

namespace {

namespace fs = std::filesystem;

ExperimentConfig load_experiment(const std::string& name_or_path) {
    if (auto builtin = find_builtin(name_or_path)) {
        return *builtin;
    }
    if (!fs::exists(name_or_path)) {
        throw ConfigError("'" + name_or_path +
                          "' is neither a builtin experiment nor a config file (see 'costep "
                          "list')");
    }
    std::ifstream in(name_or_path);
    if (!in) throw ConfigError("cannot open config file '" + name_or_path + "'");
    return parse_experiment_config(in, name_or_path);
}

DiscrepancySeries analyze(const ExperimentConfig& config, const Trace& trace) {
    if (const auto* osc = std::get_if<OscillatorSetup>(&config.model)) {
        return measure_oscillator_discrepancy(trace, osc->m);
    }
    if (std::holds_alternative<ReservoirSetup>(config.model)) {
        return measure_reservoir_discrepancy(trace, config.events);
    }
    const auto& flow = std::get<GeneralFlowSetup>(config.model);
    return measure_flow_discrepancy(trace, Polynomial{flow.coeffs});
}

void write_summary(std::ostream& out, const ExperimentConfig& config, const Trace& trace,
                   const DiscrepancySeries& series) {
    const DiscrepancyPoint& last = series.back();
    out << "experiment = " << config.name << '\n';
    out << "model = " << model_kind_name(config) << '\n';
    out << "controller = " << controller_kind_name(config.controller.kind) << '\n';
    out << "t_final = " << format_double(trace.back().t) << '\n';
    out << "steps = " << trace.step_count() << '\n';
    out << "discrepancy_final = " << format_double(last.measured) << '\n';
    out << "predicted_leading_final = " << format_double(last.predicted_leading) << '\n';
    if (last.predicted_exact) {
        out << "predicted_exact_final = " << format_double(*last.predicted_exact) << '\n';
    }

    if (const auto* osc = std::get_if<OscillatorSetup>(&config.model)) {
        if (config.controller.kind == ControllerSpec::Kind::fixed) {
            out << "fixed_step_limit = "
                << format_double(0.5 * osc->v2_0 * config.controller.dt_fixed) << '\n';
        }
        if (config.controller.kind == ControllerSpec::Kind::scheduled &&
            config.controller.schedule.pieces.size() == 2) {
            // Single step-size change: read v2 at the first realized change.
            const double dt1 = config.controller.schedule.pieces[0].dt;
            const double dt2 = config.controller.schedule.pieces[1].dt;
            for (std::size_t n = 0; n < trace.step_count(); ++n) {
                if (trace.dt(n) == dt2) {
                    out << "single_change_limit = "
                        << format_double(oscillator_single_change_limit(
                               osc->v2_0, trace.state(n, "S2", "v2"), dt1, dt2))
                        << '\n';
                    break;
                }
            }
        }
    }
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    return out;
}

}  // namespace

int cmd_run(const std::string& name_or_path, const std::string& out_dir, std::ostream& err) {
    ExperimentConfig config;
    Experiment experiment;
    try {
        config = load_experiment(name_or_path);
        experiment = build_experiment(config);
    } catch (const std::exception& e) {
        err << "costep: " << e.what() << '\n';
        return 2;
    }
    try {
        const Trace trace = run(experiment.model, experiment.run);
        const DiscrepancySeries series = analyze(config, trace);

        const fs::path dir(out_dir);
        fs::create_directories(dir);
        {
            auto out = open_output(dir / "trace.csv");
            write_trace_csv(out, trace);
        }
        {
            auto out = open_output(dir / "discrepancy.csv");
            write_discrepancy_csv(out, series);
        }
        {
            auto out = open_output(dir / "summary.txt");
            write_summary(out, config, trace, series);
        }
    } catch (const std::exception& e) {
        err << "costep: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int cmd_predict(const std::string& flow_csv_path, const std::string& out_dir,
                std::ostream& err) {
    FlowTrace flow;
    try {
        std::ifstream in(flow_csv_path);
        if (!in) throw ConfigError("cannot open flow CSV '" + flow_csv_path + "'");
        flow = FlowTrace::from_samples(read_flow_csv(in, flow_csv_path));
    } catch (const std::exception& e) {
        err << "costep: " << e.what() << '\n';
        return 2;
    }
    try {
        const std::vector<double> leading = predict_leading(flow);
        const std::vector<double> regrouped = predict_regrouped(flow);

        const fs::path dir(out_dir);
        fs::create_directories(dir);
        auto out = open_output(dir / "predicted.csv");
        write_csv_row(out, {"t", "predicted_leading", "predicted_regrouped"});
        for (std::size_t n = 0; n < flow.samples.size(); ++n) {
            write_csv_row(out, {format_double(flow.samples[n].t), format_double(leading[n]),
                                format_double(regrouped[n])});
        }
    } catch (const std::exception& e) {
        err << "costep: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

int cmd_list(std::ostream& out) {
    for (const ExperimentConfig& config : builtin_experiments()) {
        out << config.name;
        for (std::size_t i = config.name.size(); i < 22; ++i) out << ' ';
        out << config.description << '\n';
    }
    return 0;
}

std::string default_output_dir() {
    if (const char* env = std::getenv("COSTEP_OUT"); env && *env) {
        return env;
    }
    return "costep_out";
}

}  // namespace costep
