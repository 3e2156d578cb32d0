// Command-line driver: validate | simulate | lookdown | dual | verify | study | plot.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "gpfv/characteristics.hpp"
#include "gpfv/harness.hpp"
#include "gpfv/io.hpp"
#include "gpfv/muller.hpp"

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<double> eps;
    std::optional<std::size_t> replicates;
};

void add_common(CLI::App* app, Common& c, bool config_required) {
    auto* opt = app->add_option("--config", c.config, "JSON run configuration");
    if (config_required) opt->required();
    app->add_option("--seed", c.seed, "master seed (overrides the config)");
    app->add_option("--out", c.out, "output directory (overrides the config)");
    app->add_option("--eps", c.eps, "truncation level for infinite-activity characteristics");
    app->add_option("--replicates", c.replicates, "number of replicates (overrides the config)");
}

gpfv::RunConfig load(const Common& c, std::optional<gpfv::ExperimentKind> kind) {
    gpfv::RunConfig config;
    if (!c.config.empty()) config = gpfv::run_config_from_json(gpfv::read_json_file(c.config));
    if (kind) config.experiment = *kind;
    if (c.seed) config.seed = *c.seed;
    if (c.out) config.out = *c.out;
    if (c.eps) {
        if (!(*c.eps > 0.0)) throw gpfv::ConfigError("--eps: expected eps > 0");
        config.eps = *c.eps;
    }
    if (c.replicates) {
        if (*c.replicates == 0) throw gpfv::ConfigError("--replicates: expected at least 1");
        config.replicates = *c.replicates;
    }
    return config;
}

int execute(const gpfv::RunConfig& config) {
    const auto outcome = gpfv::run(config);
    nlohmann::ordered_json report{{"experiment", gpfv::to_string(config.experiment)},
                                  {"seed", config.seed},
                                  {"out", config.out},
                                  {"status", outcome.status},
                                  {"summary", outcome.summary},
                                  {"files", outcome.files}};
    std::cout << report.dump(2) << '\n';
    return outcome.status;
}

int validate_command(const Common& c) {
    const auto j = gpfv::read_json_file(c.config);
    const bool is_run = j.is_object() && (j.contains("characteristic") || j.contains("experiment"));
    const gpfv::Characteristic ch =
        is_run ? gpfv::run_config_from_json(j).characteristic : gpfv::characteristic_from_json(j);
    const auto report = gpfv::validate(ch);
    nlohmann::ordered_json out{{"ok", report.ok}, {"feller", report.feller}, {"violations", report.violations},
                               {"total_rate", ch.jump.total_rate()}};
    if (report.ok) {
        try {
            out["carrying_capacity"] = gpfv::carrying_capacity(ch);
        } catch (const std::domain_error& e) {
            out["carrying_capacity"] = e.what();
        }
    }
    std::cout << out.dump(2) << '\n';
    return report.ok ? 0 : 1;
}

int plot_command(const std::string& input, const std::optional<std::string>& out, const std::string& title) {
    std::ifstream in(input);
    if (!in) throw gpfv::ConfigError("cannot open trajectory '" + input + "'");
    gpfv::MullerStyle style;
    style.title = title;
    const std::string svg = gpfv::muller_svg(gpfv::read_trajectory_csv(in), style);
    std::filesystem::path target = out ? std::filesystem::path(*out) : std::filesystem::path("muller.svg");
    if (target.extension() != ".svg") {
        std::filesystem::create_directories(target);
        target /= std::filesystem::path(input).stem().string() + ".svg";
    }
    std::ofstream o(target, std::ios::binary);
    if (!o) throw std::runtime_error("cannot write " + target.string());
    o << svg;
    std::cout << target.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Measure-valued population model simulator"};
    app.require_subcommand(1);

    Common validate_opts, simulate_opts, lookdown_opts, dual_opts, verify_opts, study_opts;
    auto* validate = app.add_subcommand("validate", "check a characteristic (or a run config's characteristic)");
    validate->add_option("--config", validate_opts.config, "JSON file")->required();

    auto* simulate = app.add_subcommand("simulate", "run the experiment named in the config");
    add_common(simulate, simulate_opts, true);

    auto* lookdown = app.add_subcommand("lookdown", "lookdown particle runs");
    add_common(lookdown, lookdown_opts, false);

    auto* dual = app.add_subcommand("dual", "environments and duality checks");
    add_common(dual, dual_opts, false);

    auto* verify = app.add_subcommand("verify", "run the verification suite and write report.json");
    add_common(verify, verify_opts, false);

    std::string study_kind;
    auto* study = app.add_subcommand("study", "convergence studies");
    study->add_option("kind", study_kind, "wf | closedness")->required()->check(CLI::IsMember({"wf", "closedness"}));
    add_common(study, study_opts, false);

    std::string plot_input, plot_title;
    std::optional<std::string> plot_out;
    auto* plot = app.add_subcommand("plot", "Muller plot of a trajectory CSV");
    plot->add_option("trajectory", plot_input, "trajectory CSV (t,N,mass_...)")->required();
    plot->add_option("--out", plot_out, "output directory or .svg file");
    plot->add_option("--title", plot_title, "figure title");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*validate) return validate_command(validate_opts);
        if (*simulate) return execute(load(simulate_opts, std::nullopt));
        if (*lookdown) return execute(load(lookdown_opts, gpfv::ExperimentKind::lookdown));
        if (*dual) return execute(load(dual_opts, gpfv::ExperimentKind::dual));
        if (*verify) return execute(load(verify_opts, gpfv::ExperimentKind::verify_suite));
        if (*study) {
            const auto kind = study_kind == "wf" ? gpfv::ExperimentKind::wf_study : gpfv::ExperimentKind::closedness_study;
            auto config = load(study_opts, kind);
            if (study_opts.config.empty() && kind == gpfv::ExperimentKind::closedness_study) {
                config.characteristic = gpfv::diagonal_lambda(1.0, 0.5, 1.0, 0.5);
                if (!study_opts.replicates) config.replicates = 100000;
            }
            return execute(config);
        }
        if (*plot) return plot_command(plot_input, plot_out, plot_title);
    } catch (const gpfv::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
