#include "cradon/config.hpp"
#include "cradon/scenarios.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

constexpr const char* kOutputEnv = "CRADON_OUTPUT_DIR";

int cmd_run(const std::string& path, const std::string& out_flag, int workers)
{
    cradon::ExperimentConfig cfg;
    try {
        cfg = cradon::load_config(path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (workers > 0)
        cfg.workers = workers;
    std::string out = cfg.output;
    if (const char* env = std::getenv(kOutputEnv); env && *env)
        out = env;
    if (!out_flag.empty())
        out = out_flag;

    cradon::RunManifest m;
    try {
        m = cradon::run_scenario(cfg, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    for (const auto& s : m.steps)
        std::cout << "step " << s.name << ": " << s.status << " (" << s.seconds << " s)"
                  << (s.error.empty() ? "" : " " + s.error) << "\n";
    for (const auto& a : m.assertions)
        std::cout << (a.pass ? "PASS " : "FAIL ") << a.name << "  value=" << a.value << " limit=" << a.limit
                  << (a.detail.empty() ? "" : "  " + a.detail) << "\n";
    for (const auto& n : m.notes)
        std::cout << "note: " << n << "\n";
    if (!m.error.empty())
        std::cerr << "error in step '" << m.failed_step << "': " << m.error << "\n";
    std::cout << "manifest: " << (std::filesystem::path(out) / "manifest.json").string() << "\n";
    return m.exit_code();
}

int cmd_validate(const std::string& path)
{
    try {
        const cradon::ExperimentConfig cfg = cradon::load_config(path);
        std::cout << "valid " << cfg.scenario << " config\n";
        std::string section;
        for (const auto& [key, value] : cfg.echo) {
            const std::string sec = key.substr(0, key.find('.'));
            if (sec != section) {
                std::cout << "[" << sec << "]\n";
                section = sec;
            }
            std::cout << key.substr(sec.size() + 1) << " = " << value << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"cradon: circular Radon transform experiments"};
    app.require_subcommand(1);

    std::string run_path, out_dir;
    int workers = 0;
    auto* run = app.add_subcommand("run", "Run the scenario described by a config file");
    run->add_option("config", run_path, "Config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, std::string("Output directory (overrides ") + kOutputEnv + " and the config)");
    run->add_option("--workers", workers, "Worker threads for data-parallel loops")->check(CLI::Range(1, 256));

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Parse a config and print it with defaults filled");
    validate->add_option("config", validate_path, "Config file")->required()->check(CLI::ExistingFile);

    std::string scenario;
    auto* defaults = app.add_subcommand("defaults", "Print a config template with every key");
    defaults->add_option("scenario", scenario, "Scenario name")
        ->required()
        ->check(CLI::IsMember(std::vector<std::string>(std::begin(cradon::kScenarioNames),
                                                       std::end(cradon::kScenarioNames))));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*run)
        return cmd_run(run_path, out_dir, workers);
    if (*validate)
        return cmd_validate(validate_path);
    std::cout << cradon::default_config_text(scenario);
    return 0;
}
