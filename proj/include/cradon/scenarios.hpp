#pragma once

#include "cradon/config.hpp"
#include "cradon/geometry.hpp"
#include "cradon/phantom.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cradon {

struct AssertionRecord
{
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
    std::string detail;
};

struct StepRecord
{
    std::string name;
    std::string status; // ok | failed
    double seconds = 0.0;
    std::string error;
};

struct ArtifactRecord
{
    std::string kind; // sinogram | field | distance | spectrum | trace | residual | centers | table | report
    std::string path; // relative to the output directory
    std::string step;
};

struct RunManifest
{
    std::string scenario;
    std::string config_source;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<StepRecord> steps;
    std::vector<ArtifactRecord> artifacts;
    std::vector<AssertionRecord> assertions;
    std::vector<std::string> notes;
    std::string failed_step;
    std::string error;

    bool all_pass() const;
    /// 0 all assertions pass, 1 assertion failure, 2 runtime error.
    int exit_code() const;
    std::string to_json() const;
};

/// Raised by ScenarioRun::step after the failure has been recorded.
class StepFailure : public std::runtime_error
{
public:
    StepFailure(std::string step, const std::string& what)
        : std::runtime_error(what), step_(std::move(step)) {}
    const std::string& step() const { return step_; }

private:
    std::string step_;
};

/// Execution context of one scenario: output directory, manifest, steps.
class ScenarioRun
{
public:
    ScenarioRun(ExperimentConfig cfg, std::filesystem::path out);

    const ExperimentConfig& config() const { return cfg_; }
    const std::filesystem::path& out() const { return out_; }
    RunManifest& manifest() { return manifest_; }
    const RunManifest& manifest() const { return manifest_; }

    /// Runs fn as a named, timed step. Exceptions are recorded and rethrown
    /// as StepFailure.
    void step(const std::string& name, const std::function<void()>& fn);
    /// Records an assertion; names must be unique within a run.
    bool check(const std::string& name, bool pass, double value, double limit, const std::string& detail = {});
    void note(std::string text);
    /// Writes out()/file through `writer` and records it.
    std::filesystem::path artifact(const std::string& kind, const std::string& file,
                                   const std::function<void(std::ostream&)>& writer);

private:
    ExperimentConfig cfg_;
    std::filesystem::path out_;
    RunManifest manifest_;
    std::string current_step_;
};

struct CriterionSpec
{
    int id;
    std::string title;
    double time_limit; // seconds
    std::function<void(ScenarioRun&)> run;
};

/// The eleven acceptance criteria with pinned tolerances.
const std::vector<CriterionSpec>& acceptance_criteria();

/// Witness base bump placed on the bisector of the first sector at
/// `base_distance`; width 0 picks the widest bump clear of every line.
CoxeterOdd standard_witness(int lines, const RigidMotion2D& motion, double base_distance = 1.0, double width = 0.0);

Phantom phantom_from_config(const ExperimentConfig& cfg);
CenterSet centers_from_config(const ExperimentConfig& cfg);

/// max |R f| over a circle of 64 centers enclosing the phantom's bounding disk.
double sinogram_scale(const Phantom& f, int n_theta);

/// Runs the configured scenario into `out`, writes manifest.json (also on
/// failure) and the plot files.
RunManifest run_scenario(const ExperimentConfig& cfg, const std::filesystem::path& out);

/// PGM heatmaps for sinogram, field and distance artifacts; curve artifacts
/// are CSV already. Missing artifacts are skipped with a manifest note.
void emit_plots(RunManifest& manifest, const std::filesystem::path& out);

} // namespace cradon
