#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apcsf/flow.hpp"
#include "apcsf/singularity.hpp"
#include "apcsf/support.hpp"

namespace apcsf {

// Initial curve source. kind: example (name), file (path), arc (radius),
// spline (control points, first and last on the support), random_line (seed).
struct InitialSpec {
    std::string kind = "example";
    std::string name = "one";
    std::filesystem::path path;
    double radius = 0.0;  // <= 0: a default for the support
    std::vector<Vec2> points;
    std::size_t nodes = 800;
};

struct AnalysisSelection {
    bool criterion = true;
    bool blowup = true;
    bool grim_fit = true;
    bool l2_rate = true;
    bool line_criteria = false;
};

enum class LineRunMode { HalfPlane, Reflected };

struct ExperimentConfig {
    SupportCurve support = SupportCurve::circle({0.0, 0.0}, 4.0);
    InitialSpec initial;
    FlowConfig flow;
    AnalysisSelection analyses;
    LineRunMode line_mode = LineRunMode::HalfPlane;
    std::filesystem::path output_dir;  // empty: nothing written
    std::uint64_t seed = 1;
    bool write_frames = true;
};

// Applies the fields present in a JSON config document on top of base.
ExperimentConfig apply_config_json(const std::string& text, ExperimentConfig base);
void validate(const ExperimentConfig& config);

AnchoredCurve build_initial(const ExperimentConfig& config);

enum ExitCode : int { kExitCompleted = 0, kExitError = 1, kExitNotApplicable = 2, kExitAnalysisFailed = 3 };

struct ExperimentResult {
    int exit_code = kExitCompleted;
    Trajectory trajectory;
    std::optional<CriterionVerdict> criterion;
    std::optional<LineCriterionVerdict> line_criterion;
    std::optional<SingularityReport> report;
    std::string report_json;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Columns: time,L,A,kappa_bar,total_curvature,kappa_max,kappa_min,kappa_a,kappa_b,dt,
// then step, kappa_l2, self_intersections and, for reflected runs, index.
std::string monitors_csv(const std::vector<MonitorRecord>& monitors, bool with_index);
std::vector<MonitorRecord> parse_monitors_csv(const std::string& text);

std::string criterion_json(const CriterionVerdict& v);
std::string report_json(const Trajectory& trajectory, const std::optional<CriterionVerdict>& criterion,
                        const std::optional<LineCriterionVerdict>& line, const std::optional<SingularityReport>& report);

// Curves of all frames over the support, fixed viewport; short pieces dashed.
std::string render_svg(const std::vector<Snapshot>& frames, const SupportCurve& support);

void write_outputs(const std::filesystem::path& dir, const Trajectory& trajectory, const SupportCurve& support,
                   const std::string& report, bool frames, bool with_index);
void write_blowup_frames(const std::filesystem::path& dir, const std::vector<RescaledFrame>& frames);

// Reads monitors.csv, frames/ and report.json written by write_outputs.
Trajectory load_trajectory(const std::filesystem::path& dir);

}  // namespace apcsf
