#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "apcsf/geometry.hpp"
#include "apcsf/support.hpp"

namespace apcsf {

enum class Scheme { Explicit, SemiImplicit };

struct FlowConfig {
    int node_count = 400;
    double dt_initial = 1e-3;
    double dt_min = 1e-18;
    // dt <= dt_safety * h_min^2; defaults per scheme when <= 0
    double dt_safety = 0.0;
    double t_end = 1.0;
    // <= 0 selects default_kappa_stop
    double kappa_stop = 0.0;
    // 0 disables redistribution
    int redistribute_every = 5;
    Scheme scheme = Scheme::SemiImplicit;

    // snapshot cadence: kappa_max growth factor, and a fixed time interval (<= 0: t_end / 50)
    double snapshot_growth = 1.1;
    double snapshot_interval = 0.0;
    // extra times hit exactly and stored as snapshots
    std::vector<double> output_times;
    long max_steps = 20'000'000;
    // steps excluded from boundary identity checks
    int burn_in_steps = 20;
};

double effective_dt_safety(const FlowConfig& config);

struct FlowState {
    AnchoredCurve anchored;
    double time = 0.0;
    long step_index = 0;
    double dt_last = 0.0;
};

struct MonitorRecord {
    long step = 0;
    double time = 0.0;
    double length = 0.0;
    double area = 0.0;
    double kappa_bar = 0.0;
    double total_curvature = 0.0;
    double kappa_max = 0.0;
    double kappa_min = 0.0;
    double kappa_a = 0.0;
    double kappa_b = 0.0;
    double dt = 0.0;
    double kappa_l2 = 0.0;  // integral of kappa^2 ds
    int self_intersections = -1;  // -1 when not evaluated
    int index = 0;                // turning number, reflected runs only
};

struct Snapshot {
    long step = 0;
    double time = 0.0;
    bool closed = false;
    std::vector<Vec2> nodes;
    std::vector<double> curvature;
    int self_intersections = 0;
};

enum class Outcome { ReachedTEnd, CurvatureBlowup, StepFailure };
const char* to_string(Outcome outcome);

struct Trajectory {
    std::vector<MonitorRecord> monitors;
    std::vector<Snapshot> snapshots;
    Outcome outcome = Outcome::ReachedTEnd;
    double t_est = std::numeric_limits<double>::quiet_NaN();
    double t_est_uncertainty = std::numeric_limits<double>::quiet_NaN();
    double kappa_stop = 0.0;
    // largest mirror asymmetry removed in one step, reflected runs only
    double symmetry_drift = 0.0;
    std::string message;
    std::optional<SupportCurve> support;
};

// Curvatures, normals and integrals of the engine's discretization.
struct DiscreteCurve {
    std::vector<double> kappa;
    std::vector<Vec2> normal;
    std::vector<double> weight;
    double length = 0.0;
    double total_curvature = 0.0;
    double kappa_bar = 0.0;
};

// Open curve with prescribed end tangents: interior Menger curvature, endpoint
// curvature from a cubic fit matching the prescribed tangent.
DiscreteCurve discretize_open(const std::vector<Vec2>& nodes, Vec2 tangent_a, Vec2 tangent_b);
DiscreteCurve discretize_closed(const std::vector<Vec2>& nodes);
DiscreteCurve discretize(const AnchoredCurve& anchored);

// kappa_stop default: this many times max(kappa_max(0), 1 / L0)
inline constexpr double kKappaStopFactor = 1e5;
double default_kappa_stop(const AnchoredCurve& initial);

std::vector<Vec2> velocity_field(const AnchoredCurve& anchored);

// Resamples to config.node_count nodes when the counts differ.
FlowState initial_state(const AnchoredCurve& initial, const FlowConfig& config);

// One accepted step; time_cap limits the step so time does not pass it.
FlowState step(const FlowState& state, const FlowConfig& config,
               double time_cap = std::numeric_limits<double>::infinity());

MonitorRecord monitor(const FlowState& state);

Trajectory run(const AnchoredCurve& initial, const FlowConfig& config);

std::pair<double, double> boundary_identity_residual(const FlowState& state);

// Equidistributes nodes in the density |kappa| + alpha along a cubic spline.
std::vector<Vec2> redistribute_open(const std::vector<Vec2>& nodes, Vec2 tangent_a, Vec2 tangent_b, std::size_t count);
std::vector<Vec2> redistribute_closed(const std::vector<Vec2>& nodes, std::size_t count);

double hausdorff_distance(const std::vector<Vec2>& a, const std::vector<Vec2>& b, bool a_closed, bool b_closed);

namespace detail {

// Linearly implicit increment for the normal motion; periodic or with
// ghost-node Neumann rows at both ends.
std::vector<Vec2> implicit_increment(const std::vector<Vec2>& nodes, const DiscreteCurve& d, double dt, bool periodic);

double min_spacing(const std::vector<Vec2>& nodes, bool closed);

}  // namespace detail

}  // namespace apcsf
