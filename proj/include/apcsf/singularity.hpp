#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "apcsf/flow.hpp"
#include "apcsf/geometry.hpp"
#include "apcsf/support.hpp"

namespace apcsf {

enum class CriterionCase { PositiveAreaQuotient, NegativeArea, NotApplicable };
const char* to_string(CriterionCase c);

struct CriterionVerdict {
    int l = 0;
    double total_curvature = 0.0;  // after orientation, so positive
    double L0 = 0.0;
    double dSigma = 0.0;
    double A0 = 0.0;
    double quotient = std::numeric_limits<double>::quiet_NaN();  // L0^2 / A0 when A0 > 0
    double threshold = 0.0;                                     // pi (2l - 1)^2 / l
    CriterionCase kind = CriterionCase::NotApplicable;
    bool predicted_singularity = false;
    bool reoriented = false;
};

CriterionVerdict check_criterion(const AnchoredCurve& initial);

struct LineCriterionVerdict {
    int m = 0;
    double L = 0.0;
    double A = 0.0;
    bool negative_area = false;
    bool index_condition = false;  // m >= 3 and L^2 < 4 pi m A
    bool predicted_singularity = false;
};

// Throws EvenIndex for even m.
LineCriterionVerdict line_criterion(int m, double L, double A);
LineCriterionVerdict check_line_criterion(const AnchoredCurve& initial);

// Tail selection shared by the blow-up analyses.
struct TailOptions {
    double fit_decades = 1.0;       // kappa_max range used to fit T
    double classify_decades = 5.0;  // kappa_max range used for rates
    double min_growth = 10.0;
    double resolved_factor = 2.0;  // keep samples with T - t >= factor * uncertainty
};

struct SingularTimeEstimate {
    double t_est = 0.0;
    double uncertainty = 0.0;
    double exponent = 1.0;   // 1 / kappa_max^2 ~ amplitude (T - t)^exponent
    double amplitude = 0.0;  // free slope, 4s in the linear model
    std::size_t fit_begin = 0;
};

SingularTimeEstimate estimate_singular_time(const std::vector<MonitorRecord>& monitors, const TailOptions& options = {});

// Indices of the resolved tail for rate analyses.
std::vector<std::size_t> resolved_tail(const std::vector<MonitorRecord>& monitors, double t_est, double uncertainty,
                                       const TailOptions& options = {});

enum class BlowupType { TypeI, TypeII, Undetermined };
const char* to_string(BlowupType t);

struct TypeClassification {
    BlowupType verdict = BlowupType::Undetermined;
    std::vector<std::pair<double, double>> rate_series;  // (t, kappa_max^2 (T - t))
    double growth = 0.0;
    double rate_min = 0.0;
    double rate_max = 0.0;
};

TypeClassification classify(const std::vector<MonitorRecord>& monitors, double t_est, double uncertainty = 0.0,
                            double growth_factor = 4.0, const TailOptions& options = {});
BlowupType classify_type(const std::vector<MonitorRecord>& monitors, double t_est, double growth_factor = 4.0);

struct RescaledFrame {
    double j = 0.0;
    double tau = 0.0;  // rescaled time relative to t_j
    double time = 0.0;
    long step = 0;
    double q = 0.0;
    std::size_t tip = 0;
    bool center = false;  // the tau = 0 frame of its j
    std::vector<Vec2> nodes;
    std::vector<double> curvature;
    double max_abs_curvature = 0.0;
};

std::vector<RescaledFrame> hamilton_blowup(const Trajectory& trajectory, double t_est, int schedule_size = 8,
                                           const TailOptions& options = {});

enum class GrimSide { Interior, Boundary };
const char* to_string(GrimSide s);

struct GrimFit {
    double residual = 0.0;
    GrimSide side = GrimSide::Interior;
    std::size_t window_nodes = 0;
};

GrimFit grim_reaper_fit(const OpenCurve& rescaled);

struct L2Rate {
    std::vector<std::pair<double, double>> series;  // (t, int kappa^2 ds (T - t)^(1/2))
    double C = 0.0;
    bool holds = false;
};

L2Rate l2_rate_check(const std::vector<MonitorRecord>& monitors, double t_est, double uncertainty = 0.0,
                     const TailOptions& options = {});

struct SingularityReport {
    bool has_estimate = false;
    SingularTimeEstimate estimate;
    TypeClassification type;
    double rate_floor = std::numeric_limits<double>::quiet_NaN();
    L2Rate l2;
    std::vector<RescaledFrame> blowup_frames;
    bool has_grim_fit = false;
    GrimFit grim;
    std::vector<std::string> notes;
};

struct AnalysisFlags {
    bool blowup = true;
    bool grim_fit = true;
    bool l2_rate = true;
};

SingularityReport analyze(const Trajectory& trajectory, const AnalysisFlags& flags = {});

}  // namespace apcsf
