#pragma once

#include <cstddef>
#include <vector>

#include "apcsf/flow.hpp"
#include "apcsf/geometry.hpp"
#include "apcsf/support.hpp"

namespace apcsf {

// The double of a curve anchored on a line. Nodes 0 and half_count - 1 lie on
// the line, and node i mirrors node size - i.
struct ReflectedCurve {
    ClosedCurve closed;
    int index = 0;
    SupportCurve line;
    std::size_t half_count = 0;
    // node order was reversed to make the index positive
    bool reversed = false;
};

Vec2 mirror(const SupportCurve& line, Vec2 p);

ReflectedCurve reflect(const AnchoredCurve& anchored, double angle_tolerance = kAngleTolerance);

// Builds the double directly from the half nodes (endpoints on the line).
std::vector<Vec2> double_nodes(const std::vector<Vec2>& half, const SupportCurve& line);

// The half that corresponds to the original curve, in its original direction.
std::vector<Vec2> original_half(const std::vector<Vec2>& closed_nodes, std::size_t half_count, bool reversed,
                                const SupportCurve& line);

// Largest distance between a node and the mirror image of its partner, halved.
double mirror_asymmetry(const std::vector<Vec2>& closed_nodes, const SupportCurve& line);

// Averages mirror pairs and projects the two axis nodes onto the line.
std::vector<Vec2> symmetrize(std::vector<Vec2> closed_nodes, const SupportCurve& line);

// Closed-curve flow of the double. FlowConfig::node_count counts half nodes.
Trajectory run_reflected(const ReflectedCurve& initial, const FlowConfig& config);

}  // namespace apcsf
