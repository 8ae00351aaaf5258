#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apcsf/curve_io.hpp"
#include "apcsf/error.hpp"
#include "apcsf/examples.hpp"
#include "apcsf/experiment.hpp"
#include "apcsf/flow.hpp"
#include "apcsf/line_mode.hpp"
#include "apcsf/singularity.hpp"

namespace py = pybind11;
using namespace apcsf;

namespace {

using Points = std::vector<std::pair<double, double>>;

Points to_points(const std::vector<Vec2>& x) {
    Points out;
    out.reserve(x.size());
    for (const auto& p : x) out.emplace_back(p.x, p.y);
    return out;
}

std::vector<Vec2> from_points(const Points& x) {
    std::vector<Vec2> out;
    out.reserve(x.size());
    for (const auto& [a, b] : x) out.push_back({a, b});
    return out;
}

AnchoredCurve anchored(const Points& nodes, const SupportCurve& support) {
    return AnchoredCurve(OpenCurve(from_points(nodes)), support);
}

py::dict verdict_dict(const CriterionVerdict& v) {
    py::dict d;
    d["case"] = to_string(v.kind);
    d["predicted_singularity"] = v.predicted_singularity;
    d["l"] = v.l;
    d["total_curvature"] = v.total_curvature;
    d["L0"] = v.L0;
    d["d_sigma"] = v.dSigma;
    d["A0"] = v.A0;
    d["quotient"] = v.quotient;
    d["threshold"] = v.threshold;
    d["reoriented"] = v.reoriented;
    return d;
}

py::dict trajectory_dict(const Trajectory& t, bool with_report) {
    py::dict d;
    d["outcome"] = to_string(t.outcome);
    std::vector<double> time, length, area, kmax, total;
    for (const auto& m : t.monitors) {
        time.push_back(m.time);
        length.push_back(m.length);
        area.push_back(m.area);
        kmax.push_back(m.kappa_max);
        total.push_back(m.total_curvature);
    }
    d["time"] = time;
    d["length"] = length;
    d["area"] = area;
    d["kappa_max"] = kmax;
    d["total_curvature"] = total;
    py::list frames;
    for (const auto& s : t.snapshots) {
        py::dict f;
        f["time"] = s.time;
        f["closed"] = s.closed;
        f["nodes"] = to_points(s.nodes);
        frames.append(f);
    }
    d["frames"] = frames;
    if (with_report && t.outcome != Outcome::ReachedTEnd) {
        const SingularityReport r = analyze(t);
        py::dict rep;
        rep["has_estimate"] = r.has_estimate;
        if (r.has_estimate) {
            rep["t_est"] = r.estimate.t_est;
            rep["uncertainty"] = r.estimate.uncertainty;
        }
        rep["type"] = to_string(r.type.verdict);
        rep["growth"] = r.type.growth;
        rep["rate_floor"] = r.rate_floor;
        rep["l2_holds"] = r.l2.holds;
        if (r.has_grim_fit) rep["grim_residual"] = r.grim.residual;
        d["report"] = rep;
    }
    return d;
}

FlowConfig flow_config(int nodes, double t_end, double kappa_stop, const std::string& scheme) {
    FlowConfig c;
    c.node_count = nodes;
    c.t_end = t_end;
    c.kappa_stop = kappa_stop;
    if (scheme == "explicit") c.scheme = Scheme::Explicit;
    else if (scheme != "semi_implicit") throw Error(ErrorKind::InvalidInput, "unknown scheme '" + scheme + "'");
    return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Area-preserving curve shortening flow with free boundary";
    py::register_exception<Error>(m, "ApcsfError", PyExc_ValueError);

    py::class_<SupportCurve>(m, "Support")
        .def_static("circle", [](double cx, double cy, double r) { return SupportCurve::circle({cx, cy}, r); },
                    py::arg("cx"), py::arg("cy"), py::arg("radius"))
        .def_static("ellipse", [](double cx, double cy, double a, double b, double rot) {
            return SupportCurve::ellipse({cx, cy}, a, b, rot);
        }, py::arg("cx"), py::arg("cy"), py::arg("a"), py::arg("b"), py::arg("rotation") = 0.0)
        .def_static("line", [] { return SupportCurve::line(); })
        .def_static("from_spec", &support_from_spec)
        .def_property_readonly("is_line", &SupportCurve::is_line)
        .def("minimum_width", &SupportCurve::minimum_width)
        .def("project", [](const SupportCurve& s, double x, double y) {
            const auto [t, p] = s.project({x, y});
            return py::make_tuple(t, py::make_tuple(p.x, p.y));
        });

    m.def("signed_area", [](const Points& x) { return signed_area(from_points(x)); });
    m.def("example_names", &example_names);
    m.def("example", [](const std::string& name, std::size_t nodes) {
        return to_points(generate_example(name, nodes).curve().nodes());
    }, py::arg("name"), py::arg("nodes") = 800);
    m.def("example_support", [](const std::string& name) { return example_recipe(name).support; });
    m.def("check_criterion", [](const Points& nodes, const SupportCurve& support) {
        return verdict_dict(check_criterion(anchored(nodes, support)));
    });
    m.def("enclosed_area", [](const Points& nodes, const SupportCurve& support) {
        return enclosed_area(anchored(nodes, support));
    });
    m.def("reflected_index", [](const Points& nodes, const SupportCurve& line) {
        return reflect(anchored(nodes, line)).index;
    });
    m.def("simulate", [](const Points& nodes, const SupportCurve& support, int node_count, double t_end,
                         double kappa_stop, const std::string& scheme, bool analyze_blowup) {
        const AnchoredCurve init = anchored(nodes, support);
        Trajectory t;
        {
            py::gil_scoped_release release;
            t = run(init, flow_config(node_count, t_end, kappa_stop, scheme));
        }
        return trajectory_dict(t, analyze_blowup);
    }, py::arg("nodes"), py::arg("support"), py::arg("node_count") = 400, py::arg("t_end") = 1.0,
       py::arg("kappa_stop") = 0.0, py::arg("scheme") = "semi_implicit", py::arg("analyze") = true);
}
