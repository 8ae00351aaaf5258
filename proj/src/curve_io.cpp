#include "apcsf/curve_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "apcsf/error.hpp"
#include "json.hpp"

namespace apcsf {

using nlohmann::json;

namespace {

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

Vec2 parse_point(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw Error(ErrorKind::InvalidInput, what + ": expected [x, y]");
    }
    const Vec2 p{j[0].get<double>(), j[1].get<double>()};
    if (!is_finite(p)) throw Error(ErrorKind::InvalidInput, what + ": non-finite coordinate");
    return p;
}

std::vector<Vec2> parse_points(const json& j, const std::string& what) {
    if (!j.is_array()) throw Error(ErrorKind::InvalidInput, what + ": expected an array of points");
    std::vector<Vec2> out;
    out.reserve(j.size());
    for (const auto& p : j) out.push_back(parse_point(p, what));
    return out;
}

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, what + ": " + e.what());
    }
}

double number(const json& j, const char* key, const std::string& what) {
    if (!j.contains(key) || !j[key].is_number()) throw Error(ErrorKind::InvalidInput, what + ": missing number '" + key + "'");
    return j[key].get<double>();
}

}  // namespace

std::string to_json(const CurveDocument& doc) {
    json j;
    j["kind"] = doc.closed ? "closed" : "open";
    json nodes = json::array();
    for (const auto& p : doc.nodes) nodes.push_back(point_json(p));
    j["nodes"] = std::move(nodes);
    json corners = json::array();
    for (const auto& c : doc.corners) corners.push_back({{"index", c.index}, {"angle", c.angle}});
    j["corners"] = std::move(corners);
    if (doc.time) j["time"] = *doc.time;
    if (doc.step) j["step"] = *doc.step;
    if (!doc.curvature.empty()) j["curvature"] = doc.curvature;
    return j.dump();
}

CurveDocument parse_curve_document(const std::string& text) {
    const json j = parse_json(text, "curve document");
    CurveDocument doc;
    const std::string kind = j.value("kind", "open");
    if (kind != "open" && kind != "closed") throw Error(ErrorKind::InvalidInput, "curve kind must be open or closed");
    doc.closed = kind == "closed";
    if (!j.contains("nodes")) throw Error(ErrorKind::InvalidInput, "curve document has no nodes");
    doc.nodes = parse_points(j["nodes"], "curve nodes");
    if (j.contains("corners")) {
        for (const auto& c : j["corners"]) {
            Corner corner;
            corner.index = c.at("index").get<std::size_t>();
            corner.angle = c.at("angle").get<double>();
            doc.corners.push_back(corner);
        }
    }
    if (j.contains("time")) doc.time = j["time"].get<double>();
    if (j.contains("step")) doc.step = j["step"].get<long>();
    if (j.contains("curvature")) doc.curvature = j["curvature"].get<std::vector<double>>();
    return doc;
}

CurveDocument read_curve_document(const std::filesystem::path& path) { return parse_curve_document(read_text(path)); }

void write_curve_document(const std::filesystem::path& path, const CurveDocument& doc) { write_text(path, to_json(doc)); }

OpenCurve to_open_curve(const CurveDocument& doc) {
    if (doc.closed) throw Error(ErrorKind::InvalidInput, "expected an open curve document");
    return OpenCurve(doc.nodes);
}

ClosedCurve to_closed_curve(const CurveDocument& doc) {
    if (!doc.closed) throw Error(ErrorKind::InvalidInput, "expected a closed curve document");
    return ClosedCurve(doc.nodes, doc.corners);
}

std::string support_to_json(const SupportCurve& s) {
    json j;
    switch (s.kind()) {
        case SupportKind::Circle:
            j = {{"kind", "circle"}, {"center", point_json(s.center())}, {"radius", s.radius()}};
            break;
        case SupportKind::Ellipse:
            j = {{"kind", "ellipse"},
                 {"center", point_json(s.center())},
                 {"a", s.semi_major()},
                 {"b", s.semi_minor()},
                 {"rotation", s.rotation()}};
            break;
        case SupportKind::Line:
            j = {{"kind", "line"}, {"point", point_json(s.line_point())}, {"direction", point_json(s.line_direction())}};
            break;
        case SupportKind::Table: {
            json nodes = json::array();
            for (const auto& p : s.table_nodes()) nodes.push_back(point_json(p));
            j = {{"kind", "table"}, {"nodes", std::move(nodes)}};
            break;
        }
    }
    return j.dump();
}

SupportCurve parse_support(const std::string& text) {
    const json j = parse_json(text, "support document");
    const std::string kind = j.value("kind", "");
    const std::string what = "support '" + kind + "'";
    if (kind == "circle") return SupportCurve::circle(parse_point(j.at("center"), what), number(j, "radius", what));
    if (kind == "ellipse") {
        const double a = j.contains("a") ? number(j, "a", what) : number(j, "semi_major", what);
        const double b = j.contains("b") ? number(j, "b", what) : number(j, "semi_minor", what);
        return SupportCurve::ellipse(parse_point(j.at("center"), what), a, b, j.value("rotation", 0.0));
    }
    if (kind == "line") {
        const Vec2 p = j.contains("point") ? parse_point(j["point"], what) : Vec2{0.0, 0.0};
        const Vec2 d = j.contains("direction") ? parse_point(j["direction"], what) : Vec2{-1.0, 0.0};
        return SupportCurve::line(p, d);
    }
    if (kind == "table") return SupportCurve::table(parse_points(j.at("nodes"), what));
    throw Error(ErrorKind::InvalidInput, "unknown support kind '" + kind + "'");
}

SupportCurve read_support(const std::filesystem::path& path) { return parse_support(read_text(path)); }

SupportCurve support_from_spec(const std::string& spec) {
    if (spec == "line") return SupportCurve::line();
    if (spec == "circle") return SupportCurve::circle({0.0, 0.0}, 4.0);
    if (spec.rfind("circle:", 0) == 0) {
        double r = 0.0;
        try {
            r = std::stod(spec.substr(7));
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidInput, "bad circle radius in '" + spec + "'");
        }
        return SupportCurve::circle({0.0, 0.0}, r);
    }
    if (!spec.empty() && spec.front() == '{') return parse_support(spec);
    return read_support(spec);
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + path.string());
}

}  // namespace apcsf
