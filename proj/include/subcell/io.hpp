#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "subcell/grid.hpp"
#include "subcell/models.hpp"
#include "subcell/recon.hpp"
#include "subcell/shapes.hpp"

namespace subcell {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string fmt_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Grid file format: one JSON header line {"l": int, "format": "f64-row-major"}
// followed by l CSV rows (row r holds cells j = r, i = 0..l-1, full precision).
// ---------------------------------------------------------------------------

inline void write_grid(std::ostream& os, const CellGrid& g) {
    os << "{\"l\": " << g.l() << ", \"format\": \"f64-row-major\"}\n";
    for (int j = 0; j < g.l(); ++j) {
        for (int i = 0; i < g.l(); ++i) {
            if (i) os << ',';
            os << detail::fmt_full(g.at(i, j));
        }
        os << '\n';
    }
}

inline void write_grid_file(const std::string& path, const CellGrid& g) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_grid(os, g);
}

inline CellGrid read_grid(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw ParseError("grid file: missing header line");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(header);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("grid file header: ") + e.what());
    }
    if (!j.contains("l") || !j["l"].is_number_integer()) throw ParseError("grid file header: missing integer field 'l'");
    if (j.value("format", "") != std::string("f64-row-major"))
        throw ParseError("grid file header: unsupported format");
    const int l = j["l"].get<int>();
    if (l < 1) throw ParseError("grid file header: l must be >= 1");
    CellGrid g(l);
    std::string line;
    for (int row = 0; row < l; ++row) {
        if (!std::getline(is, line)) throw ParseError("grid file: truncated at row " + std::to_string(row));
        std::stringstream ss(line);
        std::string tok;
        for (int i = 0; i < l; ++i) {
            if (!std::getline(ss, tok, ','))
                throw ParseError("grid file: row " + std::to_string(row) + " has fewer than l values");
            try {
                g.set(i, row, std::stod(tok));
            } catch (const std::exception&) {
                throw ParseError("grid file: bad number at row " + std::to_string(row) + ", col " + std::to_string(i));
            }
        }
    }
    return g;
}

inline CellGrid read_grid_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_grid(is);
}

// ---------------------------------------------------------------------------
// Shape DSL (JSON):
//   {"circle": {"center": [x, y], "r": r}}
//   {"polygon": {"vertices": [[x, y], ...]}}
//   {"polar_fourier": {"center": [x,y], "r0": r, "cos": [...], "sin": [...], "vertices": n}}
//   {"difference": [A, B]}
// ---------------------------------------------------------------------------

inline Vec2 parse_vec2(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError(what + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline Shape parse_shape(const nlohmann::json& j) {
    if (!j.is_object() || j.size() != 1) throw ParseError("shape: expected a single-key tagged object");
    const std::string tag = j.begin().key();
    const nlohmann::json& body = j.begin().value();
    try {
        if (tag == "circle") {
            return Shape::circle(parse_vec2(body.at("center"), "circle.center"), body.at("r").get<double>());
        }
        if (tag == "polygon") {
            Poly verts;
            for (const auto& v : body.at("vertices")) verts.push_back(parse_vec2(v, "polygon.vertex"));
            return Shape::polygon(std::move(verts));
        }
        if (tag == "polar_fourier") {
            std::vector<double> ac, as;
            if (body.contains("cos"))
                for (const auto& v : body["cos"]) ac.push_back(v.get<double>());
            if (body.contains("sin"))
                for (const auto& v : body["sin"]) as.push_back(v.get<double>());
            const int n = body.value("vertices", 16384);
            return Shape::polar_fourier(parse_vec2(body.at("center"), "polar_fourier.center"),
                                        body.at("r0").get<double>(), ac, as, n);
        }
        if (tag == "difference") {
            if (!body.is_array() || body.size() != 2) throw ParseError("difference: expected [A, B]");
            return Shape::difference(parse_shape(body[0]), parse_shape(body[1]));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("shape '" + tag + "': " + e.what());
    }
    throw ParseError("shape: unknown tag '" + tag + "'");
}

inline Shape read_shape_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return parse_shape(j);
}

// ---------------------------------------------------------------------------
// Model serialization: JSON tagged union, radians as decimals, oriented-poly
// coefficients in the anchor-centered local convention x_hat = (x - anchor)/h.
// ---------------------------------------------------------------------------

inline const char* orientation_name(Orientation o) {
    switch (o) {
        case Orientation::YLeq: return "y<=p(x)";
        case Orientation::YGeq: return "y>=p(x)";
        case Orientation::XLeq: return "x<=p(y)";
        default: return "x>=p(y)";
    }
}

inline Orientation orientation_from_name(const std::string& s) {
    if (s == "y<=p(x)") return Orientation::YLeq;
    if (s == "y>=p(x)") return Orientation::YGeq;
    if (s == "x<=p(y)") return Orientation::XLeq;
    if (s == "x>=p(y)") return Orientation::XGeq;
    throw ParseError("unknown orientation: " + s);
}

inline nlohmann::json model_to_json(const InterfaceModel& m) {
    nlohmann::json j;
    if (const auto* c = std::get_if<ConstantModel>(&m)) {
        j["constant"] = {{"value", c->value}};
    } else if (const auto* lm = std::get_if<LinearModel>(&m)) {
        j["linear"] = {{"theta", lm->theta}, {"r", lm->r}, {"anchor", {lm->anchor.x, lm->anchor.y}}};
    } else if (const auto* cm = std::get_if<CircleModel>(&m)) {
        j["circle"] = {{"center", {cm->center.x, cm->center.y}}, {"radius", cm->radius}, {"inside", cm->inside}};
    } else if (const auto* pm = std::get_if<OrientedPolyModel>(&m)) {
        j["oriented_poly"] = {{"orientation", orientation_name(pm->orient)},
                              {"anchor", {pm->anchor.x, pm->anchor.y}},
                              {"h", pm->h},
                              {"coeffs", pm->p.c}};
    } else {
        const auto& km = std::get<CornerModel>(m);
        j["corner"] = {{"apex", {km.apex.x, km.apex.y}},
                       {"theta1", km.theta1},
                       {"theta2", km.theta2},
                       {"join", km.join}};
    }
    return j;
}

inline InterfaceModel model_from_json(const nlohmann::json& j) {
    if (!j.is_object() || j.size() != 1) throw ParseError("model: expected a single-key tagged object");
    const std::string tag = j.begin().key();
    const nlohmann::json& b = j.begin().value();
    try {
        if (tag == "constant") return ConstantModel{b.at("value").get<double>()};
        if (tag == "linear")
            return LinearModel{b.at("theta").get<double>(), b.at("r").get<double>(),
                               parse_vec2(b.at("anchor"), "linear.anchor")};
        if (tag == "circle")
            return CircleModel{parse_vec2(b.at("center"), "circle.center"), b.at("radius").get<double>(),
                               b.at("inside").get<bool>()};
        if (tag == "oriented_poly") {
            std::vector<double> coeffs = b.at("coeffs").get<std::vector<double>>();
            return OrientedPolyModel{orientation_from_name(b.at("orientation").get<std::string>()),
                                     parse_vec2(b.at("anchor"), "oriented_poly.anchor"), b.at("h").get<double>(),
                                     Polynomial(std::move(coeffs))};
        }
        if (tag == "corner")
            return CornerModel{parse_vec2(b.at("apex"), "corner.apex"), b.at("theta1").get<double>(),
                               b.at("theta2").get<double>(), b.at("join").get<bool>()};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("model '" + tag + "': " + e.what());
    }
    throw ParseError("model: unknown tag '" + tag + "'");
}

inline nlohmann::json reconstruction_to_json(const Reconstruction& rec) {
    nlohmann::json cells = nlohmann::json::array();
    for (const CellFit& f : rec.fits) {
        nlohmann::json c;
        c["cell"] = {f.cell.i, f.cell.j};
        c["method"] = f.method;
        c["loss"] = f.loss;
        c["model"] = model_to_json(f.model);
        c["stencil"] = {{"k_minus", f.stencil.k_minus},
                        {"k_plus", f.stencil.k_plus},
                        {"l_minus", f.stencil.l_minus},
                        {"l_plus", f.stencil.l_plus},
                        {"orientation", orientation_name(f.stencil.orient)}};
        cells.push_back(std::move(c));
    }
    nlohmann::json j;
    j["l"] = rec.grid.l();
    j["cells"] = std::move(cells);
    return j;
}

// ---------------------------------------------------------------------------
// SVG overlays: interface polylines sampled per crossing model, viewBox = unit
// square (y flipped so the origin sits at the lower left).
// ---------------------------------------------------------------------------

inline void write_interfaces_svg(const std::string& path, const std::vector<const Reconstruction*>& recs,
                                 const std::vector<std::string>& colors, int samples = 64) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\" width=\"640\" height=\"640\">\n";
    os << "<rect x=\"0\" y=\"0\" width=\"1\" height=\"1\" fill=\"white\"/>\n";
    for (std::size_t r = 0; r < recs.size(); ++r) {
        const std::string& color = r < colors.size() ? colors[r] : std::string("black");
        for (const CellFit& f : recs[r]->fits) {
            const Box cell = recs[r]->grid.cell_box(f.cell.i, f.cell.j);
            for (const Poly& run : sample_interface(f.model, cell, samples)) {
                os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"0.002\" points=\"";
                for (const Vec2& p : run) os << p.x << ',' << (1.0 - p.y) << ' ';
                os << "\"/>\n";
            }
        }
    }
    os << "</svg>\n";
}

}  // namespace subcell
