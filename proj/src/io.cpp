#include "mrds/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "mrds/error.hpp"

namespace mrds {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorKind::Schema, what); }

const json& field(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) schema(std::string("missing field '") + name + "'");
    return j.at(name);
}

double number(const json& j, const char* what) {
    if (!j.is_number()) schema(std::string(what) + " must be a number");
    return j.get<double>();
}

int integer(const json& j, const char* what) {
    if (!j.is_number_integer()) schema(std::string(what) + " must be an integer");
    return j.get<int>();
}

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx cplx_from(const json& j, const char* what) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        schema(std::string(what) + " must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<cplx> coeffs_from(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) schema(std::string(what) + " must be a nonempty coefficient array");
    std::vector<cplx> out;
    for (const auto& c : j) out.push_back(cplx_from(c, what));
    return out;
}

json coeffs_json(const std::vector<cplx>& c) {
    json a = json::array();
    for (cplx z : c) a.push_back(cplx_json(z));
    return a;
}

const char* template_name(DiskTemplate t) {
    switch (t) {
        case DiskTemplate::QuadraticC: return "quadratic_c";
        case DiskTemplate::CoefficientDisk: return "coeff_disk";
        case DiskTemplate::ScaledNumerator: return "scaled_numerator";
    }
    return "?";
}

DiskTemplate template_from(const std::string& s) {
    if (s == "quadratic_c") return DiskTemplate::QuadraticC;
    if (s == "coeff_disk") return DiskTemplate::CoefficientDisk;
    if (s == "scaled_numerator") return DiskTemplate::ScaledNumerator;
    schema("unknown disk template '" + s + "'");
}

}  // namespace

json map_to_json(const RationalMap& f) {
    auto den = f.denominator();
    if (den.size() == 1 && den[0] == cplx{1.0, 0.0}) return coeffs_json(f.numerator());
    return json{{"num", coeffs_json(f.numerator())}, {"den", coeffs_json(den)}};
}

RationalMap map_from_json(const json& j) {
    try {
        if (j.is_array()) return RationalMap::polynomial(coeffs_from(j, "polynomial"));
        if (!j.is_object()) schema("map must be a coefficient array or {num, den}");
        auto num = coeffs_from(field(j, "num"), "num");
        std::vector<cplx> den{{1.0, 0.0}};
        if (j.contains("den")) den = coeffs_from(j.at("den"), "den");
        return RationalMap(num, den);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Schema) throw;
        schema(std::string("invalid map: ") + e.what());
    }
}

json point_to_json(const SpherePoint& p) {
    if (p.is_infinity()) return "inf";
    return cplx_json(p.to_complex());
}

SpherePoint point_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return SpherePoint::infinity();
        schema("point must be [re, im] or \"inf\"");
    }
    return SpherePoint::from_complex(cplx_from(j, "point"));
}

namespace {

MapFamily family_from(const json& j) {
    const std::string kind = field(j, "kind").is_string() ? j.at("kind").get<std::string>() : "";
    if (kind == "atoms") {
        const json& list = field(j, "atoms");
        if (!list.is_array() || list.empty()) schema("atoms must be a nonempty array");
        std::vector<Atom> atoms;
        for (const auto& a : list) {
            Atom at;
            at.map = map_from_json(field(a, "map"));
            at.weight = a.contains("weight") ? number(a.at("weight"), "atom weight") : 1.0;
            if (!(at.weight > 0.0)) schema("atom weight must be positive");
            atoms.push_back(std::move(at));
        }
        return MapFamily::atoms(std::move(atoms));
    }
    if (kind == "disk") {
        DiskFamily d;
        if (!field(j, "template").is_string()) schema("template must be a string");
        d.tmpl = template_from(j.at("template").get<std::string>());
        if (j.contains("base")) d.base = map_from_json(j.at("base"));
        else if (d.tmpl != DiskTemplate::QuadraticC) schema("disk family needs a base map");
        if (j.contains("coeff_index")) d.coeff_index = integer(j.at("coeff_index"), "coeff_index");
        d.center = cplx_from(field(j, "center"), "center");
        d.radius = number(field(j, "radius"), "radius");
        if (j.contains("inner_radius")) d.inner_radius = number(j.at("inner_radius"), "inner_radius");
        if (!(d.radius >= 0.0) || !(d.inner_radius >= 0.0) || (d.inner_radius > 0.0 && d.inner_radius >= d.radius))
            schema("bad disk radii");
        try {
            if (d.radius > 0.0) return MapFamily::disk(d);
            d.radius = 1.0;
            return MapFamily::disk(d).with_radius(0.0);
        } catch (const Error& e) {
            schema(std::string("invalid disk family: ") + e.what());
        }
    }
    schema("family kind must be \"atoms\" or \"disk\"");
}

json family_json(const MapFamily& f) {
    if (f.kind() == FamilyKind::Atoms) {
        json list = json::array();
        for (const auto& a : f.atom_list()) list.push_back({{"map", map_to_json(a.map)}, {"weight", a.weight}});
        return {{"kind", "atoms"}, {"atoms", list}};
    }
    const DiskFamily& d = f.disk_params();
    json j{{"kind", "disk"}, {"template", template_name(d.tmpl)}};
    if (d.tmpl != DiskTemplate::QuadraticC) j["base"] = map_to_json(d.base);
    if (d.tmpl == DiskTemplate::CoefficientDisk) j["coeff_index"] = d.coeff_index;
    j["center"] = cplx_json(d.center);
    j["radius"] = d.radius;
    if (d.inner_radius > 0.0) j["inner_radius"] = d.inner_radius;
    return j;
}

}  // namespace

Gdms parse_system(const json& j) {
    if (!j.is_object()) schema("system must be a JSON object");
    const int m = integer(field(j, "vertices"), "vertices");
    if (m < 1 || m > kMaxVertices) schema("vertices must be in 1..64");
    const json& list = field(j, "edges");
    if (!list.is_array() || list.empty()) schema("edges must be a nonempty array");
    std::vector<Edge> edges;
    for (const auto& e : list) {
        Edge ed;
        ed.from = integer(field(e, "from"), "from") - 1;
        ed.to = integer(field(e, "to"), "to") - 1;
        if (ed.from < 0 || ed.from >= m || ed.to < 0 || ed.to >= m) schema("edge endpoint out of range");
        ed.weight = number(field(e, "weight"), "weight");
        ed.family = family_from(field(e, "family"));
        edges.push_back(std::move(ed));
    }
    return Gdms::build(m, std::move(edges));
}

Gdms load_system(const std::string& path) {
    std::ifstream in(path);
    if (!in) schema("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        schema(path + ": " + e.what());
    }
    return parse_system(j);
}

json system_to_json(const Gdms& g) {
    json edges = json::array();
    for (const auto& e : g.edges())
        edges.push_back({{"from", e.from + 1}, {"to", e.to + 1}, {"weight", e.weight}, {"family", family_json(e.family)}});
    return {{"vertices", g.vertices()}, {"edges", edges}};
}

json validation_report(const Gdms& g) {
    json P = json::array();
    for (const auto& row : g.transition()) P.push_back(row);
    json cover = json::array();
    for (int v : g.cycle_cover()) cover.push_back(v + 1);
    return {{"valid", true},
            {"vertices", g.vertices()},
            {"edges", g.edges().size()},
            {"P", P},
            {"p", g.stationary()},
            {"residual", g.residual()},
            {"strongly_connected", true},
            {"cycle_cover", cover},
            {"polynomial", g.all_polynomial()},
            {"max_degree", g.max_degree()}};
}

json boxes_to_json(const BoxSet& s) {
    json out = json::array();
    for (int v = 0; v < s.vertices(); ++v) {
        json std_ = json::array(), inv = json::array();
        for (BoxKey k : s.at(v)) {
            json b = json::array({BoxGrid::ix(k), BoxGrid::iy(k)});
            (BoxGrid::chart(k) == Chart::Standard ? std_ : inv).push_back(std::move(b));
        }
        out.push_back({{"vertex", v + 1}, {"std", std_}, {"inv", inv}});
    }
    return out;
}

BoxSet boxes_from_json(const json& j) {
    if (!j.is_array()) schema("box set must be an array of vertices");
    BoxSet s(int(j.size()));
    for (const auto& layer : j) {
        const int v = integer(field(layer, "vertex"), "vertex") - 1;
        if (v < 0 || v >= s.vertices()) schema("box vertex out of range");
        for (Chart c : {Chart::Standard, Chart::Inverted}) {
            const json& list = field(layer, c == Chart::Standard ? "std" : "inv");
            if (!list.is_array()) schema("box list must be an array");
            for (const auto& b : list) {
                if (!b.is_array() || b.size() != 2) schema("box must be [ix, iy]");
                s.at(v).push_back(BoxGrid::key(v, c, integer(b[0], "ix"), integer(b[1], "iy")));
            }
        }
    }
    s.normalize();
    return s;
}

json certificate_to_json(const StabilityCertificate& c) {
    return {{"ok", c.ok},
            {"N", c.N},
            {"delta", c.delta},
            {"net_delta", c.net_delta},
            {"margin", c.margin},
            {"contraction", c.contraction},
            {"enclosures", c.enclosures},
            {"failure", c.failure},
            {"U", boxes_to_json(c.U)},
            {"W", boxes_to_json(c.W)}};
}

StabilityCertificate certificate_from_json(const json& j) {
    StabilityCertificate c;
    if (!field(j, "ok").is_boolean()) schema("ok must be boolean");
    c.ok = j.at("ok").get<bool>();
    c.N = integer(field(j, "N"), "N");
    c.delta = number(field(j, "delta"), "delta");
    c.net_delta = number(field(j, "net_delta"), "net_delta");
    c.margin = number(field(j, "margin"), "margin");
    c.contraction = number(field(j, "contraction"), "contraction");
    if (!field(j, "enclosures").is_number_unsigned()) schema("enclosures must be a count");
    c.enclosures = j.at("enclosures").get<std::size_t>();
    if (j.contains("failure") && j.at("failure").is_string()) c.failure = j.at("failure").get<std::string>();
    c.U = boxes_from_json(field(j, "U"));
    c.W = boxes_from_json(field(j, "W"));
    return c;
}

json cover_to_json(const MinimalSetCover& c) {
    json sizes = json::array();
    for (int v = 0; v < c.boxes.vertices(); ++v) sizes.push_back(c.boxes.at(v).size());
    return {{"delta", c.delta},
            {"origin", c.origin},
            {"stable", c.stable},
            {"seed", point_to_json(c.seed)},
            {"seed_vertex", c.seed_vertex + 1},
            {"boxes_per_vertex", sizes},
            {"boxes", boxes_to_json(c.boxes)}};
}

json classification_to_json(const Classification& c) {
    json w = json::array();
    for (const auto& x : c.witnesses) w.push_back({{"vertex", x.vertex + 1}, {"point", point_to_json(x.point)}});
    json j{{"kind", to_string(c.kind)}, {"max_contraction", c.max_contraction}, {"note", c.note}, {"witnesses", w}};
    if (c.kind == CoverKind::Attracting || c.certificate.N > 0) j["certificate"] = certificate_to_json(c.certificate);
    return j;
}

json verdict_to_json(const Verdict& v) {
    json sets = json::array();
    for (std::size_t i = 0; i < v.covers.size(); ++i) {
        json s = cover_to_json(v.covers[i]);
        s.erase("boxes");
        s["classification"] = classification_to_json(v.classes[i]);
        sets.push_back(std::move(s));
    }
    return {{"mean_stable", v.mean_stable},
            {"undecided", v.undecided},
            {"minimal_sets", v.covers.size()},
            {"attracting", v.attracting},
            {"degree", v.degree},
            {"loop_length", v.loop_length},
            {"bound", v.bound},
            {"bound_ok", v.bound_ok},
            {"contraction", v.contraction},
            {"sets", sets}};
}

json lyapunov_to_json(const LyapunovEstimate& e) {
    return {{"value", e.value},
            {"ci95", e.ci95_halfwidth},
            {"clamped", e.clamped},
            {"steps", e.n_steps},
            {"orbits", e.n_orbits}};
}

json bif_report_to_json(const BifReport& r) {
    json ev = json::array();
    for (const auto& e : r.evaluations)
        ev.push_back({{"s", e.s}, {"count", e.count}, {"mean_stable", e.mean_stable}, {"undecided", e.undecided}});
    return {{"lambda", cplx_json(r.lambda)},
            {"bif_points", r.points},
            {"alpha", r.alpha},
            {"bound_ok", r.bound_ok},
            {"evaluations", ev}};
}

json chaotic_to_json(const ChaoticReport& r) {
    return {{"chaotic", r.chaotic}, {"julia_fraction", r.julia_fraction}, {"cover_fraction", r.cover_fraction}};
}

void write_pgm(const std::string& path, int width, int height, const std::vector<std::uint8_t>& pixels) {
    if (width <= 0 || height <= 0 || pixels.size() != std::size_t(width) * std::size_t(height))
        throw Error(ErrorKind::InvalidArgument, "pgm size mismatch");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    out << "P5\n" << width << ' ' << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(pixels.data()), std::streamsize(pixels.size()));
}

std::vector<std::uint8_t> mask_layer(const GridMask& m, int v, Chart c) {
    const int R = m.resolution();
    std::vector<std::uint8_t> px(std::size_t(R) * std::size_t(R));
    for (int row = 0; row < R; ++row)
        for (int ix = 0; ix < R; ++ix)
            px[std::size_t(row) * std::size_t(R) + std::size_t(ix)] = m.get(CellRef{v, c, ix, R - 1 - row}) ? 255 : 0;
    return px;
}

std::vector<std::uint8_t> field_layer(const GridField& f, int v, Chart c) {
    const GridMask& g = f.geometry;
    const int R = g.resolution();
    std::vector<std::uint8_t> px(std::size_t(R) * std::size_t(R));
    for (int row = 0; row < R; ++row)
        for (int ix = 0; ix < R; ++ix) {
            const double x = std::clamp(f.values[g.index(CellRef{v, c, ix, R - 1 - row})], 0.0, 1.0);
            px[std::size_t(row) * std::size_t(R) + std::size_t(ix)] = std::uint8_t(std::lround(255.0 * x));
        }
    return px;
}

// Alternating run lengths, starting with a run of zeros (possibly empty).
json mask_to_rle(const GridMask& m) {
    json runs = json::array();
    std::uint8_t cur = 0;
    std::size_t len = 0;
    for (std::uint8_t b : m.data()) {
        const std::uint8_t bit = b ? 1 : 0;
        if (bit != cur) {
            runs.push_back(len);
            cur = bit;
            len = 0;
        }
        ++len;
    }
    runs.push_back(len);
    return {{"resolution", m.resolution()},
            {"vertices", m.vertices()},
            {"layout", "vertex,chart,iy,ix"},
            {"runs", runs}};
}

GridMask mask_from_rle(const json& j) {
    const int R = integer(field(j, "resolution"), "resolution");
    const int m = integer(field(j, "vertices"), "vertices");
    if (R < 1 || m < 1) schema("bad mask dimensions");
    GridMask mask(R, m);
    const json& runs = field(j, "runs");
    if (!runs.is_array()) schema("runs must be an array");
    std::size_t pos = 0;
    bool bit = false;
    for (const auto& r : runs) {
        if (!r.is_number_unsigned()) schema("run length must be a count");
        const std::size_t len = r.get<std::size_t>();
        if (pos + len > mask.cells()) schema("runs overflow the mask");
        for (std::size_t i = 0; i < len; ++i) mask.set(pos + i, bit);
        pos += len;
        bit = !bit;
    }
    if (pos != mask.cells()) schema("runs do not cover the mask");
    return mask;
}

void write_cloud_csv(std::ostream& os, const std::vector<std::pair<SpherePoint, int>>& cloud) {
    os << "vertex,re,im\n";
    os.precision(17);
    for (const auto& [p, v] : cloud) {
        const cplx z = p.to_complex();
        os << v + 1 << ',' << z.real() << ',' << z.imag() << '\n';
    }
}

void write_basin_csv(std::ostream& os, const BasinEstimate& b) {
    os << "point,re,im,vertex,set,value,ci95,undecided\n";
    os.precision(17);
    for (std::size_t pt = 0; pt < b.points.size(); ++pt) {
        const cplx z = b.points[pt].to_complex();
        for (int v = 0; v < b.vertices; ++v) {
            const std::size_t i = pt * std::size_t(b.vertices) + std::size_t(v);
            for (std::size_t L = 0; L < b.value.size(); ++L) {
                os << pt << ',' << z.real() << ',' << z.imag() << ',' << v + 1 << ',' << L << ',' << b.value[L][i]
                   << ',' << (b.ci95.empty() ? 0.0 : b.ci95[L][i]) << ',' << b.undecided[i] << '\n';
            }
        }
    }
}

}  // namespace mrds
