#include "rigidflow/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rigidflow {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw InputError("scenario: " + path + " " + what);
}

double need_number(const YAML::Node& n, const std::string& path) {
    if (!n || !n.IsScalar()) fail(path, "must be a number");
    try {
        return n.as<double>();
    } catch (const YAML::Exception&) {
        fail(path, "must be a number");
    }
}

double number_or(const YAML::Node& n, const std::string& path, double fallback) {
    if (!n) return fallback;
    return need_number(n, path);
}

Vec2 need_vec2(const YAML::Node& n, const std::string& path) {
    if (!n || !n.IsSequence() || n.size() != 2) fail(path, "must be a [x, y] pair");
    return {need_number(n[0], path + "[0]"), need_number(n[1], path + "[1]")};
}

std::vector<double> need_list(const YAML::Node& n, const std::string& path) {
    if (!n || !n.IsSequence()) fail(path, "must be a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(need_number(n[i], path));
    return out;
}

MotionTerm parse_term(const YAML::Node& n, const std::string& path) {
    if (!n.IsMap()) fail(path, "must be a map with a 'kind'");
    std::string kind = n["kind"] ? n["kind"].as<std::string>() : "";
    if (kind == "const" || kind == "constant") return MotionTerm::constant(need_number(n["value"], path + ".value"));
    if (kind == "poly" || kind == "polynomial") return MotionTerm::polynomial(need_list(n["coeffs"], path + ".coeffs"));
    if (kind == "sin")
        return MotionTerm::sine(need_number(n["amplitude"], path + ".amplitude"),
                                need_number(n["omega"], path + ".omega"),
                                number_or(n["phase"], path + ".phase", 0.0));
    if (kind == "cos")
        return MotionTerm::cosine(need_number(n["amplitude"], path + ".amplitude"),
                                  need_number(n["omega"], path + ".omega"),
                                  number_or(n["phase"], path + ".phase", 0.0));
    fail(path, "unknown motion primitive '" + kind + "' (const, poly, sin, cos)");
}

ScalarLaw parse_law(const YAML::Node& n, const std::string& path) {
    ScalarLaw law;
    if (!n) return law;
    if (!n.IsSequence()) fail(path, "must be a list of motion terms");
    for (std::size_t i = 0; i < n.size(); ++i)
        law.terms.push_back(parse_term(n[i], path + "[" + std::to_string(i) + "]"));
    return law;
}

}  // namespace

PrescribedMotion Scenario::motion() const {
    PrescribedMotion m;
    m.horizon = horizon;
    m.reversed = reversed;
    for (const auto& b : bodies) m.bodies.push_back(b.motion);
    return m;
}

Scenario parse_scenario(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::Exception& e) {
        throw InputError(std::string("scenario: parse error: ") + e.what());
    }
    if (!root.IsMap()) throw InputError("scenario: top level must be a mapping");

    Scenario s;
    if (root["title"]) s.title = root["title"].as<std::string>();
    s.dim = static_cast<int>(number_or(root["dim"], "dim", 2.0));
    if (s.dim != 2)
        fail("dim", "only 2 is supported by the field pipeline (3D bodies are handled statically)");

    YAML::Node cav = root["cavity"];
    if (!cav || !cav.IsMap()) fail("cavity", "is required");
    std::string ckind = cav["kind"] ? cav["kind"].as<std::string>() : "";
    if (ckind == "box") {
        Vec2 lo = need_vec2(cav["min"], "cavity.min");
        Vec2 hi = need_vec2(cav["max"], "cavity.max");
        if (!(lo.x < hi.x && lo.y < hi.y)) fail("cavity.min/max", "must satisfy min < max componentwise");
        s.cavity = Cavity::box(lo, hi);
    } else if (ckind == "disk") {
        double r = need_number(cav["radius"], "cavity.radius");
        if (!(r > 0.0)) fail("cavity.radius", "must be > 0");
        s.cavity = Cavity::disk(need_vec2(cav["center"], "cavity.center"), r);
    } else {
        fail("cavity.kind", "must be 'box' or 'disk'");
    }

    YAML::Node bodies = root["bodies"];
    if (!bodies || !bodies.IsSequence() || bodies.size() == 0) fail("bodies", "must be a nonempty list");
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        std::string bp = "bodies[" + std::to_string(i) + "]";
        const YAML::Node& bn = bodies[i];
        BodySpec spec;
        spec.name = bn["name"] ? bn["name"].as<std::string>() : ("body" + std::to_string(i));

        YAML::Node sh = bn["shape"];
        if (!sh || !sh.IsMap()) fail(bp + ".shape", "is required");
        std::string skind = sh["kind"] ? sh["kind"].as<std::string>() : "";
        if (skind == "ball") {
            double r = need_number(sh["radius"], bp + ".shape.radius");
            if (!(r > 0.0)) fail(bp + ".shape.radius", "must be > 0");
            spec.shape = BodyShape::ball2d(need_vec2(sh["center"], bp + ".shape.center"), r);
        } else if (skind == "curve") {
            FourierCurve c;
            c.center = sh["center"] ? need_vec2(sh["center"], bp + ".shape.center") : Vec2{0.0, 0.0};
            c.ax = need_list(sh["ax"], bp + ".shape.ax");
            c.bx = need_list(sh["bx"], bp + ".shape.bx");
            c.ay = need_list(sh["ay"], bp + ".shape.ay");
            c.by = need_list(sh["by"], bp + ".shape.by");
            try {
                spec.shape = BodyShape::curve2d(c);
            } catch (const GeometryError& e) {
                fail(bp + ".shape", std::string("invalid curve: ") + e.what());
            }
        } else {
            fail(bp + ".shape.kind", "must be 'ball' or 'curve'");
        }

        YAML::Node dn = bn["density"];
        if (!dn || !dn.IsMap()) fail(bp + ".density", "is required");
        std::string dkind = dn["kind"] ? dn["kind"].as<std::string>() : "";
        if (dkind == "constant") {
            double v = need_number(dn["value"], bp + ".density.value");
            if (!(v > 0.0)) fail(bp + ".density.value", "must be > 0");
            spec.density = SolidDensity::constant(v);
        } else if (dkind == "exp_tilt") {
            spec.density = SolidDensity::exp_tilt(
                number_or(dn["value"], bp + ".density.value", 1.0),
                need_number(dn["beta"], bp + ".density.beta"),
                need_vec2(dn["dir"], bp + ".density.dir"),
                dn["origin"] ? need_vec2(dn["origin"], bp + ".density.origin") : spec.shape.anchor2());
        } else {
            fail(bp + ".density.kind", "must be 'constant' or 'exp_tilt'");
        }

        YAML::Node mn = bn["motion"];
        if (mn) {
            spec.motion.velocity_x = parse_law(mn["velocity_x"], bp + ".motion.velocity_x");
            spec.motion.velocity_y = parse_law(mn["velocity_y"], bp + ".motion.velocity_y");
            spec.motion.spin = parse_law(mn["spin"], bp + ".motion.spin");
        }
        s.bodies.push_back(std::move(spec));
    }

    YAML::Node fl = root["fluid"];
    if (!fl || !fl.IsMap()) fail("fluid", "is required");
    double a = number_or(fl["eos"] ? fl["eos"]["a"] : YAML::Node(), "fluid.eos.a", 1.0);
    double gamma = number_or(fl["eos"] ? fl["eos"]["gamma"] : YAML::Node(), "fluid.eos.gamma", 1.4);
    if (!(a > 0.0)) fail("fluid.eos.a", "must be > 0");
    if (!(gamma >= 1.0)) fail("fluid.eos.gamma", "must be >= 1");
    s.eos = PressureLaw(a, gamma);
    s.fluid_mass = need_number(fl["mass"], "fluid.mass");
    if (!(s.fluid_mass > 0.0)) fail("fluid.mass", "must be > 0");

    YAML::Node tm = root["time"];
    if (!tm || !tm.IsMap()) fail("time", "is required");
    s.horizon = need_number(tm["horizon"], "time.horizon");
    if (!(s.horizon > 0.0)) fail("time.horizon", "must be > 0");
    s.slices = static_cast<int>(number_or(tm["slices"], "time.slices", 64.0));
    if (s.slices < 2) fail("time.slices", "must be >= 2");

    YAML::Node num = root["numerics"];
    s.mesh_h = number_or(num ? num["mesh_h"] : YAML::Node(), "numerics.mesh_h", 0.05);
    if (!(s.mesh_h > 0.0)) fail("numerics.mesh_h", "must be > 0");
    s.cutoff_margin = number_or(num ? num["cutoff_margin"] : YAML::Node(), "numerics.cutoff_margin", 0.3);
    if (!(s.cutoff_margin > 0.0)) fail("numerics.cutoff_margin", "must be > 0");

    YAML::Node tol = root["tolerances"];
    if (tol && tol.IsMap()) {
        auto opt = [&](const char* key) -> double {
            YAML::Node v = tol[key];
            if (!v) return -1.0;
            if (v.IsScalar() && v.as<std::string>() == "auto") return -1.0;
            double x = need_number(v, std::string("tolerances.") + key);
            if (!(x > 0.0)) fail(std::string("tolerances.") + key, "must be > 0 or 'auto'");
            return x;
        };
        s.tol.compat = opt("compat");
        s.tol.c4_margin = opt("c4_margin");
        s.tol.energy_step = opt("energy_step");
        double nr = opt("newton_rel");
        if (nr > 0.0) s.tol.newton_rel = nr;
        double wr = opt("wrench_rel");
        if (wr > 0.0) s.tol.wrench_rel = wr;
    }

    s.seed = static_cast<std::uint64_t>(number_or(root["seed"], "seed", 1.0));
    if (root["reversed"]) s.reversed = root["reversed"].as<bool>();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("scenario: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

Scenario time_reverse_scenario(const Scenario& s) {
    Scenario r = s;
    r.reversed = !s.reversed;
    return r;
}

namespace {

ordered_json term_json(const MotionTerm& t) {
    ordered_json j;
    switch (t.kind) {
        case MotionTerm::Kind::Constant:
            j["kind"] = "const";
            j["value"] = t.value;
            break;
        case MotionTerm::Kind::Polynomial:
            j["kind"] = "poly";
            j["coeffs"] = t.coeffs;
            break;
        case MotionTerm::Kind::Sin:
        case MotionTerm::Kind::Cos:
            j["kind"] = t.kind == MotionTerm::Kind::Sin ? "sin" : "cos";
            j["amplitude"] = t.amplitude;
            j["omega"] = t.omega;
            j["phase"] = t.phase;
            break;
    }
    return j;
}

ordered_json law_json(const ScalarLaw& law) {
    ordered_json j = ordered_json::array();
    for (const auto& t : law.terms) j.push_back(term_json(t));
    return j;
}

}  // namespace

std::string scenario_canonical_dump(const Scenario& s) {
    ordered_json j;
    j["title"] = s.title;
    j["dim"] = s.dim;
    if (s.cavity.kind == Cavity::Kind::Box) {
        j["cavity"] = {{"kind", "box"},
                       {"min", {s.cavity.lo.x, s.cavity.lo.y}},
                       {"max", {s.cavity.hi.x, s.cavity.hi.y}}};
    } else {
        j["cavity"] = {{"kind", "disk"},
                       {"center", {s.cavity.center.x, s.cavity.center.y}},
                       {"radius", s.cavity.radius}};
    }
    j["bodies"] = ordered_json::array();
    for (const auto& b : s.bodies) {
        ordered_json bj;
        bj["name"] = b.name;
        if (b.shape.kind == BodyShape::Kind::Ball2D) {
            bj["shape"] = {{"kind", "ball"},
                           {"center", {b.shape.center2.x, b.shape.center2.y}},
                           {"radius", b.shape.radius}};
        } else {
            bj["shape"] = {{"kind", "curve"},
                           {"center", {b.shape.curve.center.x, b.shape.curve.center.y}},
                           {"ax", b.shape.curve.ax},
                           {"bx", b.shape.curve.bx},
                           {"ay", b.shape.curve.ay},
                           {"by", b.shape.curve.by}};
        }
        switch (b.density.kind) {
            case SolidDensity::Kind::Constant:
                bj["density"] = {{"kind", "constant"}, {"value", b.density.value}};
                break;
            case SolidDensity::Kind::ExpTilt:
                bj["density"] = {{"kind", "exp_tilt"},
                                 {"value", b.density.value},
                                 {"beta", b.density.beta},
                                 {"dir", {b.density.dir.x, b.density.dir.y}},
                                 {"origin", {b.density.x0.x, b.density.x0.y}}};
                break;
            case SolidDensity::Kind::Custom:
                bj["density"] = {{"kind", "custom"}};
                break;
        }
        bj["motion"] = {{"velocity_x", law_json(b.motion.velocity_x)},
                        {"velocity_y", law_json(b.motion.velocity_y)},
                        {"spin", law_json(b.motion.spin)}};
        j["bodies"].push_back(bj);
    }
    j["fluid"] = {{"eos", {{"a", s.eos.a}, {"gamma", s.eos.gamma}}}, {"mass", s.fluid_mass}};
    j["time"] = {{"horizon", s.horizon}, {"slices", s.slices}};
    j["numerics"] = {{"mesh_h", s.mesh_h}, {"cutoff_margin", s.cutoff_margin}};
    j["tolerances"] = {{"compat", s.tol.compat},     {"c4_margin", s.tol.c4_margin},
                       {"energy_step", s.tol.energy_step}, {"newton_rel", s.tol.newton_rel},
                       {"wrench_rel", s.tol.wrench_rel}};
    j["seed"] = s.seed;
    j["reversed"] = s.reversed;
    return j.dump();
}

std::uint64_t scenario_hash(const Scenario& s) {
    std::string dump = scenario_canonical_dump(s);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace rigidflow
