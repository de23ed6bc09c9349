#pragma once
// JSON instance bundles: a fully resolved map + chart tower + recursion
// description that round-trips through load/save. Numbers are carried as
// exact strings (plain integers are accepted too).

#include "instances.hpp"

#if __has_include(<nlohmann/json.hpp>)
#include <nlohmann/json.hpp>
#else
#include <json.hpp>
#endif

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace birat {

using jdoc = nlohmann::ordered_json;

namespace detail {

const std::vector<std::string> kLocalNames{"u", "v", "w"};

inline jdoc rational_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const jdoc& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw std::invalid_argument(where + ": expected an integer or a rational string");
}

inline jdoc poly_json(const Polynomial& p, const std::vector<std::string>& names) {
    return to_string(p, names);
}

inline Polynomial poly_from_json(const jdoc& j, const std::vector<std::string>& names,
                                 const std::string& where) {
    if (!j.is_string()) throw std::invalid_argument(where + ": expected a polynomial string");
    return parse_polynomial(j.get<std::string>(), names);
}

inline const char* assign_name(int a) {
    switch (a) {
        case 0: return "u";
        case 1: return "u*v";
        default: return "u*w";
    }
}

inline int assign_from_json(const jdoc& j, const std::string& where) {
    if (!j.is_string()) throw std::invalid_argument(where + ": expected \"u\", \"u*v\" or \"u*w\"");
    std::string s = j.get<std::string>();
    if (s == "u") return 0;
    if (s == "u*v" || s == "uv") return 1;
    if (s == "u*w" || s == "uw") return 2;
    throw std::invalid_argument(where + ": unknown slot assignment " + s);
}

inline jdoc matrix_json(const QMat& m) {
    jdoc rows = jdoc::array();
    for (const QVec& r : m) {
        jdoc row = jdoc::array();
        for (const Rational& x : r) row.push_back(rational_json(x));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline QMat matrix_from_json(const jdoc& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument(where + ": expected a matrix");
    QMat m;
    for (const jdoc& row : j) {
        if (!row.is_array()) throw std::invalid_argument(where + ": expected a matrix");
        QVec r;
        for (const jdoc& x : row) r.push_back(rational_from_json(x, where));
        if (!m.empty() && r.size() != m[0].size())
            throw std::invalid_argument(where + ": ragged matrix");
        m.push_back(std::move(r));
    }
    return m;
}

inline jdoc chart_json(const Chart& c, const std::vector<std::string>& coords) {
    if (!c.recipe) throw std::invalid_argument("chart " + c.name + " carries no build recipe");
    const ChartRecipe& rec = *c.recipe;
    jdoc j;
    j["name"] = c.name;
    jdoc start;
    start["patch"] = coords[rec.spec.patch];
    jdoc center = jdoc::array();
    for (const Rational& x : rec.spec.center) center.push_back(rational_json(x));
    start["center"] = std::move(center);
    jdoc assign = jdoc::array();
    for (int a : rec.spec.assign) assign.push_back(assign_name(a));
    start["assign"] = std::move(assign);
    j["start"] = std::move(start);

    jdoc steps = jdoc::array();
    for (const ElementaryStep& st : rec.steps) {
        jdoc s;
        switch (st.kind) {
            case ElementaryStep::Kind::point:
                s["type"] = "point";
                s["cv"] = rational_json(st.cv);
                s["cw"] = rational_json(st.cw);
                break;
            case ElementaryStep::Kind::curve_v:
                s["type"] = "curveV";
                s["graph"] = poly_json(st.graph, kLocalNames);
                break;
            case ElementaryStep::Kind::curve_w:
                s["type"] = "curveW";
                s["graph"] = poly_json(st.graph, kLocalNames);
                break;
        }
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    if (rec.post_linear) j["postLinear"] = matrix_json(*rec.post_linear);

    // redundant but human-readable; cross-checked on load
    jdoc param = jdoc::array();
    for (const Polynomial& p : c.param) param.push_back(poly_json(p, kLocalNames));
    j["parametrization"] = std::move(param);
    return j;
}

inline int coord_index(const jdoc& j, const std::vector<std::string>& coords,
                       const std::string& where) {
    if (!j.is_string()) throw std::invalid_argument(where + ": expected a coordinate name");
    std::string s = j.get<std::string>();
    for (size_t i = 0; i < coords.size(); ++i)
        if (coords[i] == s) return static_cast<int>(i);
    throw std::invalid_argument(where + ": unknown coordinate " + s);
}

inline Chart chart_from_json(const jdoc& j, const std::vector<std::string>& coords) {
    std::string name = j.at("name").get<std::string>();
    const jdoc& start = j.at("start");
    PointChartSpec spec;
    spec.patch = coord_index(start.at("patch"), coords, name + ".start.patch");
    const jdoc& center = start.at("center");
    const jdoc& assign = start.at("assign");
    if (!center.is_array() || center.size() != 3 || !assign.is_array() || assign.size() != 3)
        throw std::invalid_argument(name + ": start.center and start.assign need 3 entries");
    for (int i = 0; i < 3; ++i) {
        spec.center[i] = rational_from_json(center[i], name + ".start.center");
        spec.assign[i] = assign_from_json(assign[i], name + ".start.assign");
    }
    std::vector<ElementaryStep> steps;
    for (const jdoc& s : j.value("steps", jdoc::array())) {
        std::string type = s.at("type").get<std::string>();
        if (type == "point")
            steps.push_back(ElementaryStep::point(rational_from_json(s.at("cv"), name + ".cv"),
                                                  rational_from_json(s.at("cw"), name + ".cw")));
        else if (type == "curveV")
            steps.push_back(
                ElementaryStep::curve_v(poly_from_json(s.at("graph"), kLocalNames, name)));
        else if (type == "curveW")
            steps.push_back(
                ElementaryStep::curve_w(poly_from_json(s.at("graph"), kLocalNames, name)));
        else
            throw std::invalid_argument(name + ": unknown step type " + type);
    }
    Chart c = compose_elementary(name, spec, steps);
    if (j.contains("postLinear"))
        c = apply_linear(c, matrix_from_json(j["postLinear"], name + ".postLinear"));
    if (j.contains("parametrization")) {
        const jdoc& param = j["parametrization"];
        if (!param.is_array() || param.size() != 4)
            throw std::invalid_argument(name + ": parametrization needs 4 entries");
        for (int i = 0; i < 4; ++i)
            if (poly_from_json(param[i], kLocalNames, name) != c.param[i])
                throw std::invalid_argument(name +
                                            ": stored parametrization disagrees with the recipe");
    }
    return c;
}

}  // namespace detail

inline jdoc bundle_to_json(const InstanceBundle& b) {
    const std::vector<std::string>& coords = b.map.coordinates;
    jdoc j;
    j["name"] = b.map.name;
    j["coordinates"] = coords;
    if (!b.parameters.empty()) {
        jdoc params;
        for (const auto& [key, value] : b.parameters) params[key] = detail::rational_json(value);
        j["parameters"] = std::move(params);
    }

    jdoc map;
    jdoc comps = jdoc::array();
    for (const Polynomial& f : b.map.components) comps.push_back(detail::poly_json(f, coords));
    map["components"] = std::move(comps);
    jdoc crit = jdoc::array();
    for (const Polynomial& k : b.map.critical_factors) crit.push_back(detail::poly_json(k, coords));
    map["criticalFactors"] = std::move(crit);
    if (b.map.has_inverse()) {
        jdoc inv = jdoc::array();
        for (const Polynomial& g : b.map.inverse_components)
            inv.push_back(detail::poly_json(g, coords));
        map["inverse"] = std::move(inv);
    }
    j["map"] = std::move(map);

    jdoc charts = jdoc::array();
    for (const Chart& c : b.charts.charts) charts.push_back(detail::chart_json(c, coords));
    j["charts"] = std::move(charts);

    jdoc affine;
    affine["labels"] = b.affine.labels;
    affine["matrix"] = detail::matrix_json(b.affine.matrix);
    j["affine"] = std::move(affine);

    if (b.picard) {
        jdoc picard;
        picard["basis"] = b.picard->basis;
        picard["pushforward"] = detail::matrix_json(b.picard->pushforward);
        j["picard"] = std::move(picard);
    }

    jdoc transfers = jdoc::array();
    for (const TransferStep& t : b.transfers) {
        jdoc step;
        if (t.source_chart.empty())
            step["plane"] = detail::poly_json(t.plane, coords);
        else
            step["sourceChart"] = t.source_chart;
        step["target"] = t.target_chart;
        transfers.push_back(std::move(step));
    }
    j["transfers"] = std::move(transfers);

    jdoc factor_charts = jdoc::array();
    for (const std::string& name : b.factor_charts)
        factor_charts.push_back(name.empty() ? jdoc(nullptr) : jdoc(name));
    j["factorCharts"] = std::move(factor_charts);
    if (b.alpha_chart) j["alphaChart"] = *b.alpha_chart;
    j["darbouxBound"] = b.darboux_bound_is_degree ? "degree" : "one";

    jdoc defaults;
    defaults["seed"] = detail::poly_json(b.default_seed, coords);
    defaults["nmax"] = b.default_nmax;
    j["defaults"] = std::move(defaults);
    return j;
}

inline InstanceBundle bundle_from_json(const jdoc& j) {
    std::string name = j.at("name").get<std::string>();
    std::vector<std::string> coords = j.at("coordinates").get<std::vector<std::string>>();
    if (coords.size() != 4) throw std::invalid_argument("need exactly 4 coordinates");

    InstanceBundle b;
    if (j.contains("parameters"))
        for (const auto& [key, value] : j["parameters"].items())
            b.parameters[key] = detail::rational_from_json(value, "parameters." + key);

    const jdoc& map = j.at("map");
    std::vector<Polynomial> comps, crit, inv;
    for (const jdoc& f : map.at("components"))
        comps.push_back(detail::poly_from_json(f, coords, "map.components"));
    for (const jdoc& k : map.value("criticalFactors", jdoc::array()))
        crit.push_back(detail::poly_from_json(k, coords, "map.criticalFactors"));
    for (const jdoc& g : map.value("inverse", jdoc::array()))
        inv.push_back(detail::poly_from_json(g, coords, "map.inverse"));
    b.map = make_birational_map(name, coords, comps, crit, inv);

    for (const jdoc& c : j.value("charts", jdoc::array()))
        b.charts.charts.push_back(detail::chart_from_json(c, coords));

    const jdoc& affine = j.at("affine");
    b.affine.labels = affine.at("labels").get<std::vector<std::string>>();
    b.affine.matrix = detail::matrix_from_json(affine.at("matrix"), "affine.matrix");
    if (b.affine.matrix.size() != b.affine.labels.size() ||
        b.affine.matrix[0].size() != b.affine.labels.size())
        throw std::invalid_argument("affine matrix must be square over the labels");

    if (j.contains("picard")) {
        const jdoc& picard = j["picard"];
        b.picard = make_picard_lattice(picard.at("basis").get<std::vector<std::string>>(),
                                       detail::matrix_from_json(picard.at("pushforward"),
                                                                "picard.pushforward"));
    }

    for (const jdoc& t : j.value("transfers", jdoc::array())) {
        TransferStep step;
        if (t.contains("sourceChart")) {
            step.source_chart = t["sourceChart"].get<std::string>();
            step.plane = Polynomial::zero(4);
        } else {
            step.plane = detail::poly_from_json(t.at("plane"), coords, "transfers.plane");
        }
        step.target_chart = t.at("target").get<std::string>();
        b.transfers.push_back(std::move(step));
    }

    for (const jdoc& f : j.value("factorCharts", jdoc::array()))
        b.factor_charts.push_back(f.is_null() ? std::string() : f.get<std::string>());
    if (j.contains("alphaChart")) b.alpha_chart = j["alphaChart"].get<std::string>();
    if (j.contains("darbouxBound")) {
        std::string rule = j["darbouxBound"].get<std::string>();
        if (rule != "degree" && rule != "one")
            throw std::invalid_argument("darbouxBound must be \"degree\" or \"one\"");
        b.darboux_bound_is_degree = rule == "degree";
    }

    const jdoc& defaults = j.at("defaults");
    b.default_seed = detail::poly_from_json(defaults.at("seed"), coords, "defaults.seed");
    b.default_nmax = defaults.at("nmax").get<int>();

    check_bundle(b);
    return b;
}

inline InstanceBundle load_bundle_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    jdoc j;
    try {
        in >> j;
    } catch (const jdoc::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return bundle_from_json(j);
}

inline void save_bundle_file(const InstanceBundle& b, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
    out << bundle_to_json(b).dump(2) << '\n';
}

// a name from the registry, or a path to a resolved bundle file
inline InstanceBundle load_bundle(const std::string& name_or_path,
                                  const std::map<std::string, Rational>& params = {}) {
    for (const std::string& known : instance_names())
        if (known == name_or_path) {
            InstanceBundle b = make_instance(name_or_path, params);
            check_bundle(b);
            return b;
        }
    if (name_or_path.find('.') == std::string::npos &&
        name_or_path.find('/') == std::string::npos)
        throw std::invalid_argument("unknown instance " + name_or_path + "; known: khk-euler, " +
                                    "dp1-ercolani, inflated-qrt, or a .json bundle path");
    if (!params.empty())
        throw std::invalid_argument("--param applies to built-in instances only; " +
                                    std::string("bundle files are already resolved"));
    return load_bundle_file(name_or_path);
}

}  // namespace birat
