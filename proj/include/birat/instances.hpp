#pragma once
// Built-in map instances: components, critical factors, blow-up chart
// towers, affine index recursions and (where available) Picard data.

#include "birmap.hpp"
#include "chart.hpp"
#include "picard.hpp"
#include "sequence.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace birat {

// one hop of the exceptional orbit: the map sends the source surface
// (a contracted plane, or the u = 0 surface of a chart) into the target chart
struct TransferStep {
    std::string source_chart;  // empty when the source is a plane
    Polynomial plane;          // linear form; only read when source_chart is empty
    std::string target_chart;
};

struct InstanceBundle {
    BirationalMap map;
    ChartSet charts;
    AffineSystem affine;
    std::optional<PicardLattice> picard;
    Polynomial default_seed;
    int default_nmax = 8;
    // chart whose index matches the pull-back exponent of each critical
    // factor; empty string when the factor never appears
    std::vector<std::string> factor_charts;
    std::optional<std::string> alpha_chart;  // report d - nu at this chart
    std::vector<TransferStep> transfers;
    bool darboux_bound_is_degree = true;  // default index bound: degree, or 1
    std::map<std::string, Rational> parameters;
};

namespace detail {

inline Polynomial default_seed_poly() {
    Polynomial p = Polynomial::variable(4, 0);
    p = p + Polynomial::variable(4, 1).scaled(Rational(3));
    p = p + Polynomial::variable(4, 2).scaled(Rational(5));
    p = p + Polynomial::variable(4, 3).scaled(Rational(7));
    return p;
}

inline QMat int_matrix(const std::vector<std::vector<int>>& rows) {
    QMat m;
    for (const auto& r : rows) {
        QVec row;
        for (int x : r) row.push_back(Rational(x));
        m.push_back(std::move(row));
    }
    return m;
}

}  // namespace detail

// ---- quadratic map fixing a pencil of dP1 surfaces ---------------------------

inline InstanceBundle make_dp1_ercolani(const Rational& gamma = Rational(2)) {
    const Polynomial x = Polynomial::variable(4, 0), y = Polynomial::variable(4, 1),
                     z = Polynomial::variable(4, 2), w = Polynomial::variable(4, 3);
    const Polynomial s = y + z - w;
    const Polynomial t = x + z - w;

    InstanceBundle b;
    b.parameters["gamma"] = gamma;
    b.map = make_birational_map(
        "dp1-ercolani", {"x", "y", "z", "w"},
        {y * s, x * w + (z * z).scaled(gamma), z * s, s * s}, {w, s},
        {y * w - (z * z).scaled(gamma), x * t, z * t, t * t});

    const Polynomial u3 = Polynomial::variable(3, 0);
    const Polynomial zero3 = Polynomial::zero(3);
    b.charts.charts.push_back(compose_elementary(
        "phi2", PointChartSpec{1, {Rational(0), Rational(0), Rational(0)}, {0, 1, 2}},
        {ElementaryStep::curve_w(zero3)}));
    b.charts.charts.push_back(compose_elementary(
        "phi5", PointChartSpec{0, {Rational(0), Rational(0), Rational(1)}, {1, 0, 2}},
        {ElementaryStep::curve_w(Polynomial::constant(3, Rational(1))),
         ElementaryStep::curve_v(u3.scaled(gamma)), ElementaryStep::curve_v(zero3)}));
    b.charts.charts.push_back(compose_elementary(
        "phi8", PointChartSpec{3, {Rational(0), Rational(1), Rational(0)}, {1, 2, 0}},
        {ElementaryStep::curve_w(Polynomial::constant(3, Rational(-1))),
         ElementaryStep::curve_v(u3.scaled(-gamma)), ElementaryStep::curve_v(zero3)}));
    b.charts.charts.push_back(compose_elementary(
        "phi10", PointChartSpec{0, {Rational(0), Rational(0), Rational(0)}, {1, 0, 2}},
        {ElementaryStep::curve_w(zero3)}));

    b.affine.labels = {"d", "phi2", "phi5", "phi8", "phi10"};
    b.affine.matrix = detail::int_matrix({{2, -1, 0, 0, 0},
                                          {0, 0, 1, 0, 0},
                                          {0, 0, 0, 1, 0},
                                          {2, -2, 0, 0, 1},
                                          {2, -1, 0, 0, 0}});
    b.factor_charts = {"", "phi2"};
    b.alpha_chart = "phi10";
    b.transfers = {{"", s, "phi2"},
                   {"phi2", Polynomial::zero(4), "phi5"},
                   {"phi5", Polynomial::zero(4), "phi8"},
                   {"phi8", Polynomial::zero(4), "phi10"}};
    b.default_seed = detail::default_seed_poly();
    b.default_nmax = 8;

    // pushforward on the stable lift, basis H, F1..F11 of total transforms
    std::vector<std::string> basis{"H"};
    for (int i = 1; i <= 11; ++i) basis.push_back("F" + std::to_string(i));
    QMat m(12, QVec(12, Rational(0)));
    auto col = [&m](int j, std::initializer_list<std::pair<int, int>> entries) {
        for (auto [i, v] : entries) m[i][j] = Rational(v);
    };
    col(0, {{0, 2}, {1, -1}, {2, -1}, {3, -1}, {5, -1}});
    col(1, {{4, 1}});
    col(2, {{5, 1}});
    col(3, {{6, 1}});
    col(4, {{7, 1}});
    col(5, {{8, 1}});
    col(6, {{9, 1}, {11, 1}});
    col(7, {{9, 1}});
    col(8, {{10, 1}});
    col(9, {{0, 1}, {2, -1}, {3, -1}, {5, -1}});
    col(10, {{0, 1}, {1, -1}, {3, -1}, {5, -1}});
    col(11, {{3, 1}, {4, -1}});
    b.picard = make_picard_lattice(std::move(basis), std::move(m));
    return b;
}

// ---- cubic-growth map inflated from a QRT root -------------------------------

inline InstanceBundle make_inflated_qrt(const Rational& a = Rational(1),
                                        const Rational& bb = Rational(1),
                                        const Rational& c = Rational(1),
                                        const Rational& d = Rational(1)) {
    if (d.is_zero()) throw std::invalid_argument("parameter d must be nonzero");
    if ((a * d + c * c - bb * c).is_zero())
        throw std::invalid_argument("parameters must satisfy a*d + c^2 - b*c != 0");

    const Polynomial x = Polynomial::variable(4, 0), y = Polynomial::variable(4, 1),
                     z = Polynomial::variable(4, 2), w = Polynomial::variable(4, 3);
    const Polynomial xy = x + y, yz = y + z;
    const Polynomial k = xy.scaled(d) + w.scaled(c);
    const Polynomial ki = yz.scaled(d) + w.scaled(c);
    const Polynomial f1 = (xy * (xy.scaled(Rational(2)) + z)).scaled(-d) + (w * xy).scaled(-bb) +
                          (w * (xy + z)).scaled(-c) + (w * w).scaled(-a);
    const Polynomial g3 = (yz * (x + yz.scaled(Rational(2)))).scaled(-d) + (w * yz).scaled(-bb) +
                          (w * (x + yz)).scaled(-c) + (w * w).scaled(-a);

    InstanceBundle b;
    b.parameters = {{"a", a}, {"b", bb}, {"c", c}, {"d", d}};
    b.map = make_birational_map("inflated-qrt", {"x", "y", "z", "w"}, {f1, x * k, y * k, w * k},
                                {k}, {y * ki, z * ki, g3, w * ki});

    const Rational cd = c / d;
    const Rational e = (a * d + c * c - bb * c) / (d * d);
    const Rational b2c = (bb - c - c) / d;

    const Polynomial v3 = Polynomial::variable(3, 1);
    auto cst = [](const Rational& r) { return Polynomial::constant(3, r); };
    b.charts.charts.push_back(compose_elementary(
        "phi3", PointChartSpec{0, {Rational(0), Rational(0), Rational(0)}, {1, 2, 0}},
        {ElementaryStep::curve_w(-v3 - cst(cd)), ElementaryStep::curve_w(cst(-e))}));
    b.charts.charts.push_back(compose_elementary(
        "phi6", PointChartSpec{1, {Rational(-2), Rational(0), Rational(0)}, {2, 1, 0}},
        {ElementaryStep::curve_w(-v3 - cst(b2c)), ElementaryStep::curve_w(Polynomial::zero(3))}));
    b.charts.charts.push_back(compose_elementary(
        "phi9", PointChartSpec{2, {Rational(2), Rational(-2), Rational(0)}, {1, 2, 0}},
        {ElementaryStep::curve_w(-v3 - cst(cd)), ElementaryStep::curve_w(cst(e))}));
    b.charts.charts.push_back(compose_elementary(
        "phi10", PointChartSpec{1, {Rational(-1), Rational(-1), Rational(0)}, {1, 2, 0}}, {}));

    b.affine.labels = {"d", "phi3", "phi6", "phi9", "phi10"};
    b.affine.matrix = detail::int_matrix({{2, -1, 0, 0, 0},
                                          {0, 0, 1, 0, 0},
                                          {0, 0, 0, 1, 0},
                                          {2, -2, 0, 0, 1},
                                          {1, -1, 0, 0, 1}});
    b.factor_charts = {"phi3"};
    b.alpha_chart = "phi10";
    b.transfers = {{"", k, "phi3"},
                   {"phi3", Polynomial::zero(4), "phi6"},
                   {"phi6", Polynomial::zero(4), "phi9"},
                   {"phi9", Polynomial::zero(4), "phi10"}};
    b.default_seed = detail::default_seed_poly();
    b.default_nmax = 8;
    return b;
}

// ---- Kahan discretization of the Euler top -----------------------------------

inline InstanceBundle make_khk_euler(const Rational& gamma = Rational(2)) {
    std::vector<Polynomial> x;
    for (int i = 0; i < 4; ++i) x.push_back(Polynomial::variable(4, i));

    const Polynomial p24 = x[1] * x[3], p13 = x[0] * x[2];
    const Polynomial f1 = p24 * (x[0] - x[2]) + (p13 * (x[1] + x[3])).scaled(gamma);
    const Polynomial f2 = p13 * (x[1] - x[3]) + (p24 * (x[0] + x[2])).scaled(gamma);
    const Polynomial f3 = p24 * (x[2] - x[0]) + (p13 * (x[1] + x[3])).scaled(gamma);
    const Polynomial f4 = p13 * (x[3] - x[1]) + (p24 * (x[0] + x[2])).scaled(gamma);

    InstanceBundle b;
    b.parameters["gamma"] = gamma;
    b.map = make_birational_map("khk-euler", {"x1", "x2", "x3", "x4"}, {f1, f2, f3, f4},
                                {x[0], x[1], x[2], x[3]});

    QMat l(4, QVec(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) l[i][j] = (i + j) % 2 == 1 ? gamma : Rational(i == j ? -1 : 1);
    {
        QMat probe = l;
        if (rref(probe).size() != 4)
            throw std::invalid_argument("gamma makes the vertex frame degenerate");
    }

    for (int i = 0; i < 4; ++i) {
        Chart base = compose_elementary(
            "phi" + std::to_string(i + 1),
            PointChartSpec{i, {Rational(0), Rational(0), Rational(0)}, {0, 1, 2}}, {});
        b.charts.charts.push_back(apply_linear(base, l));
    }
    for (int i = 0; i < 4; ++i)
        b.charts.charts.push_back(compose_elementary(
            "phi" + std::to_string(i + 5),
            PointChartSpec{i, {Rational(0), Rational(0), Rational(0)}, {0, 1, 2}}, {}));

    b.affine.labels = {"d"};
    for (int i = 1; i <= 8; ++i) b.affine.labels.push_back("phi" + std::to_string(i));
    QMat m(9, QVec(9, Rational(0)));
    m[0][0] = Rational(3);
    for (int j = 1; j <= 4; ++j) m[0][j] = Rational(-1);
    for (int i = 1; i <= 4; ++i) m[i][i + 4] = Rational(1);
    for (int i = 5; i <= 8; ++i) {
        m[i][0] = Rational(2);
        for (int j = 1; j <= 4; ++j)
            if (j != i - 4) m[i][j] = Rational(-1);
    }
    b.affine.matrix = std::move(m);
    b.factor_charts = {"phi1", "phi2", "phi3", "phi4"};
    for (int i = 1; i <= 4; ++i) {
        b.transfers.push_back({"", x[i - 1], "phi" + std::to_string(i)});
        b.transfers.push_back(
            {"phi" + std::to_string(i), Polynomial::zero(4), "phi" + std::to_string(i + 4)});
    }
    b.darboux_bound_is_degree = false;
    b.default_seed = detail::default_seed_poly();
    b.default_nmax = 6;
    return b;
}

// ---- registry -----------------------------------------------------------------

inline std::vector<std::string> instance_names() {
    return {"khk-euler", "dp1-ercolani", "inflated-qrt"};
}

inline InstanceBundle make_instance(const std::string& name,
                                    const std::map<std::string, Rational>& params = {}) {
    auto get = [&params](const char* key, Rational fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    auto reject_unknown = [&params](std::initializer_list<const char*> known) {
        for (const auto& [key, value] : params) {
            (void)value;
            bool ok = false;
            for (const char* k : known) ok = ok || key == k;
            if (!ok) throw std::invalid_argument("unknown parameter " + key);
        }
    };
    if (name == "dp1-ercolani") {
        reject_unknown({"gamma"});
        return make_dp1_ercolani(get("gamma", Rational(2)));
    }
    if (name == "inflated-qrt") {
        reject_unknown({"a", "b", "c", "d"});
        return make_inflated_qrt(get("a", Rational(1)), get("b", Rational(1)),
                                 get("c", Rational(1)), get("d", Rational(1)));
    }
    if (name == "khk-euler") {
        reject_unknown({"gamma"});
        return make_khk_euler(get("gamma", Rational(2)));
    }
    throw std::invalid_argument("unknown instance " + name);
}

// default seed, the coordinate planes, and the critical factors (deduplicated)
inline std::vector<Polynomial> recurrence_seed_family(const InstanceBundle& b) {
    std::vector<Polynomial> seeds{b.default_seed};
    auto push = [&seeds](const Polynomial& p) {
        for (const Polynomial& q : seeds)
            if (q == p) return;
        seeds.push_back(p);
    };
    for (int i = 0; i < 4; ++i) push(Polynomial::variable(4, i));
    for (const Polynomial& k : b.map.critical_factors) push(k);
    return seeds;
}

struct TransferResult {
    std::string source, target;
    TransferCheck check;
    bool ok = false;
};

// run the exceptional orbit of the bundle: every hop must be defined, reach
// the target divisor with positive multiplicity, and not collapse to a point
inline std::vector<TransferResult> run_transfers(const InstanceBundle& b) {
    std::vector<TransferResult> out;
    for (const TransferStep& st : b.transfers) {
        TransferResult r;
        std::vector<Polynomial> source;
        if (st.source_chart.empty()) {
            source = plane_source(st.plane);
            r.source = "{" + to_string(st.plane, b.map.coordinates) + " = 0}";
        } else {
            source = b.charts.at(st.source_chart).param;
            r.source = st.source_chart;
        }
        r.target = st.target_chart;
        r.check = exceptional_image_check(b.map.components, source, b.charts.at(st.target_chart));
        r.ok = r.check.defined && r.check.target_valuation >= 1 && !r.check.constant_image;
        out.push_back(std::move(r));
    }
    return out;
}

// invariant expected of every loaded bundle: the jacobian factors exactly
// through the declared critical factors
inline void check_bundle(const InstanceBundle& b) {
    CriticalReport report = validate_critical_factors(b.map);
    if (!report.jacobian_accounted)
        throw std::invalid_argument("critical factors do not account for the jacobian of " +
                                    b.map.name);
    if (b.factor_charts.size() != b.map.critical_factors.size())
        throw std::invalid_argument("factor chart list does not match the critical factors");
    for (const std::string& name : b.factor_charts)
        if (!name.empty() && !b.charts.contains(name))
            throw std::invalid_argument("factor chart " + name + " is not part of the bundle");
    if (b.alpha_chart && !b.charts.contains(*b.alpha_chart))
        throw std::invalid_argument("alpha chart " + *b.alpha_chart + " is not part of the bundle");
    if (b.affine.labels.empty() || b.affine.labels[0] != "d")
        throw std::invalid_argument("affine system must lead with the degree row");
    for (size_t i = 1; i < b.affine.labels.size(); ++i)
        if (!b.charts.contains(b.affine.labels[i]))
            throw std::invalid_argument("affine label " + b.affine.labels[i] +
                                        " is not part of the bundle");
}

// paper-style joint fit: affine degree tails (n >= 1) over the seed family
inline std::optional<LinearRecurrence> instance_recurrence(const InstanceBundle& b,
                                                           int terms = 22, int max_order = 8) {
    std::vector<std::vector<Rational>> tails;
    std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
    for (const Polynomial& seed : recurrence_seed_family(b)) {
        QVec st = orbit_initial_state(b.charts, order, seed);
        std::vector<QVec> states = run_affine(b.affine, st, terms);
        std::vector<Rational> d;
        for (size_t n = 1; n < states.size(); ++n) d.push_back(states[n][0]);
        tails.push_back(std::move(d));
    }
    return fit_common_recurrence(tails, max_order);
}

}  // namespace birat
