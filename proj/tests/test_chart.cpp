#include <birat/chart.hpp>
#include <birat/instances.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace birat;

namespace {

const std::vector<std::string> kXYZW = {"x", "y", "z", "w"};
const std::vector<std::string> kUVW = {"u", "v", "w"};

Polynomial P4(const std::string& t) { return parse_polynomial(t, kXYZW); }
Polynomial P3(const std::string& t) { return parse_polynomial(t, kUVW); }

Polynomial random_poly(std::mt19937_64& rng, int nvars, int maxdeg, int maxterms) {
    std::uniform_int_distribution<int> nt(1, maxterms), e(0, maxdeg), c(-5, 5);
    std::vector<Term> ts;
    int n = nt(rng);
    for (int i = 0; i < n; ++i) {
        Monomial m;
        int budget = maxdeg;
        for (int v = 0; v < nvars; ++v) {
            int ev = std::min(e(rng), budget);
            m.set(v, ev);
            budget -= ev;
        }
        int cv = c(rng);
        if (cv == 0) cv = 1;
        ts.push_back({m, Rational(cv)});
    }
    return Polynomial::from_terms(nvars, std::move(ts));
}

// random product of elementary row operations: always invertible
QMat random_invertible(std::mt19937_64& rng, int n) {
    QMat l = q_identity(n);
    std::uniform_int_distribution<int> idx(0, n - 1), kind(0, 2), num(-3, 3), den(1, 2);
    for (int step = 0; step < 2 * n; ++step) {
        int i = idx(rng), j = idx(rng);
        switch (kind(rng)) {
            case 0:
                std::swap(l[i], l[j]);
                break;
            case 1: {
                Rational c(mpz_class(2 * num(rng) + 1), mpz_class(den(rng)));
                for (Rational& x : l[i]) x *= c;
                break;
            }
            default:
                if (i != j) {
                    Rational c(mpz_class(num(rng)), mpz_class(den(rng)));
                    for (int k = 0; k < n; ++k) l[i][k] += c * l[j][k];
                }
        }
    }
    return l;
}

void check_param(const Chart& c, const std::vector<std::string>& expect) {
    REQUIRE(c.param.size() == expect.size());
    for (size_t i = 0; i < expect.size(); ++i) {
        INFO(c.name << " coordinate " << i);
        CHECK(c.param[i] == P3(expect[i]));
    }
}

void check_inverse_roundtrip(const Chart& c) {
    REQUIRE(c.has_inverse());
    for (int i = 0; i < 3; ++i) {
        INFO(c.name << " inverse coordinate " << i);
        CHECK(c.inverse[i].substitute(c.param) == RationalFunction::variable(3, i));
    }
}

}  // namespace

TEST_CASE("local coordinate helpers", "[chart]") {
    Polynomial p = P3("u^2*v + u*w + v");
    CHECK(set_var_zero(p, 0) == P3("v"));
    CHECK(set_var_zero(p, 1) == P3("u*w"));
    CHECK(monomial_content(P3("u^2*v + u^2*v*w")) == Monomial{2, 1});
    CHECK(monomial_content(P3("u + v")).is_constant());
    CHECK(monomial_content(Polynomial::zero(3)).is_constant());
    CHECK(divide_by_monomial(P3("u^2*v + u^2*v*w"), Monomial{2, 1}) == P3("1 + w"));
    CHECK_THROWS_AS(divide_by_monomial(P3("u + v"), Monomial{1, 0}), std::domain_error);
}

TEST_CASE("elementary variable changes", "[chart]") {
    Polynomial p = P3("u^2*v + 3*w");
    CHECK(detail::swap_vars(p, 0, 2) == P3("v*w^2 + 3*u"));
    CHECK(detail::scale_var(p, 0, Rational(2)) == P3("4*u^2*v + 3*w"));
    CHECK(detail::shear_var(p, 0, 1, Rational(1)) ==
          substitute(p, std::vector<Polynomial>{P3("u + v"), P3("v"), P3("w")}));
    CHECK_THROWS_AS(detail::scale_var(p, 0, Rational(0)), std::invalid_argument);
    CHECK_THROWS_AS(detail::shear_var(p, 1, 1, Rational(1)), std::invalid_argument);
}

TEST_CASE("linear_substitute matches generic substitution", "[chart][fuzz]") {
    std::mt19937_64 rng(161803);
    for (int it = 0; it < 60; ++it) {
        QMat l = random_invertible(rng, 4);
        Polynomial p = random_poly(rng, 4, 4, 7);
        std::vector<Polynomial> images;
        for (int i = 0; i < 4; ++i) {
            Polynomial row = Polynomial::zero(4);
            for (int j = 0; j < 4; ++j) row = row + Polynomial::variable(4, j).scaled(l[i][j]);
            images.push_back(std::move(row));
        }
        REQUIRE(linear_substitute(p, l) == substitute(p, images));
    }

    Polynomial p = P4("x*w + 2*z^2");
    CHECK(linear_substitute(p, q_identity(4)) == p);
    QMat sing(4, QVec(4, Rational(1)));
    CHECK_THROWS_AS(linear_substitute(p, sing), std::invalid_argument);
    CHECK_THROWS_AS(linear_substitute(p, QMat(3, QVec(3, Rational(1)))), std::invalid_argument);
}

TEST_CASE("rational function normalization", "[chart]") {
    RationalFunction f(P3("u^2*v"), P3("u*w"));
    CHECK(f.num() == P3("u*v"));
    CHECK(f.den() == P3("w"));
    CHECK(f.str(kUVW) == "u*v/w");

    RationalFunction g(P3("u"), P3("-w"));
    CHECK(g.str(kUVW) == "-u/w");

    RationalFunction h(P3("3*u"), P3("2"));
    CHECK(h.is_polynomial());
    CHECK(h.str(kUVW) == "3/2*u");

    CHECK(RationalFunction(P3("u^2"), P3("u*v")) == RationalFunction(P3("u"), P3("v")));
    CHECK(RationalFunction(P3("u + v"), P3("w")).str(kUVW) == "(u + v)/w");
    CHECK(RationalFunction(P3("v"), P3("v")).is_constant());
    CHECK_FALSE(RationalFunction(P3("u"), P3("v")).is_constant());
    CHECK_THROWS_AS(RationalFunction(P3("u"), Polynomial::zero(3)), std::domain_error);

    // arithmetic stays consistent under cross-multiplied equality
    RationalFunction a(P3("u"), P3("v")), b(P3("w"), P3("v"));
    CHECK(a + b == RationalFunction(P3("u + w"), P3("v")));
    CHECK(a * b == RationalFunction(P3("u*w"), P3("v^2")));
    CHECK(a / a == RationalFunction::constant(3, Rational(1)));
    CHECK_THROWS_AS(a / RationalFunction::constant(3, Rational(0)), std::domain_error);
}

TEST_CASE("restriction to the exceptional divisor", "[chart]") {
    auto r = restrict_to_u0(RationalFunction(P3("u*v"), P3("u*w")));
    REQUIRE(r);
    CHECK(*r == RationalFunction(P3("v"), P3("w")));

    auto pole = restrict_to_u0(RationalFunction(P3("v"), P3("u")));
    CHECK_FALSE(pole);

    auto mixed = restrict_to_u0(RationalFunction(P3("v + u*w"), P3("1 + u")));
    REQUIRE(mixed);
    CHECK(*mixed == RationalFunction::from_poly(P3("v")));

    RationalFunction q = rf_eval(P4("x^2 + y"), {RationalFunction(P3("u"), P3("w")),
                                                 RationalFunction::variable(3, 1),
                                                 RationalFunction::constant(3, Rational(0)),
                                                 RationalFunction::constant(3, Rational(0))});
    CHECK(q == RationalFunction(P3("u^2 + v*w^2"), P3("w^2")));
}

TEST_CASE("tower charts match their closed forms", "[chart]") {
    SECTION("first family, generic multiplier") {
        InstanceBundle b = make_dp1_ercolani();
        check_param(b.charts.at("phi2"), {"u", "1", "u*v", "u^2*w"});
        check_param(b.charts.at("phi5"), {"1", "u^3*v + 2*u^2", "u", "u^2*w + u + 1"});
        check_param(b.charts.at("phi8"), {"u^3*v - 2*u^2", "u^2*w - u + 1", "u", "1"});
        check_param(b.charts.at("phi10"), {"1", "u*v", "u", "u^2*w"});

        CHECK(b.charts.at("phi2").base_point == QVec{Rational(0), Rational(1), Rational(0), Rational(0)});
        CHECK(b.charts.at("phi5").base_point == QVec{Rational(1), Rational(0), Rational(0), Rational(1)});
        CHECK(b.charts.at("phi8").base_point == QVec{Rational(0), Rational(1), Rational(0), Rational(1)});
        CHECK(b.charts.at("phi10").base_point == QVec{Rational(1), Rational(0), Rational(0), Rational(0)});
    }

    SECTION("first family, unit multiplier") {
        InstanceBundle b = make_dp1_ercolani(Rational(1));
        check_param(b.charts.at("phi5"), {"1", "u^3*v + u^2", "u", "u^2*w + u + 1"});
        check_param(b.charts.at("phi8"), {"u^3*v - u^2", "u^2*w - u + 1", "u", "1"});
    }

    SECTION("second family") {
        InstanceBundle b = make_inflated_qrt();
        check_param(b.charts.at("phi3"), {"1", "u*v", "u^3*w - u^2 - u*v - u", "u"});
        check_param(b.charts.at("phi6"), {"u^3*w - u*v + u - 2", "1", "u*v", "u"});
        check_param(b.charts.at("phi9"), {"u*v + 2", "u^3*w + u^2 - u*v - u - 2", "1", "u"});
        check_param(b.charts.at("phi10"), {"u*v - 1", "1", "u*w - 1", "u"});

        CHECK(b.charts.at("phi6").base_point ==
              QVec{Rational(-2), Rational(1), Rational(0), Rational(0)});
        CHECK(b.charts.at("phi9").base_point ==
              QVec{Rational(2), Rational(-2), Rational(1), Rational(0)});
    }

    SECTION("third family vertex frames") {
        InstanceBundle b = make_khk_euler();
        check_param(b.charts.at("phi5"), {"1", "u", "u*v", "u*w"});
        check_param(b.charts.at("phi8"), {"u", "u*v", "u*w", "1"});
        check_param(b.charts.at("phi1"),
                    {"u*v + 2*u*w + 2*u - 1", "2*u*v + u*w - u + 2", "-u*v + 2*u*w + 2*u + 1",
                     "2*u*v - u*w + u + 2"});
        CHECK(b.charts.at("phi1").base_point ==
              QVec{Rational(-1), Rational(2), Rational(1), Rational(2)});

        InstanceBundle b1 = make_khk_euler(Rational(1));
        CHECK(b1.charts.at("phi1").base_point ==
              QVec{Rational(-1), Rational(1), Rational(1), Rational(1)});
    }
}

TEST_CASE("chart inverses invert the parametrization", "[chart]") {
    for (const std::string& name : instance_names()) {
        InstanceBundle b = make_instance(name);
        for (const Chart& c : b.charts.charts) {
            INFO(name);
            check_inverse_roundtrip(c);
        }
    }
}

TEST_CASE("chart construction validates its input", "[chart]") {
    CHECK_THROWS_AS(make_chart("bad", {P3("u"), P3("1")}), std::invalid_argument);
    CHECK_THROWS_WITH(make_chart("bad", {P3("v"), P3("1"), P3("u"), P3("u")}),
                      Catch::Matchers::ContainsSubstring("contract"));
    CHECK_THROWS_WITH(make_chart("bad", {P3("u"), P3("u*v"), P3("u"), P3("u*w")}),
                      Catch::Matchers::ContainsSubstring("vanishes"));
    CHECK_THROWS_AS(make_chart("bad", {P4("x"), P4("y"), P4("z"), P4("w")}),
                    std::invalid_argument);

    PointChartSpec spec{0, {Rational(0), Rational(0), Rational(0)}, {0, 0, 2}};
    CHECK_THROWS_AS(compose_elementary("bad", spec, {}), std::invalid_argument);
    spec.assign = {0, 1, 2};
    spec.patch = 7;
    CHECK_THROWS_AS(compose_elementary("bad", spec, {}), std::invalid_argument);
    spec.patch = 0;
    CHECK_THROWS_AS(compose_elementary("bad", spec, {ElementaryStep::curve_v(P3("v"))}),
                    std::invalid_argument);
    CHECK_THROWS_AS(compose_elementary("bad", spec, {ElementaryStep::curve_w(P3("w + u"))}),
                    std::invalid_argument);

    // a point step recenters the fiber coordinates
    Chart c = compose_elementary("c", spec, {ElementaryStep::point(Rational(1), Rational(0))});
    check_param(c, {"1", "u", "u^2*v + u", "u^2*w"});
    check_inverse_roundtrip(c);

    // curve steps follow a graph that may involve the other fiber coordinate
    Chart cc = compose_elementary("cc", spec, {ElementaryStep::curve_v(P3("w^2"))});
    check_param(cc, {"1", "u", "u^2*v + u*w^2", "u*w"});
    check_inverse_roundtrip(cc);
}

TEST_CASE("indices at the exceptional charts", "[chart]") {
    InstanceBundle dp1 = make_dp1_ercolani();
    Polynomial s = P4("y + z - w");
    CHECK(chart_index(dp1.charts.at("phi10"), s) == 1);
    CHECK(chart_index(dp1.charts.at("phi8"), s) == 2);
    CHECK(chart_index(dp1.charts.at("phi2"), s) == 0);
    CHECK(chart_index(dp1.charts.at("phi2"), P4("x")) == 1);
    CHECK(chart_index(dp1.charts.at("phi2"), P4("w")) == 2);

    InstanceBundle qrt = make_inflated_qrt();
    Polynomial k = P4("x + y + w");
    CHECK(chart_index(qrt.charts.at("phi9"), k) == 2);
    CHECK(chart_index(qrt.charts.at("phi3"), k) == 0);
    CHECK(chart_index(qrt.charts.at("phi10"), k) == 1);

    SECTION("hints never change the result") {
        for (int hint : {-1, 1, 2, 3, 5, 50}) {
            CHECK(chart_index(dp1.charts.at("phi8"), s, hint) == 2);
            CHECK(chart_index(dp1.charts.at("phi5"), dp1.default_seed, hint) ==
                  chart_index(dp1.charts.at("phi5"), dp1.default_seed));
            CHECK(chart_index(qrt.charts.at("phi9"), k, hint) == 2);
        }
    }

    SECTION("polynomials vanishing on a degenerate chart are rejected") {
        Chart degen = make_chart("degen", {P3("u"), P3("1"), P3("u*v"), P3("u*v")});
        CHECK_THROWS_WITH(chart_index(degen, P4("z - w")),
                          Catch::Matchers::ContainsSubstring("vanishes identically"));
    }
}

TEST_CASE("tower recipes and closed forms agree", "[chart][fuzz]") {
    std::mt19937_64 rng(271828);
    for (const std::string& name : instance_names()) {
        InstanceBundle b = make_instance(name);
        for (const Chart& c : b.charts.charts) {
            REQUIRE(c.recipe.has_value());
            Chart bare = make_chart(c.name, c.param);  // no recipe: direct valuation
            for (int it = 0; it < 10; ++it) {
                Polynomial p = random_poly(rng, 4, 3, 6);
                if (p.is_zero()) continue;
                int hint = it % 3 == 0 ? 1 + static_cast<int>(rng() % 6) : -1;
                INFO(name << " " << c.name << " " << to_string(p, kXYZW));
                REQUIRE(chart_index(c, p, hint) == chart_index(bare, p));
            }
        }
    }
}

TEST_CASE("plane sources pull the form back to u", "[chart]") {
    std::mt19937_64 rng(55);
    std::uniform_int_distribution<int> cdist(-4, 4);
    for (int it = 0; it < 40; ++it) {
        Polynomial k = Polynomial::zero(4);
        for (int j = 0; j < 4; ++j) {
            int c = cdist(rng);
            if (it % 5 == j) c = 0;  // exercise zero-coefficient slots too
            k = k + Polynomial::variable(4, j).scaled(Rational(c));
        }
        if (k.is_zero()) continue;
        std::vector<Polynomial> src = plane_source(k);
        REQUIRE(substitute(k, src) == P3("u"));
    }
    CHECK(substitute(P4("y + z - w"), plane_source(P4("y + z - w"))) == P3("u"));
    CHECK_THROWS_AS(plane_source(P4("x^2")), std::invalid_argument);
    CHECK_THROWS_AS(plane_source(P4("x + 1")), std::invalid_argument);
    CHECK_THROWS_AS(plane_source(P3("u")), std::invalid_argument);
}

TEST_CASE("divisor transfer chains", "[chart]") {
    SECTION("first family") {
        InstanceBundle b = make_dp1_ercolani();
        std::vector<TransferResult> rs = run_transfers(b);
        REQUIRE(rs.size() == 4);
        for (const TransferResult& r : rs) {
            INFO(r.source << " -> " << r.target);
            CHECK(r.ok);
            CHECK(r.check.target_valuation == 1);
        }
        CHECK(rs[0].source == "{y + z - w = 0}");
        CHECK(rs[0].check.stripped_power == 0);
        CHECK(rs[0].check.v_image->str(kUVW) == "w/v");
        CHECK(rs[0].check.w_image->str(kUVW) == "(2*w^2 + v + w)/v^2");
        CHECK(rs[1].check.v_image->str(kUVW) == "(-2*v^3 + w)/v^3");
        CHECK(rs[1].check.w_image->str(kUVW) == "-w/v^2");
        CHECK(rs[2].check.v_image->str(kUVW) == "v");
        CHECK(rs[2].check.w_image->str(kUVW) == "-w + 6");
        CHECK(rs[3].check.stripped_power == 2);
        CHECK(rs[3].check.v_image->str(kUVW) == "v/w");
        CHECK(rs[3].check.w_image->str(kUVW) == "w");
    }

    SECTION("second family") {
        InstanceBundle b = make_inflated_qrt();
        std::vector<TransferResult> rs = run_transfers(b);
        REQUIRE(rs.size() == 4);
        for (const TransferResult& r : rs) CHECK(r.ok);
        CHECK(rs[0].check.v_image->str(kUVW) == "-v/(v + w)");
        CHECK(rs[1].check.v_image->str(kUVW) == "v");
        CHECK(rs[1].check.w_image->str(kUVW) == "v - w + 1");
        CHECK(rs[2].check.v_image->str(kUVW) == "v - 2");
        CHECK(rs[2].check.w_image->str(kUVW) == "-v - w + 2");
        CHECK(rs[3].check.stripped_power == 2);
        CHECK(rs[3].check.v_image->str(kUVW) == "v + w + 2");
        CHECK(rs[3].check.w_image->str(kUVW) == "-1");
    }

    SECTION("third family") {
        for (int g : {1, 2}) {
            InstanceBundle b = make_khk_euler(Rational(g));
            std::vector<TransferResult> rs = run_transfers(b);
            REQUIRE(rs.size() == 8);
            for (const TransferResult& r : rs) {
                INFO("gamma " << g << ": " << r.source << " -> " << r.target);
                CHECK(r.ok);
                CHECK(r.check.target_valuation == 1);
            }
            // hyperplane hops land as coordinate inversions
            CHECK(rs[0].check.v_image->str(kUVW) == "1/v");
            CHECK(rs[0].check.w_image->str(kUVW) == "1/w");
        }
        InstanceBundle b2 = make_khk_euler(Rational(2));
        std::vector<TransferResult> rs = run_transfers(b2);
        CHECK(rs[1].check.v_image->str(kUVW) == "16*v/(30*w + 34)");
        CHECK(rs[1].check.w_image->str(kUVW) == "(34*w + 30)/(30*w + 34)");
        CHECK(rs[5].check.v_image->str(kUVW) == "17/8*v + 15/8*w");
        CHECK(rs[5].check.w_image->str(kUVW) == "15/8*v + 17/8*w");
    }
}

TEST_CASE("linear frame changes compose correctly", "[chart]") {
    InstanceBundle b = make_dp1_ercolani();
    const Chart& phi10 = b.charts.at("phi10");

    QMat l = q_identity(4);
    std::swap(l[0], l[1]);   // x <-> y
    l[2][3] = Rational(2);   // z <- z + 2w
    Chart moved = apply_linear(phi10, l);

    for (int i = 0; i < 4; ++i) {
        Polynomial want = Polynomial::zero(3);
        for (int j = 0; j < 4; ++j) want = want + phi10.param[j].scaled(l[i][j]);
        REQUIRE(moved.param[i] == want);
    }
    check_inverse_roundtrip(moved);
    REQUIRE(moved.recipe->post_linear.has_value());

    std::mt19937_64 rng(99221);
    for (int it = 0; it < 12; ++it) {
        Polynomial p = random_poly(rng, 4, 3, 5);
        if (p.is_zero()) continue;
        REQUIRE(chart_index(moved, p) == chart_index(phi10, linear_substitute(p, l)));
    }

    // applying a second change multiplies into the recorded frame
    QMat l2 = q_identity(4);
    l2[1][0] = Rational(3);
    Chart twice = apply_linear(moved, l2);
    REQUIRE(twice.recipe->post_linear.has_value());
    CHECK(*twice.recipe->post_linear == q_mul(l2, l));
    CHECK_THROWS_AS(apply_linear(phi10, QMat(3, QVec(3, Rational(1)))), std::invalid_argument);

    CHECK_THROWS_AS(b.charts.at("nope"), std::out_of_range);
    CHECK(b.charts.contains("phi5"));
}
