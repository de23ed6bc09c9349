#include <birat/instances.hpp>
#include <birat/sequence.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace birat;

namespace {

const std::vector<std::string> kXYZW = {"x", "y", "z", "w"};

Polynomial P4(const std::string& t) { return parse_polynomial(t, kXYZW); }

std::vector<Rational> rats(std::initializer_list<long> xs) {
    std::vector<Rational> out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

void check_rows(const OrbitTable& t, const std::vector<int>& degrees,
                const std::vector<std::vector<int>>& indices) {
    REQUIRE(t.rows.size() == degrees.size());
    for (size_t n = 0; n < degrees.size(); ++n) {
        INFO("row " << n);
        CHECK(t.rows[n].degree == degrees[n]);
        CHECK(t.rows[n].indices == indices[n]);
    }
}

struct LimitGuard {
    size_t saved = term_limit();
    ~LimitGuard() { term_limit() = saved; }
};

}  // namespace

TEST_CASE("evaluate", "[sequence]") {
    QVec pt{Rational(1), Rational(2), Rational(0), Rational(-1)};
    CHECK(evaluate(P4("x*w + 2*z^2"), pt) == Rational(-1));
    CHECK(evaluate(P4("y^2"), pt) == Rational(4));
    CHECK_THROWS_AS(evaluate(P4("x"), QVec{Rational(1)}), std::invalid_argument);
}

TEST_CASE("orbit of the first family", "[sequence][orbit]") {
    InstanceBundle b = make_dp1_ercolani();
    OrbitTable t = run_orbit(b.map, b.charts, b.default_seed, 5);

    CHECK(t.chart_names == std::vector<std::string>{"phi2", "phi5", "phi8", "phi10"});
    CHECK_FALSE(t.seed_at_center);
    CHECK_FALSE(t.truncated);
    check_rows(t, {1, 2, 4, 8, 14, 22},
               {{0, 0, 0, 0},
                {0, 0, 2, 2},
                {0, 2, 6, 4},
                {2, 6, 12, 8},
                {6, 12, 20, 14},
                {12, 20, 30, 22}});

    // powers cleared at each pull match the indices of the paired charts
    REQUIRE(t.pull_exponents.size() == 5);
    for (size_t n = 0; n < t.pull_exponents.size(); ++n) {
        CHECK(t.pull_exponents[n][0] == 0);                       // w never divides
        CHECK(t.pull_exponents[n][1] == t.rows[n].indices[0]);    // s-power = phi2 index
    }
}

TEST_CASE("orbit of the second family", "[sequence][orbit]") {
    InstanceBundle b = make_inflated_qrt();
    OrbitTable t = run_orbit(b.map, b.charts, b.default_seed, 5);

    check_rows(t, {1, 2, 4, 8, 14, 23},
               {{0, 0, 0, 0},
                {0, 0, 2, 1},
                {0, 2, 5, 3},
                {2, 5, 11, 7},
                {5, 11, 19, 13},
                {11, 19, 31, 22}});
    for (size_t n = 0; n < t.pull_exponents.size(); ++n)
        CHECK(t.pull_exponents[n][0] == t.rows[n].indices[0]);  // k-power = phi3 index
}

TEST_CASE("orbit of the third family", "[sequence][orbit]") {
    InstanceBundle b = make_khk_euler();
    OrbitTable t = run_orbit(b.map, b.charts, b.default_seed, 3);

    check_rows(t, {1, 3, 9, 19},
               {{0, 0, 0, 0, 0, 0, 0, 0},
                {0, 0, 0, 0, 2, 2, 2, 2},
                {2, 2, 2, 2, 6, 6, 6, 6},
                {6, 6, 6, 6, 12, 12, 12, 12}});
    for (size_t n = 0; n < t.pull_exponents.size(); ++n)
        for (int i = 0; i < 4; ++i)
            CHECK(t.pull_exponents[n][i] == t.rows[n].indices[i]);
}

TEST_CASE("orbit edge cases", "[sequence]") {
    InstanceBundle b = make_dp1_ercolani();
    CHECK_THROWS_AS(run_orbit(b.map, b.charts, Polynomial::zero(4), 2), std::invalid_argument);
    CHECK_THROWS_AS(run_orbit(b.map, b.charts, P4("x + 1"), 2), std::invalid_argument);
    CHECK_THROWS_AS(run_orbit(b.map, b.charts, b.default_seed, -1), std::invalid_argument);

    OrbitTable single = run_orbit(b.map, b.charts, b.default_seed, 0);
    CHECK(single.rows.size() == 1);
    CHECK(single.rows[0].degree == 1);

    // a seed through a tower center is flagged
    OrbitTable z = run_orbit(b.map, b.charts, P4("z"), 0);
    CHECK(z.seed_at_center);

    SECTION("running out of the term budget truncates gracefully") {
        LimitGuard guard;
        term_limit() = 500;
        OrbitTable t = run_orbit(b.map, b.charts, b.default_seed, 8);
        CHECK(t.truncated);
        CHECK_FALSE(t.truncation_reason.empty());
        CHECK(t.rows.size() >= 2);
        CHECK(t.rows.size() <= 8);
    }
}

TEST_CASE("affine recursion extends the exact tables", "[sequence]") {
    SECTION("first family") {
        InstanceBundle b = make_dp1_ercolani();
        std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
        QVec st = orbit_initial_state(b.charts, order, b.default_seed);
        CHECK(st == QVec{Rational(1), Rational(0), Rational(0), Rational(0), Rational(0)});

        std::vector<QVec> states = run_affine(b.affine, st, 12);
        REQUIRE(states.size() == 13);
        CHECK(states[5] == QVec{Rational(22), Rational(12), Rational(20), Rational(30), Rational(22)});
        CHECK(states[10] == QVec{Rational(92), Rational(72), Rational(90), Rational(110), Rational(92)});
        CHECK(states[12] == QVec{Rational(134), Rational(110), Rational(132), Rational(156), Rational(134)});
    }

    SECTION("second family") {
        InstanceBundle b = make_inflated_qrt();
        std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
        std::vector<QVec> states =
            run_affine(b.affine, orbit_initial_state(b.charts, order, b.default_seed), 10);
        CHECK(states[9] == QVec{Rational(96), Rational(66), Rational(90), Rational(120), Rational(95)});
        CHECK(states[10] == QVec{Rational(126), Rational(90), Rational(120), Rational(155), Rational(125)});
    }

    SECTION("third family") {
        InstanceBundle b = make_khk_euler();
        std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
        std::vector<QVec> states =
            run_affine(b.affine, orbit_initial_state(b.charts, order, b.default_seed), 10);
        for (int n = 0; n <= 10; ++n) CHECK(states[n][0] == Rational(2 * n * n + 1));
        CHECK(states[10][1] == Rational(90));
        CHECK(states[10][5] == Rational(110));
    }

    CHECK_THROWS_AS(run_affine(make_dp1_ercolani().affine, QVec{Rational(1)}, 3),
                    std::invalid_argument);
}

TEST_CASE("exact orbit agrees with the affine recursion", "[sequence]") {
    InstanceBundle b = make_dp1_ercolani();
    OrbitTable t = run_orbit(b.map, b.charts, b.default_seed, 4);
    std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
    std::vector<QVec> states =
        run_affine(b.affine, orbit_initial_state(b.charts, order, b.default_seed), 4);

    CrossCheck cc = cross_validate(t, states, b.affine.labels, b.alpha_chart);
    CHECK(cc.ok);
    CHECK(cc.mismatches.empty());
    CHECK(cc.alpha == QVec{Rational(1), Rational(0), Rational(0), Rational(0), Rational(0)});
    CHECK(cc.alpha_constant_tail);

    SECTION("corrupted data is reported") {
        std::vector<QVec> bad = states;
        bad[3][0] += Rational(1);
        bad[2][1] += Rational(1);
        CrossCheck broken = cross_validate(t, bad, b.affine.labels);
        CHECK_FALSE(broken.ok);
        REQUIRE(broken.mismatches.size() == 2);
        CHECK(broken.mismatches[1].find("degree at n=3") != std::string::npos);
    }

    CHECK_THROWS_AS(cross_validate(t, states, std::vector<std::string>{"x", "y"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cross_validate(t, states, b.affine.labels, std::string("nope")),
                    std::invalid_argument);
}

TEST_CASE("recurrence fitting", "[sequence]") {
    SECTION("classic sequences") {
        auto fib = fit_recurrence(rats({1, 1, 2, 3, 5, 8, 13, 21, 34, 55}), 3);
        REQUIRE(fib);
        CHECK(fib->order == 2);
        CHECK(fib->coefficients == QVec{Rational(1), Rational(1)});
        CHECK(fib->characteristic() == QVec{Rational(1), Rational(-1), Rational(-1)});

        auto geo = fit_recurrence(rats({1, 2, 4, 8, 16, 32, 64, 128}), 2);
        REQUIRE(geo);
        CHECK(geo->order == 1);
        CHECK(geo->coefficients == QVec{Rational(2)});

        auto con = fit_recurrence(rats({5, 5, 5, 5, 5, 5}), 2);
        REQUIRE(con);
        CHECK(con->order == 1);
    }

    SECTION("quadratic data needs exactly order three") {
        std::vector<Rational> quad;
        for (long n = 1; n <= 12; ++n) quad.emplace_back(n * n - n + 2);
        auto r = fit_recurrence(quad, 5);
        REQUIRE(r);
        CHECK(r->order == 3);
        CHECK(r->coefficients == QVec{Rational(3), Rational(-3), Rational(1)});
        CHECK_FALSE(r->satisfied_by(rats({1, 1, 2, 3, 5, 8, 13, 21})));
    }

    SECTION("data requirements are enforced") {
        CHECK_THROWS_WITH(fit_recurrence(rats({1, 2, 3}), 2),
                          Catch::Matchers::ContainsSubstring("not enough terms"));
        CHECK_THROWS_AS(fit_recurrence(rats({1, 2, 3, 4}), 0), std::invalid_argument);
        // no linear recurrence of small order fits factorial growth
        CHECK_FALSE(fit_recurrence(rats({1, 1, 2, 6, 24, 120, 720, 5040, 40320, 362880}), 3));
    }

    SECTION("a family is fitted jointly") {
        std::vector<std::vector<Rational>> family = {rats({0, 1, 2, 3, 4, 5, 6, 7}),
                                                     rats({5, 5, 5, 5, 5, 5, 5, 5})};
        auto r = fit_common_recurrence(family, 3);
        REQUIRE(r);
        CHECK(r->order == 2);
        CHECK(r->coefficients == QVec{Rational(2), Rational(-1)});
        CHECK_THROWS_AS(fit_common_recurrence({}, 2), std::invalid_argument);
    }
}

TEST_CASE("instance recurrences", "[sequence][recurrence]") {
    auto tail = [](const InstanceBundle& b, int terms) {
        std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
        std::vector<QVec> states =
            run_affine(b.affine, orbit_initial_state(b.charts, order, b.default_seed), terms);
        std::vector<Rational> d;
        for (size_t n = 1; n < states.size(); ++n) d.push_back(states[n][0]);
        return d;
    };

    SECTION("first family") {
        InstanceBundle b = make_dp1_ercolani();
        auto rec = instance_recurrence(b);
        REQUIRE(rec);
        CHECK(rec->order == 4);
        CHECK(rec->coefficients == QVec{Rational(2), Rational(0), Rational(-2), Rational(1)});
        CHECK(rec->satisfied_by(tail(b, 28)));

        // the degree sequence alone closes at order three
        auto solo = fit_recurrence(tail(b, 22), 8);
        REQUIRE(solo);
        CHECK(solo->order == 3);
        CHECK(solo->coefficients == QVec{Rational(3), Rational(-3), Rational(1)});
    }

    SECTION("second family") {
        InstanceBundle b = make_inflated_qrt();
        auto rec = instance_recurrence(b);
        REQUIRE(rec);
        CHECK(rec->order == 5);
        CHECK(rec->coefficients ==
              QVec{Rational(3), Rational(-2), Rational(-2), Rational(3), Rational(-1)});
        CHECK(rec->satisfied_by(tail(b, 28)));
    }

    SECTION("third family") {
        InstanceBundle b = make_khk_euler();
        auto rec = instance_recurrence(b);
        REQUIRE(rec);
        CHECK(rec->order == 3);
        CHECK(rec->coefficients == QVec{Rational(3), Rational(-3), Rational(1)});
        CHECK(rec->satisfied_by(tail(b, 28)));
    }
}

TEST_CASE("closed forms", "[sequence]") {
    SECTION("quadratic with an anomalous start") {
        std::vector<Rational> d;
        d.emplace_back(1);
        for (long n = 1; n <= 12; ++n) d.emplace_back(n * n - n + 2);
        auto cf = fit_closed_form(d);
        REQUIRE(cf);
        CHECK(cf->pure());
        CHECK(cf->first_valid == 1);
        CHECK(cf->p == QVec{Rational(2), Rational(-1), Rational(1)});
        for (long n = 1; n <= 20; ++n) CHECK((*cf)(n) == Rational(n * n - n + 2));
    }

    SECTION("pure quadratic from the start") {
        std::vector<Rational> d;
        for (long n = 0; n <= 10; ++n) d.emplace_back(2 * n * n + 1);
        auto cf = fit_closed_form(d);
        REQUIRE(cf);
        CHECK(cf->pure());
        CHECK(cf->first_valid == 0);
        CHECK(cf->p == QVec{Rational(1), Rational(0), Rational(2)});
    }

    SECTION("period-two quasi-polynomial") {
        InstanceBundle b = make_inflated_qrt();
        std::vector<std::string> order(b.affine.labels.begin() + 1, b.affine.labels.end());
        std::vector<QVec> states =
            run_affine(b.affine, orbit_initial_state(b.charts, order, b.default_seed), 14);
        std::vector<Rational> d;
        for (const QVec& st : states) d.push_back(st[0]);
        auto cf = fit_closed_form(d);
        REQUIRE(cf);
        CHECK_FALSE(cf->pure());
        CHECK(cf->first_valid == 0);
        CHECK(cf->p == QVec{Rational(mpz_class(17), mpz_class(16)), Rational(mpz_class(5), mpz_class(12)),
                            Rational(mpz_class(3), mpz_class(8)), Rational(mpz_class(1), mpz_class(12))});
        CHECK(cf->q == QVec{Rational(mpz_class(-1), mpz_class(16))});
        for (size_t n = 0; n < d.size(); ++n) CHECK((*cf)(static_cast<long>(n)) == d[n]);
    }

    SECTION("exponential growth has no such form") {
        CHECK_FALSE(fit_closed_form(rats({1, 2, 4, 8, 16, 32, 64, 128, 256, 512})));
    }
}
