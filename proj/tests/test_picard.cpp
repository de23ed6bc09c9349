#include <birat/instances.hpp>
#include <birat/picard.hpp>

#include <catch2/catch_amalgamated.hpp>

using namespace birat;

namespace {

QVec qv(std::initializer_list<long> xs) {
    QVec out;
    for (long x : xs) out.emplace_back(x);
    return out;
}

QMat qm(std::initializer_list<std::initializer_list<long>> rows) {
    QMat out;
    for (const auto& r : rows) out.push_back(qv(r));
    return out;
}

}  // namespace

TEST_CASE("exact linear algebra", "[linalg]") {
    SECTION("rref and kernel") {
        QMat m = qm({{1, 1, 0}, {0, 0, 1}});
        std::vector<QVec> ker = kernel_basis(m);
        REQUIRE(ker.size() == 1);
        CHECK(ker[0] == qv({-1, 1, 0}));
        CHECK(q_mul_vec(m, ker[0]) == qv({0, 0}));

        QMat full = qm({{2, 0}, {0, 3}});
        CHECK(kernel_basis(full).empty());
    }

    SECTION("solve") {
        auto x = solve_linear(qm({{1, 2}, {3, 4}}), qv({5, 6}));
        REQUIRE(x);
        CHECK(*x == QVec{Rational(-4), Rational(mpz_class(9), mpz_class(2))});

        CHECK_FALSE(solve_linear(qm({{1, 1}, {1, 1}}), qv({0, 1})));
        auto free = solve_linear(qm({{1, 1}}), qv({3}));  // underdetermined: free var -> 0
        REQUIRE(free);
        CHECK(*free == qv({3, 0}));
        CHECK_THROWS_AS(solve_linear(qm({{1}}), qv({1, 2})), std::invalid_argument);
    }

    SECTION("inverse and powers") {
        QMat a = qm({{1, 2}, {3, 4}});
        CHECK(q_mul(a, q_inverse(a)) == q_identity(2));
        CHECK(q_pow(a, 3) == q_mul(a, q_mul(a, a)));
        CHECK(q_pow(a, 0) == q_identity(2));
        CHECK_THROWS_AS(q_inverse(qm({{1, 1}, {1, 1}})), std::domain_error);
        CHECK_THROWS_AS(q_mul(qm({{1, 2}}), qm({{1, 2}})), std::invalid_argument);
    }

    SECTION("primitive integer scaling") {
        QVec v{Rational(mpz_class(1), mpz_class(2)), Rational(mpz_class(-3), mpz_class(4)), Rational(0)};
        std::vector<mpz_class> p = primitive_integer(v);
        CHECK(p == std::vector<mpz_class>{2, -3, 0});

        QVec neg{Rational(mpz_class(-1), mpz_class(2)), Rational(mpz_class(1), mpz_class(4))};
        CHECK(primitive_integer(neg) == std::vector<mpz_class>{2, -1});

        CHECK(primitive_integer(qv({4, 6})) == std::vector<mpz_class>{2, 3});
    }

    SECTION("span membership") {
        std::vector<QVec> vs = {qv({1, 0, 1}), qv({0, 1, 1})};
        CHECK(in_span(vs, qv({2, 3, 5})));
        CHECK_FALSE(in_span(vs, qv({0, 0, 1})));
        CHECK(in_span({}, qv({0, 0})));
        CHECK_FALSE(in_span({}, qv({1, 0})));
    }
}

TEST_CASE("lattice construction", "[picard]") {
    CHECK_THROWS_AS(make_picard_lattice({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_picard_lattice({"H"}, qm({{1, 0}, {0, 1}})), std::invalid_argument);
    CHECK_THROWS_AS(make_picard_lattice({"H", "F1"}, qm({{1, 0}, {0}})), std::invalid_argument);
    CHECK_THROWS_AS(picard_degrees(make_picard_lattice({"H"}, qm({{1}})), -1),
                    std::invalid_argument);
}

TEST_CASE("pushforward powers give the degree sequence", "[picard]") {
    InstanceBundle b = make_dp1_ercolani();
    REQUIRE(b.picard.has_value());
    REQUIRE(b.picard->basis.size() == 12);
    CHECK(b.picard->basis[0] == "H");

    QVec degs = picard_degrees(*b.picard, 12);
    QVec expect =
        qv({1, 2, 4, 8, 14, 22, 32, 44, 58, 74, 92, 112, 134});
    CHECK(degs == expect);
    for (long n = 1; n <= 12; ++n) CHECK(degs[n] == Rational(n * n - n + 2));
}

TEST_CASE("invariant classes of the pushforward", "[picard]") {
    InstanceBundle b = make_dp1_ercolani();
    const PicardLattice& lat = *b.picard;

    std::vector<QVec> inv = invariant_classes(lat);
    REQUIRE(inv.size() == 3);
    CHECK(format_class(inv[0], lat.basis) == "H - F1 - F4 - F7 - F9");
    CHECK(format_class(inv[1], lat.basis) == "H - F2 - F5 - F8 - F10");
    CHECK(format_class(inv[2], lat.basis) == "F3 - F4 + F6 - F7 + F11");
    for (const QVec& v : inv) CHECK(is_invariant_class(lat, v));

    // the two effective classes carried by the invariant plane and quadric pencil
    QVec plane = parse_class("H - F1 - F3 - F6 - F9 - F11", lat.basis);
    QVec pencil = parse_class("2H - F1 - F2 - F3 - F5 - F6 - F8 - F9 - F10 - F11", lat.basis);
    CHECK(is_invariant_class(lat, plane));
    CHECK(is_invariant_class(lat, pencil));
    CHECK(in_span(inv, plane));
    CHECK(in_span(inv, pencil));

    CHECK_FALSE(is_invariant_class(lat, parse_class("H", lat.basis)));
}

TEST_CASE("class expressions parse and print", "[picard]") {
    std::vector<std::string> basis = {"H", "F1", "F2", "F3", "F5"};
    QVec v = parse_class("2H - F1 - F3 + 3*F5", basis);
    CHECK(v == qv({2, -1, 0, -1, 3}));
    CHECK(format_class(v, basis) == "2*H - F1 - F3 + 3*F5");
    CHECK(parse_class(format_class(v, basis), basis) == v);

    CHECK(parse_class("1/2*H + F2", basis) ==
          QVec{Rational(mpz_class(1), mpz_class(2)), Rational(0), Rational(1), Rational(0), Rational(0)});
    CHECK(format_class(qv({0, 0, 0, 0, 0}), basis) == "0");
    CHECK(parse_class("H - H", basis) == qv({0, 0, 0, 0, 0}));

    CHECK_THROWS_WITH(parse_class("H + Q7", basis), Catch::Matchers::ContainsSubstring("unknown class"));
    CHECK_THROWS_AS(parse_class("H F1", basis), std::invalid_argument);
    CHECK_THROWS_AS(parse_class("H +", basis), std::invalid_argument);
    CHECK_THROWS_AS(format_class(qv({1, 2}), basis), std::invalid_argument);
}
