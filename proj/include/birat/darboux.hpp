#pragma once
// Generalized Darboux polynomials: spaces cut out by index constraints at
// blow-up charts, and the induced action of pull-back on such a space.

#include "birmap.hpp"
#include "chart.hpp"
#include "linalg.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace birat {

struct IndexBound {
    std::string chart;
    int min_index = 1;
};

struct ConstraintQuery {
    int degree = 1;
    std::vector<IndexBound> bounds;
};

// homogeneous degree-d monomials in 4 variables, decreasing graded-lex
inline std::vector<Monomial> homogeneous_monomials(int degree) {
    std::vector<Monomial> out;
    for (int a = degree; a >= 0; --a)
        for (int b = degree - a; b >= 0; --b)
            for (int c = degree - a - b; c >= 0; --c) {
                Monomial m;
                m.set(0, a);
                m.set(1, b);
                m.set(2, c);
                m.set(3, degree - a - b - c);
                out.push_back(m);
            }
    std::sort(out.begin(), out.end(), graded_lex_greater);
    return out;
}

// basis of the space of degree-d forms whose index at each listed chart
// reaches the requested bound
inline std::vector<Polynomial> constrained_space(const ChartSet& charts,
                                                 const ConstraintQuery& query) {
    if (query.degree < 1) throw std::invalid_argument("constraint degree must be positive");
    std::vector<Monomial> mons = homogeneous_monomials(query.degree);

    std::map<std::pair<std::string, Monomial>, size_t,
             decltype([](const auto& a, const auto& b) {
                 if (a.first != b.first) return a.first < b.first;
                 return graded_lex_less(a.second, b.second);
             })>
        row_of;
    QMat rows;
    for (const IndexBound& bound : query.bounds) {
        const Chart& chart = charts.at(bound.chart);
        for (size_t j = 0; j < mons.size(); ++j) {
            Polynomial comp = substitute(Polynomial::monomial(4, mons[j], Rational(1)), chart.param);
            for (const Term& t : comp.terms()) {
                if (t.mon.exponent(0) >= bound.min_index) continue;
                auto key = std::make_pair(bound.chart, t.mon);
                auto it = row_of.find(key);
                if (it == row_of.end()) {
                    it = row_of.emplace(key, rows.size()).first;
                    rows.emplace_back(mons.size(), Rational(0));
                }
                rows[it->second][j] += t.coef;
            }
        }
    }

    std::vector<Polynomial> basis;
    if (rows.empty()) {  // unconstrained: the whole space of forms
        for (const Monomial& m : mons)
            basis.push_back(Polynomial::monomial(4, m, Rational(1)));
        return basis;
    }
    for (const QVec& v : kernel_basis(rows)) {
        std::vector<mpz_class> iv = primitive_integer(v);
        std::vector<Term> ts;
        for (size_t j = 0; j < mons.size(); ++j)
            if (iv[j] != 0) ts.push_back(Term{mons[j], Rational(iv[j])});
        basis.push_back(Polynomial::from_terms(4, std::move(ts)));
    }
    std::sort(basis.begin(), basis.end(), [](const Polynomial& a, const Polynomial& b) {
        return graded_lex_greater(a.leading_term().mon, b.leading_term().mon);
    });
    return basis;
}

// ---- pull-back action on a polynomial space -----------------------------------

struct ActionReport {
    bool closed = true;  // all proper pull-backs stay inside the span
    QMat action;         // column j = span coordinates of the proper pull-back of basis[j]
    std::vector<std::vector<int>> exponents;  // critical powers cleared per element
    std::vector<Polynomial> escapes;          // offending proper pull-backs
};

inline ActionReport verify_darboux(const BirationalMap& f, const std::vector<Polynomial>& basis) {
    if (basis.empty()) throw std::invalid_argument("empty basis");
    ActionReport rep;

    std::vector<Polynomial> images;
    for (const Polynomial& b : basis) {
        PullbackResult r = proper_pullback(f, b);
        rep.exponents.push_back(r.exponents);
        images.push_back(std::move(r.proper));
    }

    std::vector<Monomial> mons;
    auto collect = [&](const Polynomial& p) {
        for (const Term& t : p.terms()) mons.push_back(t.mon);
    };
    for (const Polynomial& b : basis) collect(b);
    for (const Polynomial& g : images) collect(g);
    std::sort(mons.begin(), mons.end(), graded_lex_greater);
    mons.erase(std::unique(mons.begin(), mons.end()), mons.end());

    QMat a(mons.size(), QVec(basis.size(), Rational(0)));
    for (size_t j = 0; j < basis.size(); ++j)
        for (const Term& t : basis[j].terms()) {
            size_t row = std::lower_bound(mons.begin(), mons.end(), t.mon, graded_lex_greater) -
                         mons.begin();
            a[row][j] = t.coef;
        }

    rep.action.assign(basis.size(), QVec(basis.size(), Rational(0)));
    for (size_t j = 0; j < images.size(); ++j) {
        QVec b(mons.size(), Rational(0));
        for (const Term& t : images[j].terms()) {
            size_t row = std::lower_bound(mons.begin(), mons.end(), t.mon, graded_lex_greater) -
                         mons.begin();
            b[row] = t.coef;
        }
        if (auto sol = solve_linear(a, b)) {
            for (size_t i = 0; i < basis.size(); ++i) rep.action[i][j] = (*sol)[i];
        } else {
            rep.closed = false;
            rep.escapes.push_back(images[j]);
        }
    }
    return rep;
}

// ---- structural identities of the Euler-top map -------------------------------

struct IdentityCheck {
    std::string name;
    bool ok = false;
};

// polynomial identities behind the invariant planes and quadrics of the
// Euler-top family; the quadric x0 x2 + x1 x3 is only preserved at gamma = 1
inline std::vector<IdentityCheck> identity_suite(const BirationalMap& f, const Rational& gamma) {
    std::vector<Polynomial> x;
    for (int i = 0; i < 4; ++i) x.push_back(Polynomial::variable(4, i));
    const Polynomial m = x[0] * x[1] * x[2] * x[3];
    const Rational two(2), four(4);

    std::vector<IdentityCheck> checks;
    auto add = [&](std::string name, const Polynomial& lhs, const Polynomial& rhs) {
        checks.push_back(IdentityCheck{std::move(name), lhs == rhs});
    };

    add("f1 - f3 = 2 x2 x4 (x1 - x3)", f.components[0] - f.components[2],
        (x[1] * x[3] * (x[0] - x[2])).scaled(two));
    add("f2 - f4 = 2 x1 x3 (x2 - x4)", f.components[1] - f.components[3],
        (x[0] * x[2] * (x[1] - x[3])).scaled(two));
    add("f1 + f3 = 2 gamma x1 x3 (x2 + x4)", f.components[0] + f.components[2],
        (x[0] * x[2] * (x[1] + x[3])).scaled(two * gamma));
    add("f2 + f4 = 2 gamma x2 x4 (x1 + x3)", f.components[1] + f.components[3],
        (x[1] * x[3] * (x[0] + x[2])).scaled(two * gamma));

    const Polynomial q0 = (x[0] + x[2]) * (x[1] + x[3]);
    const Polynomial q1 = (x[0] - x[2]) * (x[1] - x[3]);
    const Polynomial q2 = x[0] * x[2] + x[1] * x[3];
    add("f*((x1+x3)(x2+x4)) = 4 gamma^2 x1 x2 x3 x4 (x1+x3)(x2+x4)", pullback(f, q0),
        (m * q0).scaled(four * gamma * gamma));
    add("f*((x1-x3)(x2-x4)) = 4 x1 x2 x3 x4 (x1-x3)(x2-x4)", pullback(f, q1), (m * q1).scaled(four));
    add("f*(x1 x3 + x2 x4) = 4 x1 x2 x3 x4 (x1 x3 + x2 x4)", pullback(f, q2), (m * q2).scaled(four));
    return checks;
}

// the suite passes when the plane identities and the two pencil quadrics
// hold, and the third quadric holds exactly for gamma = 1
inline bool identity_suite_ok(const BirationalMap& f, const Rational& gamma) {
    std::vector<IdentityCheck> checks = identity_suite(f, gamma);
    for (size_t i = 0; i + 1 < checks.size(); ++i)
        if (!checks[i].ok) return false;
    return checks.back().ok == (gamma == Rational(1));
}

}  // namespace birat
