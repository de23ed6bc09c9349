#pragma once
// Birational self-maps of P^3 given by four homogeneous components of a
// common degree, together with the critical factors that account for every
// degree drop under pull-back.

#include "chart.hpp"
#include "polynomial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace birat {

struct BirationalMap {
    std::string name;
    std::vector<std::string> coordinates;   // printing names, size 4
    std::vector<Polynomial> components;     // size 4, homogeneous of equal degree
    std::vector<Polynomial> critical_factors;
    std::vector<Polynomial> inverse_components;  // empty when not supplied

    int degree() const { return components.front().degree(); }
    bool has_inverse() const { return !inverse_components.empty(); }
};

inline BirationalMap make_birational_map(std::string name, std::vector<std::string> coordinates,
                                         std::vector<Polynomial> components,
                                         std::vector<Polynomial> critical_factors,
                                         std::vector<Polynomial> inverse_components = {}) {
    auto check_tuple = [](const std::vector<Polynomial>& comps, const char* what) {
        if (comps.size() != 4) throw std::invalid_argument(std::string(what) + ": need 4 components");
        int deg = -1;
        for (const Polynomial& p : comps) {
            if (p.vars() != 4) throw std::invalid_argument(std::string(what) + ": components live in 4 variables");
            if (p.is_zero()) throw std::invalid_argument(std::string(what) + ": zero component");
            if (!p.is_homogeneous()) throw std::invalid_argument(std::string(what) + ": component not homogeneous");
            if (deg < 0) deg = p.degree();
            if (p.degree() != deg) throw std::invalid_argument(std::string(what) + ": mixed component degrees");
        }
    };
    check_tuple(components, "map");
    if (!inverse_components.empty()) check_tuple(inverse_components, "inverse");
    if (coordinates.size() != 4) throw std::invalid_argument("need 4 coordinate names");
    for (const Polynomial& k : critical_factors) {
        if (k.vars() != 4 || k.is_zero() || !k.is_homogeneous() || k.degree() < 1)
            throw std::invalid_argument("critical factors must be nonconstant homogeneous forms");
    }
    BirationalMap f;
    f.name = std::move(name);
    f.coordinates = std::move(coordinates);
    f.components = std::move(components);
    f.critical_factors = std::move(critical_factors);
    f.inverse_components = std::move(inverse_components);
    return f;
}

// total pull-back p o f
inline Polynomial pullback(const BirationalMap& f, const Polynomial& p) {
    if (p.vars() != 4) throw std::invalid_argument("pullback expects a polynomial in 4 variables");
    return substitute(p, f.components);
}

struct PullbackResult {
    Polynomial proper;           // pull-back with all critical factors removed
    std::vector<int> exponents;  // extracted power per critical factor
};

// proper pull-back: divide every critical factor out of p o f to maximal power
inline PullbackResult proper_pullback(const BirationalMap& f, const Polynomial& p) {
    if (p.is_zero()) throw std::domain_error("proper pull-back of the zero polynomial");
    PullbackResult r;
    r.proper = pullback(f, p);
    r.exponents.reserve(f.critical_factors.size());
    for (const Polynomial& k : f.critical_factors) {
        auto [q, e] = divide_out(r.proper, k);
        r.proper = std::move(q);
        r.exponents.push_back(e);
    }
    return r;
}

struct IterateResult {
    std::vector<Polynomial> components;  // normalized components of f^n
    int degree = 0;
    std::vector<int> removed;  // critical-factor powers cleared at the final step
};

// components of f^n with common critical-factor powers and monomial content
// removed after every composition step
inline IterateResult iterate_normalized(const BirationalMap& f, int n) {
    if (n < 0) throw std::invalid_argument("iterate of negative order");
    std::vector<Polynomial> comps;
    for (int i = 0; i < 4; ++i) comps.push_back(Polynomial::variable(4, i));
    IterateResult r;
    r.removed.assign(f.critical_factors.size(), 0);
    for (int step = 0; step < n; ++step) {
        for (Polynomial& c : comps) c = substitute(c, f.components);
        r.removed.assign(f.critical_factors.size(), 0);
        for (size_t i = 0; i < f.critical_factors.size(); ++i) {
            int common = -1;
            for (const Polynomial& c : comps) {
                auto [q, e] = divide_out(c, f.critical_factors[i]);
                (void)q;
                common = common < 0 ? e : std::min(common, e);
                if (common == 0) break;
            }
            if (common > 0) {
                Polynomial power = f.critical_factors[i].pow(static_cast<unsigned>(common));
                for (Polynomial& c : comps) {
                    auto q = trial_divide(c, power);
                    if (!q) throw std::logic_error("critical factor extraction disagrees");
                    c = std::move(*q);
                }
                r.removed[i] = common;
            }
        }
        Monomial content = monomial_content(comps[0]);
        for (const Polynomial& c : comps) {
            if (content.is_constant()) break;
            Monomial mc = monomial_content(c);
            for (int v = 0; v < 4; ++v) content.set(v, std::min(content.exponent(v), mc.exponent(v)));
        }
        if (!content.is_constant())
            for (Polynomial& c : comps) c = divide_by_monomial(c, content);
    }
    r.degree = comps.front().degree();
    for (const Polynomial& c : comps)
        if (c.degree() != r.degree) throw std::logic_error("normalized iterate has mixed degrees");
    r.components = std::move(comps);
    return r;
}

// ---- critical factor validation ---------------------------------------------

struct FactorInfo {
    Polynomial factor;
    int jacobian_multiplicity = 0;
    int image_dimension = -1;  // dimension of f({factor = 0}); -1 when not computed
};

struct CriticalReport {
    std::vector<FactorInfo> factors;
    bool jacobian_accounted = false;  // jacobian = const * monomial * product of factors
    Monomial jacobian_monomial;
    Rational jacobian_unit;
    bool inverse_checked = false;
    bool inverse_consistent = false;
    Polynomial inverse_factor;  // g with (f_inv o f)_i = x_i * g
};

namespace detail {

// parametrize the plane {k = 0} projectively by three of the coordinates
inline std::vector<Polynomial> projective_plane_param(const Polynomial& k) {
    std::array<Rational, 4> c;
    int solved = -1;
    for (int j = 0; j < 4; ++j) {
        c[j] = k.coefficient(Monomial::unit(j));
        if (!c[j].is_zero()) solved = j;
    }
    std::vector<Polynomial> param(4, Polynomial::zero(3));
    int next = 0;
    for (int j = 0; j < 4; ++j)
        if (j != solved) param[j] = Polynomial::variable(3, next++);
    Polynomial rest = Polynomial::zero(3);
    for (int j = 0; j < 4; ++j)
        if (j != solved) rest = rest + param[j].scaled(c[j]);
    param[solved] = rest.scaled(Rational(-1) / c[solved]);
    return param;
}

// generic rank of the jacobian of a polynomial map P^2 -> P^3
inline int generic_rank(const std::vector<Polynomial>& comps) {
    std::vector<std::vector<Polynomial>> jac(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) jac[i].push_back(derivative(comps[i], j));
    for (int size = 3; size >= 1; --size) {
        // enumerate all row/column subsets of the 4 x 3 matrix
        for (int rmask = 0; rmask < 16; ++rmask) {
            if (__builtin_popcount(rmask) != size) continue;
            for (int cmask = 0; cmask < 8; ++cmask) {
                if (__builtin_popcount(cmask) != size) continue;
                std::vector<std::vector<Polynomial>> sub;
                for (int i = 0; i < 4; ++i) {
                    if (!(rmask & (1 << i))) continue;
                    std::vector<Polynomial> row;
                    for (int j = 0; j < 3; ++j)
                        if (cmask & (1 << j)) row.push_back(jac[i][j]);
                    sub.push_back(std::move(row));
                }
                if (!det_rec(sub).is_zero()) return size;
            }
        }
    }
    return 0;
}

}  // namespace detail

inline CriticalReport validate_critical_factors(const BirationalMap& f) {
    CriticalReport rep;
    Polynomial jac = jacobian_determinant(f.components);
    if (jac.is_zero()) throw std::domain_error("map has identically vanishing jacobian");
    for (const Polynomial& k : f.critical_factors) {
        FactorInfo info;
        info.factor = k;
        auto [rest, mult] = divide_out(jac, k);
        jac = std::move(rest);
        info.jacobian_multiplicity = mult;
        if (k.degree() == 1) {
            std::vector<Polynomial> param = detail::projective_plane_param(k);
            std::vector<Polynomial> image;
            for (const Polynomial& c : f.components) image.push_back(substitute(c, param));
            info.image_dimension = detail::generic_rank(image) - 1;
        }
        rep.factors.push_back(std::move(info));
    }
    rep.jacobian_monomial = monomial_content(jac);
    jac = divide_by_monomial(jac, rep.jacobian_monomial);
    rep.jacobian_accounted = jac.degree() == 0;
    rep.jacobian_unit = rep.jacobian_accounted ? jac.leading_term().coef : Rational(0);

    if (f.has_inverse()) {
        rep.inverse_checked = true;
        rep.inverse_consistent = true;
        std::vector<Polynomial> round;
        for (const Polynomial& g : f.inverse_components) round.push_back(pullback(f, g));
        for (int i = 0; i < 4 && rep.inverse_consistent; ++i) {
            auto q = trial_divide(round[i], Polynomial::variable(4, i));
            if (!q) {
                rep.inverse_consistent = false;
                break;
            }
            if (i == 0)
                rep.inverse_factor = std::move(*q);
            else if (*q != rep.inverse_factor)
                rep.inverse_consistent = false;
        }
    }
    return rep;
}

}  // namespace birat
