#pragma once
// Local charts of blow-up towers over P^3.
//
// A chart is a parametrization [p0:p1:p2:p3] of projective space by local
// coordinates (u, v, w) such that u = 0 contracts to a single point (the
// center of the tower). Charts are assembled from elementary steps: an
// initial point chart in an affine patch, followed by point or curve
// blow-ups expressed in the local coordinates. Each step also composes a
// rational-function inverse, so a finished chart can push sets *forward*
// into its exceptional coordinates; that is what the divisor transfer
// check below relies on.

#include "linalg.hpp"
#include "polynomial.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace birat {

// drop every term with a positive power of the given variable
inline Polynomial set_var_zero(const Polynomial& p, int var) {
    std::vector<Term> kept;
    for (const Term& t : p.terms())
        if (t.mon.exponent(var) == 0) kept.push_back(t);
    return Polynomial::from_terms(p.vars(), std::move(kept));
}

// largest monomial dividing every term; unit for the zero polynomial
inline Monomial monomial_content(const Polynomial& p) {
    if (p.is_zero()) return Monomial{};
    Monomial c = p.terms().front().mon;
    for (const Term& t : p.terms()) {
        if (c.is_constant()) break;
        for (int v = 0; v < p.vars(); ++v) {
            int e = t.mon.exponent(v);
            if (e < c.exponent(v)) c.set(v, e);
        }
    }
    return c;
}

inline Polynomial divide_by_monomial(const Polynomial& p, Monomial m) {
    if (m.is_constant()) return p;
    std::vector<Term> ts;
    ts.reserve(p.term_count());
    for (const Term& t : p.terms()) {
        if (!m.divides(t.mon)) throw std::domain_error("monomial does not divide polynomial");
        ts.push_back(Term{t.mon.quotient_by(m), t.coef});
    }
    return Polynomial::from_terms(p.vars(), std::move(ts));
}

// ---- linear changes of variables ---------------------------------------------

namespace detail {

inline Polynomial swap_vars(const Polynomial& p, int i, int j) {
    std::vector<Term> ts;
    ts.reserve(p.term_count());
    for (const Term& t : p.terms()) {
        Monomial m = t.mon;
        int ei = m.exponent(i), ej = m.exponent(j);
        m.set(i, ej);
        m.set(j, ei);
        ts.push_back(Term{m, t.coef});
    }
    return Polynomial::from_terms(p.vars(), std::move(ts));
}

inline Polynomial scale_var(const Polynomial& p, int i, const Rational& c) {
    if (c.is_zero()) throw std::invalid_argument("variable scale must be invertible");
    std::vector<Term> ts;
    ts.reserve(p.term_count());
    std::vector<Rational> cp{Rational(1)};
    for (const Term& t : p.terms()) {
        int e = t.mon.exponent(i);
        while (static_cast<int>(cp.size()) <= e) cp.push_back(cp.back() * c);
        ts.push_back(Term{t.mon, t.coef * cp[e]});
    }
    return Polynomial::from_terms(p.vars(), std::move(ts));
}

// x_i <- x_i + c*x_j, one binomial expansion per term
inline Polynomial shear_var(const Polynomial& p, int i, int j, const Rational& c) {
    if (i == j) throw std::invalid_argument("shear needs two distinct variables");
    FlatAccum acc(p.term_count() * 2);
    for (const Term& t : p.terms()) {
        int e = t.mon.exponent(i);
        acc.add(t.mon, t.coef);
        if (e == 0) continue;
        Rational binom(1);  // C(e,k) * c^k
        int ej = t.mon.exponent(j);
        Monomial m = t.mon;
        for (int k = 1; k <= e; ++k) {
            binom *= c;
            binom *= Rational(e - k + 1);
            binom /= Rational(k);
            m.set(i, e - k);
            m.set(j, ej + k);
            acc.add(m, t.coef * binom);
        }
    }
    return Polynomial::from_terms(p.vars(), acc.extract());
}

}  // namespace detail

// P(L x) for an invertible matrix L, applied as a chain of elementary column
// operations -- far cheaper than a generic composition when L is dense
inline Polynomial linear_substitute(const Polynomial& p, const QMat& l) {
    int n = p.vars();
    if (static_cast<int>(l.size()) != n) throw std::invalid_argument("matrix size must match variable count");
    for (const QVec& row : l)
        if (static_cast<int>(row.size()) != n) throw std::invalid_argument("matrix must be square");
    // row-reduce a copy to the identity, recording the operations; replaying
    // their inverses in the same order applies L itself
    struct Op {
        char kind;  // 's' swap, 'd' scale, 't' shear
        int i, j;
        Rational c;
    };
    std::vector<Op> ops;
    QMat m = l;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n && piv < 0; ++r)
            if (!m[r][col].is_zero()) piv = r;
        if (piv < 0) throw std::invalid_argument("linear change is singular");
        if (piv != col) {
            std::swap(m[piv], m[col]);
            ops.push_back({'s', piv, col, Rational(0)});
        }
        if (!m[col][col].is_one()) {
            Rational c = m[col][col];
            for (Rational& x : m[col]) x /= c;
            ops.push_back({'d', col, col, c});
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            Rational c = m[r][col];
            for (int k = 0; k < n; ++k) m[r][k] -= c * m[col][k];
            ops.push_back({'t', r, col, c});
        }
    }
    Polynomial out = p;
    for (const Op& op : ops) {
        switch (op.kind) {
            case 's': out = detail::swap_vars(out, op.i, op.j); break;
            case 'd': out = detail::scale_var(out, op.i, op.c); break;
            case 't': out = detail::shear_var(out, op.i, op.j, op.c); break;
        }
    }
    return out;
}

// ---- rational functions -----------------------------------------------------

class RationalFunction {
public:
    RationalFunction() : num_(Polynomial::zero(1)), den_(Polynomial::constant(1, Rational(1))) {}

    RationalFunction(Polynomial num, Polynomial den)
        : num_(std::move(num)), den_(std::move(den)) {
        if (num_.vars() != den_.vars()) throw std::invalid_argument("num/den variable mismatch");
        if (den_.is_zero()) throw std::domain_error("zero denominator");
        normalize();
    }

    static RationalFunction from_poly(Polynomial p) {
        int nv = p.vars();
        return RationalFunction(std::move(p), Polynomial::constant(nv, Rational(1)));
    }

    static RationalFunction constant(int nvars, Rational c) {
        return from_poly(Polynomial::constant(nvars, std::move(c)));
    }

    static RationalFunction variable(int nvars, int var) {
        return from_poly(Polynomial::variable(nvars, var));
    }

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    int vars() const { return num_.vars(); }
    bool is_zero() const { return num_.is_zero(); }

    bool is_polynomial() const {
        return den_.degree() == 0;  // normalized, so a unit denominator is constant
    }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RationalFunction operator-(const RationalFunction& a) {
        RationalFunction r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
        if (b.num_.is_zero()) throw std::domain_error("division by zero rational function");
        return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
        return a.num_ * b.den_ == b.num_ * a.den_;
    }
    friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

    // substitution of polynomial images for every variable
    RationalFunction substitute(const std::vector<Polynomial>& images) const {
        Polynomial d = birat::substitute(den_, images);
        if (d.is_zero()) throw std::domain_error("substitution lands in the pole locus");
        return RationalFunction(birat::substitute(num_, images), std::move(d));
    }

    bool is_constant() const {
        if (num_.is_zero()) return true;
        if (num_.degree() == 0 && den_.degree() == 0) return true;
        // num = c * den for a scalar c
        Rational c = num_.leading_term().coef / den_.leading_term().coef;
        return num_ == den_.scaled(c);
    }

    std::string str(const std::vector<std::string>& names) const {
        if (is_polynomial()) return to_string(num_, names);
        std::string n = to_string(num_, names);
        std::string d = to_string(den_, names);
        if (num_.term_count() > 1) n = "(" + n + ")";
        if (den_.term_count() > 1) d = "(" + d + ")";
        return n + "/" + d;
    }

private:
    // strip common monomial content and make the denominator's leading
    // coefficient positive; full gcd reduction is never needed here
    void normalize() {
        if (num_.is_zero()) {
            den_ = Polynomial::constant(num_.vars(), Rational(1));
            return;
        }
        Monomial cn = monomial_content(num_), cd = monomial_content(den_);
        Monomial common;
        for (int v = 0; v < num_.vars(); ++v)
            common.set(v, std::min(cn.exponent(v), cd.exponent(v)));
        if (!common.is_constant()) {
            num_ = divide_by_monomial(num_, common);
            den_ = divide_by_monomial(den_, common);
        }
        if (den_.leading_term().coef.sign() < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (den_.degree() == 0) {
            Rational c = den_.leading_term().coef;
            if (!c.is_one()) {
                num_ = num_.scaled(Rational(1) / c);
                den_ = Polynomial::constant(num_.vars(), Rational(1));
            }
        }
    }

    Polynomial num_, den_;
};

// evaluate a polynomial at rational-function arguments (small inputs only)
inline RationalFunction rf_eval(const Polynomial& p, const std::vector<RationalFunction>& args) {
    if (static_cast<int>(args.size()) != p.vars())
        throw std::invalid_argument("rf_eval arity mismatch");
    int out_nv = args.empty() ? 1 : args[0].vars();
    RationalFunction acc = RationalFunction::constant(out_nv, Rational(0));
    for (const Term& t : p.terms()) {
        RationalFunction m = RationalFunction::constant(out_nv, t.coef);
        for (int v = 0; v < p.vars(); ++v)
            for (int e = t.mon.exponent(v); e > 0; --e) m = m * args[v];
        acc = acc + m;
    }
    return acc;
}

// restriction of a rational function to u = 0 after clearing the common
// u-power; nullopt when the restriction has a pole there
inline std::optional<RationalFunction> restrict_to_u0(const RationalFunction& f, int uvar = 0) {
    if (f.is_zero()) return f;
    int a = u_valuation(f.num(), uvar), b = u_valuation(f.den(), uvar);
    int m = std::min(a, b);
    Polynomial n = divide_by_monomial(f.num(), Monomial::unit(uvar, m));
    Polynomial d = divide_by_monomial(f.den(), Monomial::unit(uvar, m));
    d = set_var_zero(d, uvar);
    if (d.is_zero()) return std::nullopt;
    return RationalFunction(set_var_zero(n, uvar), std::move(d));
}

// ---- elementary steps -------------------------------------------------------

// initial chart around a point of P^3: one coordinate is set to 1 and the
// remaining three are offset from the center, with the local multipliers
// u, u*v, u*w distributed among them
struct PointChartSpec {
    int patch = 0;                  // index of the coordinate frozen to 1
    std::array<Rational, 3> center; // affine coordinates of the point, ascending coordinate order
    std::array<int, 3> assign;      // per slot: 0 -> u, 1 -> u*v, 2 -> u*w (a permutation)
};

struct ElementaryStep {
    enum class Kind { point, curve_v, curve_w };

    Kind kind = Kind::point;
    Rational cv, cw;   // point step: (u,v,w) <- (u, cv + u v, cw + u w)
    Polynomial graph;  // curve steps: v <- g + u v resp. w <- g + u w

    static ElementaryStep point(Rational cv, Rational cw) {
        ElementaryStep s;
        s.kind = Kind::point;
        s.cv = std::move(cv);
        s.cw = std::move(cw);
        return s;
    }
    static ElementaryStep curve_v(Polynomial g) {
        ElementaryStep s;
        s.kind = Kind::curve_v;
        s.graph = std::move(g);
        return s;
    }
    static ElementaryStep curve_w(Polynomial g) {
        ElementaryStep s;
        s.kind = Kind::curve_w;
        s.graph = std::move(g);
        return s;
    }
};

// construction record kept for serialization
struct ChartRecipe {
    PointChartSpec spec;
    std::vector<ElementaryStep> steps;
    std::optional<QMat> post_linear;
};

struct Chart {
    std::string name;
    std::vector<Polynomial> param;       // 4 polynomials in (u, v, w)
    QVec base_point;                     // param at u = 0, a single point of P^3
    std::vector<RationalFunction> inverse;  // (u, v, w) in homogeneous coordinates; may be empty
    std::optional<ChartRecipe> recipe;

    bool has_inverse() const { return !inverse.empty(); }
};

namespace detail {

inline QVec chart_base_point(const std::vector<Polynomial>& param) {
    QVec base;
    bool all_zero = true;
    for (const Polynomial& p : param) {
        Polynomial p0 = set_var_zero(p, 0);
        if (p0.degree() > 0)
            throw std::invalid_argument("chart does not contract to a point at u = 0");
        Rational c = p0.is_zero() ? Rational(0) : p0.leading_term().coef;
        if (!c.is_zero()) all_zero = false;
        base.push_back(std::move(c));
    }
    if (all_zero) throw std::invalid_argument("chart parametrization vanishes at u = 0");
    return base;
}

}  // namespace detail

// build a chart from raw parametrization data (no inverse attached)
inline Chart make_chart(std::string name, std::vector<Polynomial> param) {
    if (param.size() != 4) throw std::invalid_argument("chart needs 4 coordinates");
    for (const Polynomial& p : param)
        if (p.vars() != 3) throw std::invalid_argument("chart coordinates live in (u,v,w)");
    Chart c;
    c.name = std::move(name);
    c.base_point = detail::chart_base_point(param);
    c.param = std::move(param);
    return c;
}

namespace detail {

// parametrization of the initial point chart: patch coordinate frozen to 1,
// the others offset from the center with multipliers u, u*v, u*w
inline std::vector<Polynomial> spec_base_param(const PointChartSpec& spec) {
    const Polynomial u = Polynomial::variable(3, 0);
    const Polynomial v = Polynomial::variable(3, 1);
    const Polynomial w = Polynomial::variable(3, 2);
    std::vector<Polynomial> param(4, Polynomial::constant(3, Rational(1)));
    for (int i = 0, s = 0; i < 4; ++i) {
        if (i == spec.patch) continue;
        Polynomial mult = u;
        if (spec.assign[s] == 1) mult = u * v;
        if (spec.assign[s] == 2) mult = u * w;
        param[i] = Polynomial::constant(3, spec.center[s]) + mult;
        ++s;
    }
    return param;
}

// (u, v, w) images of one in-chart blow-up step
inline std::vector<Polynomial> step_images(const ElementaryStep& st) {
    const Polynomial u = Polynomial::variable(3, 0);
    std::vector<Polynomial> images{u, Polynomial::variable(3, 1), Polynomial::variable(3, 2)};
    switch (st.kind) {
        case ElementaryStep::Kind::point:
            images[1] = Polynomial::constant(3, st.cv) + u * images[1];
            images[2] = Polynomial::constant(3, st.cw) + u * images[2];
            break;
        case ElementaryStep::Kind::curve_v:
            if (st.graph.vars() != 3 || st.graph != set_var_zero(st.graph, 1))
                throw std::invalid_argument("curve_v graph must not involve v");
            images[1] = st.graph + u * images[1];
            break;
        case ElementaryStep::Kind::curve_w:
            if (st.graph.vars() != 3 || st.graph != set_var_zero(st.graph, 2))
                throw std::invalid_argument("curve_w graph must not involve w");
            images[2] = st.graph + u * images[2];
            break;
    }
    return images;
}

}  // namespace detail

// compose a chart from an initial point chart and a sequence of in-chart
// blow-up steps, threading the rational inverse through every step
inline Chart compose_elementary(std::string name, const PointChartSpec& spec,
                                const std::vector<ElementaryStep>& steps) {
    {
        std::array<bool, 3> seen{};
        for (int a : spec.assign) {
            if (a < 0 || a > 2 || seen[a]) throw std::invalid_argument("assign must permute u, u*v, u*w");
            seen[a] = true;
        }
        if (spec.patch < 0 || spec.patch > 3) throw std::invalid_argument("patch out of range");
    }

    std::vector<Polynomial> param = detail::spec_base_param(spec);
    std::vector<RationalFunction> inv(3);

    // coordinate index handled by each slot, in ascending order
    std::array<int, 3> slot_coord{};
    for (int i = 0, s = 0; i < 4; ++i)
        if (i != spec.patch) slot_coord[s++] = i;

    auto homog = [](int var) { return RationalFunction::variable(4, var); };
    RationalFunction xp = homog(spec.patch);

    int axis = -1;
    for (int s = 0; s < 3; ++s)
        if (spec.assign[s] == 0) axis = s;
    RationalFunction u_rf =
        (homog(slot_coord[axis]) - RationalFunction::constant(4, spec.center[axis]) * xp) / xp;
    inv[0] = u_rf;

    for (int s = 0; s < 3; ++s) {
        if (spec.assign[s] == 0) continue;
        RationalFunction affine =
            (homog(slot_coord[s]) - RationalFunction::constant(4, spec.center[s]) * xp) / xp;
        inv[spec.assign[s]] = affine / u_rf;
    }

    for (const ElementaryStep& st : steps) {
        std::vector<Polynomial> images = detail::step_images(st);
        switch (st.kind) {
            case ElementaryStep::Kind::point: {
                RationalFunction cu = inv[0];
                inv[1] = (inv[1] - RationalFunction::constant(4, st.cv)) / cu;
                inv[2] = (inv[2] - RationalFunction::constant(4, st.cw)) / cu;
                break;
            }
            case ElementaryStep::Kind::curve_v:
                inv[1] = (inv[1] - rf_eval(st.graph, {inv[0], inv[1], inv[2]})) / inv[0];
                break;
            case ElementaryStep::Kind::curve_w:
                inv[2] = (inv[2] - rf_eval(st.graph, {inv[0], inv[1], inv[2]})) / inv[0];
                break;
        }
        for (Polynomial& p : param) p = substitute(p, images);
    }

    Chart c = make_chart(std::move(name), std::move(param));
    c.inverse = std::move(inv);
    c.recipe = ChartRecipe{spec, steps, std::nullopt};
    return c;
}

// post-compose with an invertible linear change of homogeneous coordinates
inline Chart apply_linear(const Chart& chart, const QMat& l) {
    if (l.size() != 4) throw std::invalid_argument("linear change must be 4 x 4");
    Chart out;
    out.name = chart.name;
    out.param.assign(4, Polynomial::zero(3));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (!l[i][j].is_zero()) out.param[i] = out.param[i] + chart.param[j].scaled(l[i][j]);
    out.base_point = detail::chart_base_point(out.param);
    if (chart.has_inverse()) {
        QMat linv = q_inverse(l);
        std::vector<Polynomial> back(4, Polynomial::zero(4));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (!linv[i][j].is_zero())
                    back[i] = back[i] + Polynomial::variable(4, j).scaled(linv[i][j]);
        for (const RationalFunction& f : chart.inverse) out.inverse.push_back(f.substitute(back));
    }
    if (chart.recipe) {
        out.recipe = chart.recipe;
        out.recipe->post_linear = chart.recipe->post_linear ? q_mul(l, *chart.recipe->post_linear) : l;
    }
    return out;
}

namespace detail {

// valuation along the recorded tower.  Composition is done step by step with
// the accumulated u-power stripped after each level -- valid because every
// step maps u to u, and valuations add over products.  Work happens modulo
// u^(remaining headroom); a vanishing level means the bound was too small.
inline std::optional<int> recipe_index(const ChartRecipe& r, const Polynomial& p, int bound) {
    Polynomial f = substitute_truncated(p, spec_base_param(r.spec), 0, bound);
    int acc = 0;
    auto strip = [&](Polynomial& q) {
        if (q.is_zero()) return false;
        int a = u_valuation(q, 0);
        if (a > 0) {
            q = divide_by_monomial(q, Monomial::unit(0, a));
            acc += a;
            bound -= a;
        }
        return true;
    };
    if (!strip(f)) return std::nullopt;
    for (const ElementaryStep& st : r.steps) {
        f = substitute_truncated(f, step_images(st), 0, bound);
        if (!strip(f)) return std::nullopt;
    }
    return acc;
}

}  // namespace detail

// index of a polynomial already moved into the chart's tower frame, i.e. with
// any post_linear change of the recipe applied to it beforehand
inline int chart_index_local(const Chart& chart, const Polynomial& p, int start_hint = -1) {
    int cap = 1;
    for (const Polynomial& c : chart.param) cap = std::max(cap, c.degree());
    cap = cap * std::max(p.degree(), 1) + 1;
    for (int bound = start_hint >= 1 ? start_hint : 8;; bound *= 2) {
        int b = std::min(bound, cap);
        if (chart.recipe) {
            if (std::optional<int> v = detail::recipe_index(*chart.recipe, p, b)) return *v;
        } else {
            Polynomial q = substitute_truncated(p, chart.param, 0, b);
            if (!q.is_zero()) return u_valuation(q, 0);
        }
        if (bound >= cap)
            throw std::domain_error("polynomial vanishes identically on chart " + chart.name);
    }
}

// u-adic index of a polynomial at a chart.  Only the valuation is wanted, so
// substitution is truncated modulo u^K and K escalates until something
// survives; the image is identically zero only if it still vanishes past
// deg(p)*max(deg param).  start_hint, when given, seeds K just above the
// expected valuation (callers iterating an orbit can extrapolate); the result
// is exact either way.
inline int chart_index(const Chart& chart, const Polynomial& p, int start_hint = -1) {
    if (chart.recipe && chart.recipe->post_linear) {
        // param = L o tower, so index(P) = index of P o L along the bare tower
        return chart_index_local(chart, linear_substitute(p, *chart.recipe->post_linear), start_hint);
    }
    return chart_index_local(chart, p, start_hint);
}

struct ChartSet {
    std::vector<Chart> charts;

    const Chart& at(const std::string& name) const {
        for (const Chart& c : charts)
            if (c.name == name) return c;
        throw std::out_of_range("no chart named " + name);
    }
    bool contains(const std::string& name) const {
        for (const Chart& c : charts)
            if (c.name == name) return true;
        return false;
    }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const Chart& c : charts) out.push_back(c.name);
        return out;
    }
};

// parametrize the plane {k = 0} by (v, w) with a transverse coordinate u,
// so that k pulls back to exactly u; k must be linear
inline std::vector<Polynomial> plane_source(const Polynomial& k) {
    if (k.vars() != 4 || k.degree() != 1 || !k.is_homogeneous())
        throw std::invalid_argument("plane source needs a linear form in 4 variables");
    std::array<Rational, 4> c;
    for (int j = 0; j < 4; ++j) c[j] = k.coefficient(Monomial::unit(j));
    int solved = -1;
    for (int j = 3; j >= 0; --j)
        if (!c[j].is_zero()) {
            solved = j;
            break;
        }
    int patch = -1;
    for (int j = 0; j < 4; ++j)
        if (c[j].is_zero()) {
            patch = j;
            break;
        }
    if (patch < 0)
        for (int j = 0; j < 4; ++j)
            if (j != solved) {
                patch = j;
                break;
            }

    const Polynomial u = Polynomial::variable(3, 0);
    std::vector<Polynomial> param(4, Polynomial::zero(3));
    param[patch] = Polynomial::constant(3, Rational(1));
    int next = 1;  // v, then w
    for (int j = 0; j < 4; ++j)
        if (j != patch && j != solved) param[j] = Polynomial::variable(3, next++);
    Polynomial rest = Polynomial::zero(3);
    for (int j = 0; j < 4; ++j)
        if (j != solved) rest = rest + param[j].scaled(c[j]);
    param[solved] = (u - rest).scaled(Rational(1) / c[solved]);
    return param;
}

// ---- divisor transfer -------------------------------------------------------

// How a map carries the divisor u = 0 of a source parametrization into a
// target chart: compose, clear the common u-power, and read the image off
// the target's inverse coordinates.
struct TransferCheck {
    int stripped_power = 0;    // common u-power of the composed parametrization
    int target_valuation = 0;  // u-adic order of the target u-coordinate
    bool defined = false;      // restriction to u = 0 lands in the target chart
    bool constant_image = true;  // the induced map contracts the divisor to a point
    std::optional<RationalFunction> v_image, w_image;  // induced (v,w)-map along u = 0
};

inline TransferCheck exceptional_image_check(const std::vector<Polynomial>& map_components,
                                             const std::vector<Polynomial>& source_param,
                                             const Chart& target) {
    if (map_components.size() != 4 || source_param.size() != 4)
        throw std::invalid_argument("transfer check needs 4 map components and 4 source coordinates");
    if (!target.has_inverse())
        throw std::invalid_argument("target chart " + target.name + " carries no inverse data");

    std::vector<Polynomial> composed;
    int strip = -1;
    for (const Polynomial& f : map_components) {
        Polynomial g = substitute(f, source_param);
        if (!g.is_zero()) {
            int val = u_valuation(g, 0);
            strip = strip < 0 ? val : std::min(strip, val);
        }
        composed.push_back(std::move(g));
    }
    if (strip < 0) throw std::domain_error("map vanishes identically on the source");
    for (Polynomial& g : composed)
        if (!g.is_zero()) g = divide_by_monomial(g, Monomial::unit(0, strip));

    TransferCheck out;
    out.stripped_power = strip;

    auto pull = [&](const RationalFunction& coord) -> std::optional<RationalFunction> {
        Polynomial n = substitute(coord.num(), composed);
        Polynomial d = substitute(coord.den(), composed);
        if (d.is_zero()) return std::nullopt;
        return RationalFunction(std::move(n), std::move(d));
    };

    std::optional<RationalFunction> ut = pull(target.inverse[0]);
    if (!ut || ut->is_zero())
        throw std::domain_error("target u-coordinate degenerates on the source");
    out.target_valuation = u_valuation(ut->num(), 0) - u_valuation(ut->den(), 0);

    std::optional<RationalFunction> vt = pull(target.inverse[1]);
    std::optional<RationalFunction> wt = pull(target.inverse[2]);
    if (vt) out.v_image = restrict_to_u0(*vt);
    if (wt) out.w_image = restrict_to_u0(*wt);
    out.defined = out.v_image.has_value() && out.w_image.has_value() && out.target_valuation >= 1;
    if (out.defined)
        out.constant_image = out.v_image->is_constant() && out.w_image->is_constant();
    return out;
}

}  // namespace birat
