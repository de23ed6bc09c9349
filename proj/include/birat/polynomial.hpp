#pragma once
// Sparse multivariate polynomials over exact rationals.
//
// Terms are kept sorted in descending graded-lex order (variable 0 most
// significant) with no zero coefficients, so equality is structural and the
// text form is canonical. Products and compositions accumulate through a
// flat hash table; composition is a recursive Horner scheme, one variable
// per level.

#include "monomial.hpp"
#include "rational.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

namespace birat {

struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// global ceiling on the number of distinct monomials a single product or
// composition may accumulate
inline size_t& term_limit() {
    static size_t limit = 2'000'000;
    return limit;
}

struct Term {
    Monomial mon;
    Rational coef;
};

namespace detail {

// open-addressing monomial -> coefficient accumulator
class FlatAccum {
public:
    explicit FlatAccum(size_t expected) {
        size_t cap = 64;
        while (cap * 7 < expected * 10) cap <<= 1;
        keys_.resize(cap);
        vals_.resize(cap);
        used_.assign(cap, 0);
        mask_ = cap - 1;
    }

    void add_mul(Monomial m, const Rational& a, const Rational& b) {
        Rational& slot = locate(m);
        slot.add_mul(a, b);
    }

    void add(Monomial m, const Rational& a) {
        Rational& slot = locate(m);
        slot += a;
    }

    std::vector<Term> extract() {
        std::vector<Term> out;
        out.reserve(count_);
        for (size_t i = 0; i <= mask_; ++i)
            if (used_[i] && !vals_[i].is_zero())
                out.push_back(Term{keys_[i], std::move(vals_[i])});
        std::sort(out.begin(), out.end(),
                  [](const Term& x, const Term& y) { return graded_lex_greater(x.mon, y.mon); });
        return out;
    }

private:
    Rational& locate(Monomial m) {
        size_t i = monomial_hash(m) & mask_;
        while (used_[i]) {
            if (keys_[i] == m) return vals_[i];
            i = (i + 1) & mask_;
        }
        if (++count_ > term_limit())
            throw ResourceLimitError("monomial count exceeds term limit (" +
                                     std::to_string(term_limit()) + ")");
        if (count_ * 10 > (mask_ + 1) * 7) {
            grow();
            return locate(m);
        }
        used_[i] = 1;
        keys_[i] = m;
        return vals_[i];
    }

    void grow() {
        size_t cap = (mask_ + 1) << 1;
        std::vector<Monomial> ok = std::move(keys_);
        std::vector<Rational> ov = std::move(vals_);
        std::vector<uint8_t> ou = std::move(used_);
        keys_.assign(cap, Monomial{});
        vals_.assign(cap, Rational{});
        used_.assign(cap, 0);
        mask_ = cap - 1;
        for (size_t i = 0; i < ou.size(); ++i) {
            if (!ou[i]) continue;
            size_t j = monomial_hash(ok[i]) & mask_;
            while (used_[j]) j = (j + 1) & mask_;
            used_[j] = 1;
            keys_[j] = ok[i];
            vals_[j] = std::move(ov[i]);
        }
    }

    std::vector<Monomial> keys_;
    std::vector<Rational> vals_;
    std::vector<uint8_t> used_;
    size_t mask_ = 0;
    size_t count_ = 0;
};

}  // namespace detail

class Polynomial {
public:
    Polynomial() : nv_(0) {}
    explicit Polynomial(int nvars) : nv_(check_nv(nvars)) {}

    static Polynomial zero(int nvars) { return Polynomial(nvars); }

    static Polynomial constant(int nvars, Rational c) {
        Polynomial p(nvars);
        if (!c.is_zero()) p.terms_.push_back(Term{Monomial{}, std::move(c)});
        return p;
    }

    static Polynomial variable(int nvars, int var) {
        return monomial(nvars, Monomial::unit(var), Rational(1));
    }

    static Polynomial monomial(int nvars, Monomial m, Rational c) {
        Polynomial p(nvars);
        p.check_mon(m);
        if (!c.is_zero()) p.terms_.push_back(Term{m, std::move(c)});
        return p;
    }

    // canonicalizes: sorts, combines, drops zeros
    static Polynomial from_terms(int nvars, std::vector<Term> ts) {
        Polynomial p(nvars);
        for (const Term& t : ts) p.check_mon(t.mon);
        std::sort(ts.begin(), ts.end(),
                  [](const Term& a, const Term& b) { return graded_lex_greater(a.mon, b.mon); });
        for (Term& t : ts) {
            if (!p.terms_.empty() && p.terms_.back().mon == t.mon)
                p.terms_.back().coef += t.coef;
            else
                p.terms_.push_back(std::move(t));
            if (!p.terms_.empty() && p.terms_.back().coef.is_zero()) p.terms_.pop_back();
        }
        return p;
    }

    int vars() const { return nv_; }
    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    // -1 for the zero polynomial
    int degree() const {
        int d = -1;
        for (const Term& t : terms_) d = std::max(d, t.mon.degree());
        return d;
    }

    bool is_homogeneous() const {
        if (terms_.empty()) return true;
        int d = terms_.front().mon.degree();
        for (const Term& t : terms_)
            if (t.mon.degree() != d) return false;
        return true;
    }

    const Term& leading_term() const {
        if (terms_.empty()) throw std::domain_error("leading term of zero polynomial");
        return terms_.front();
    }

    Rational coefficient(Monomial m) const {
        for (const Term& t : terms_)
            if (t.mon == m) return t.coef;
        return Rational(0);
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        if (a.nv_ != b.nv_ || a.terms_.size() != b.terms_.size()) return false;
        for (size_t i = 0; i < a.terms_.size(); ++i)
            if (a.terms_[i].mon != b.terms_[i].mon || a.terms_[i].coef != b.terms_[i].coef)
                return false;
        return true;
    }
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        check_same(a, b);
        Polynomial r(a.nv_);
        r.terms_.reserve(a.terms_.size() + b.terms_.size());
        size_t i = 0, j = 0;
        while (i < a.terms_.size() && j < b.terms_.size()) {
            const Term& ta = a.terms_[i];
            const Term& tb = b.terms_[j];
            if (ta.mon == tb.mon) {
                Rational c = ta.coef + tb.coef;
                if (!c.is_zero()) r.terms_.push_back(Term{ta.mon, std::move(c)});
                ++i, ++j;
            } else if (graded_lex_greater(ta.mon, tb.mon)) {
                r.terms_.push_back(ta);
                ++i;
            } else {
                r.terms_.push_back(tb);
                ++j;
            }
        }
        for (; i < a.terms_.size(); ++i) r.terms_.push_back(a.terms_[i]);
        for (; j < b.terms_.size(); ++j) r.terms_.push_back(b.terms_[j]);
        return r;
    }

    friend Polynomial operator-(const Polynomial& a) {
        Polynomial r = a;
        for (Term& t : r.terms_) t.coef = -t.coef;
        return r;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

    Polynomial scaled(const Rational& c) const {
        if (c.is_zero()) return Polynomial(nv_);
        Polynomial r = *this;
        for (Term& t : r.terms_) t.coef *= c;
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        check_same(a, b);
        if (a.is_zero() || b.is_zero()) return Polynomial(a.nv_);
        if (a.degree() + b.degree() > kMaxExponent)
            throw ResourceLimitError("product degree exceeds monomial capacity");
        if (a.terms_.size() == 1) return b.mul_term(a.terms_.front());
        if (b.terms_.size() == 1) return a.mul_term(b.terms_.front());
        detail::FlatAccum acc(std::max(a.terms_.size(), b.terms_.size()) * 2);
        for (const Term& ta : a.terms_)
            for (const Term& tb : b.terms_) acc.add_mul(ta.mon * tb.mon, ta.coef, tb.coef);
        Polynomial r(a.nv_);
        r.terms_ = acc.extract();
        return r;
    }

    Polynomial pow(unsigned e) const {
        Polynomial r = constant(nv_, Rational(1));
        Polynomial base = *this;
        while (e) {
            if (e & 1) r = r * base;
            if (e >>= 1) base = base * base;
        }
        return r;
    }

    // a*b with every monomial whose `var`-exponent reaches `bound` dropped,
    // i.e. the product in Q[x]/(x_var^bound)
    friend Polynomial mul_truncated(const Polynomial& a, const Polynomial& b, int var, int bound) {
        check_same(a, b);
        if (a.is_zero() || b.is_zero()) return Polynomial(a.nv_);
        if (a.degree() + b.degree() > kMaxExponent)
            throw ResourceLimitError("product degree exceeds monomial capacity");
        detail::FlatAccum acc(std::max(a.terms_.size(), b.terms_.size()) * 2);
        for (const Term& ta : a.terms_) {
            int ea = ta.mon.exponent(var);
            if (ea >= bound) continue;
            for (const Term& tb : b.terms_) {
                if (ea + tb.mon.exponent(var) >= bound) continue;
                acc.add_mul(ta.mon * tb.mon, ta.coef, tb.coef);
            }
        }
        Polynomial r(a.nv_);
        r.terms_ = acc.extract();
        return r;
    }

private:
    Polynomial mul_term(const Term& t) const {  // t * this, order preserved
        Polynomial r(nv_);
        r.terms_.reserve(terms_.size());
        for (const Term& x : terms_) r.terms_.push_back(Term{x.mon * t.mon, x.coef * t.coef});
        return r;
    }

    static int check_nv(int nv) {
        if (nv < 1 || nv > kMaxVars) throw std::invalid_argument("variable count out of range");
        return nv;
    }
    void check_mon(Monomial m) const {
        for (int i = nv_; i < kMaxVars; ++i)
            if (m.exponent(i) != 0) throw std::invalid_argument("monomial uses undeclared variable");
    }
    static void check_same(const Polynomial& a, const Polynomial& b) {
        if (a.nv_ != b.nv_) throw std::invalid_argument("variable count mismatch");
    }

    int nv_;
    std::vector<Term> terms_;
};

// ---- composition -----------------------------------------------------------

namespace detail {

struct Subst {
    std::span<const Polynomial> img;
    int in_vars, out_vars;
    std::vector<const Term*> items;
    std::vector<std::vector<Polynomial>> powers;  // powers[v][e] = img[v]^e, grown on demand
    int tvar = -1, tbound = 0;                    // if tvar >= 0, work modulo tvar^tbound
    std::vector<int> imgval;                      // tvar-valuation of each image

    Polynomial mul(const Polynomial& a, const Polynomial& b) const {
        return tvar >= 0 ? mul_truncated(a, b, tvar, tbound) : a * b;
    }

    const Polynomial& power(int v, int e) {
        auto& pv = powers[v];
        if (pv.empty()) pv.push_back(Polynomial::constant(out_vars, Rational(1)));
        while (static_cast<int>(pv.size()) <= e) pv.push_back(mul(pv.back(), img[v]));
        return pv[e];
    }

    Polynomial run(const Polynomial& p) {
        powers.resize(img.size());
        if (tvar >= 0) {
            for (const Polynomial& q : img) {
                int val = tbound;  // zero image: any positive power vanishes
                for (const Term& t : q.terms()) val = std::min(val, t.mon.exponent(tvar));
                imgval.push_back(val);
            }
        }
        items.reserve(p.term_count());
        for (const Term& t : p.terms()) items.push_back(&t);
        return rec(0, items.size(), 0);
    }

    // small images favour Horner (each accumulator pass is linear in the
    // accumulator); large images favour one cached-power product per group
    static constexpr size_t kHornerImageCutoff = 24;

    Polynomial rec(size_t lo, size_t hi, int vi) {
        if (vi == in_vars) {
            Rational tot;
            for (size_t i = lo; i < hi; ++i) tot += items[i]->coef;
            return Polynomial::constant(out_vars, std::move(tot));
        }
        std::sort(items.begin() + lo, items.begin() + hi,
                  [vi](const Term* a, const Term* b) {
                      return a->mon.exponent(vi) > b->mon.exponent(vi);
                  });
        // truncation keeps cached powers small, which favours the group path
        if (tvar < 0 && img[vi].term_count() <= kHornerImageCutoff) return horner(lo, hi, vi);
        std::vector<Polynomial> parts;
        size_t i = lo;
        while (i < hi) {
            int e = items[i]->mon.exponent(vi);
            size_t j = i;
            while (j < hi && items[j]->mon.exponent(vi) == e) ++j;
            // the whole group is 0 mod tvar^tbound once the power alone reaches the bound
            if (tvar >= 0 && e > 0 && static_cast<long>(e) * imgval[vi] >= tbound) {
                i = j;
                continue;
            }
            Polynomial part = rec(i, j, vi + 1);
            if (e > 0) part = mul(part, power(vi, e));
            if (!part.is_zero()) parts.push_back(std::move(part));
            i = j;
        }
        if (parts.empty()) return Polynomial::zero(out_vars);
        while (parts.size() > 1) {  // balanced merging keeps the partial sums small
            std::vector<Polynomial> next;
            next.reserve((parts.size() + 1) / 2);
            for (size_t k = 0; k + 1 < parts.size(); k += 2)
                next.push_back(parts[k] + parts[k + 1]);
            if (parts.size() % 2) next.push_back(std::move(parts.back()));
            parts = std::move(next);
        }
        return std::move(parts.front());
    }

    Polynomial horner(size_t lo, size_t hi, int vi) {
        Polynomial acc = Polynomial::zero(out_vars);
        int pending = 0;  // power of img[vi] the accumulator still owes
        size_t i = lo;
        while (i < hi) {
            int e = items[i]->mon.exponent(vi);
            size_t j = i;
            while (j < hi && items[j]->mon.exponent(vi) == e) ++j;
            if (tvar >= 0 && e > 0 && static_cast<long>(e) * imgval[vi] >= tbound) {
                i = j;
                continue;
            }
            Polynomial part = rec(i, j, vi + 1);
            if (!acc.is_zero()) {
                if (pending > e) acc = mul(acc, power(vi, pending - e));
                acc = acc + part;
            } else {
                acc = std::move(part);
            }
            pending = e;
            i = j;
        }
        if (pending > 0 && !acc.is_zero()) acc = mul(acc, power(vi, pending));
        return acc;
    }
};

}  // namespace detail

// p(images[0], ..., images[k-1]); all images share one variable set
inline Polynomial substitute(const Polynomial& p, std::span<const Polynomial> images) {
    if (static_cast<int>(images.size()) != p.vars())
        throw std::invalid_argument("substitute: need one image per variable");
    if (images.empty()) throw std::invalid_argument("substitute: empty image list");
    int out = images.front().vars();
    for (const Polynomial& q : images)
        if (q.vars() != out) throw std::invalid_argument("substitute: image variable sets differ");
    if (p.is_zero()) return Polynomial::zero(out);
    detail::Subst s{images, p.vars(), out, {}};
    return s.run(p);
}

inline Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& images) {
    return substitute(p, std::span<const Polynomial>(images.data(), images.size()));
}

// composition reduced modulo var^bound -- much cheaper when only low-order
// behaviour in one variable matters (valuations)
inline Polynomial substitute_truncated(const Polynomial& p, std::span<const Polynomial> images,
                                       int var, int bound) {
    if (static_cast<int>(images.size()) != p.vars())
        throw std::invalid_argument("substitute: need one image per variable");
    if (images.empty()) throw std::invalid_argument("substitute: empty image list");
    if (bound < 1) throw std::invalid_argument("substitute: truncation bound must be positive");
    int out = images.front().vars();
    for (const Polynomial& q : images)
        if (q.vars() != out) throw std::invalid_argument("substitute: image variable sets differ");
    if (var < 0 || var >= out) throw std::invalid_argument("substitute: truncation variable out of range");
    if (p.is_zero()) return Polynomial::zero(out);
    detail::Subst s{images, p.vars(), out, {}, {}, var, bound, {}};
    return s.run(p);
}

inline Polynomial substitute_truncated(const Polynomial& p, const std::vector<Polynomial>& images,
                                       int var, int bound) {
    return substitute_truncated(p, std::span<const Polynomial>(images.data(), images.size()), var,
                                bound);
}

// ---- division --------------------------------------------------------------

// exact single-divisor trial division: returns p/d if the division leaves no
// remainder, nullopt otherwise
inline std::optional<Polynomial> trial_divide(const Polynomial& p, const Polynomial& d) {
    if (d.is_zero()) throw std::domain_error("division by zero polynomial");
    if (p.vars() != d.vars()) throw std::invalid_argument("variable count mismatch");
    if (p.is_zero()) return Polynomial::zero(p.vars());

    if (d.term_count() == 1) {  // monomial divisor: per-term exponent shift
        const Term& dt = d.leading_term();
        std::vector<Term> out;
        out.reserve(p.term_count());
        for (const Term& t : p.terms()) {
            if (!dt.mon.divides(t.mon)) return std::nullopt;
            out.push_back(Term{t.mon.quotient_by(dt.mon), t.coef / dt.coef});
        }
        return Polynomial::from_terms(p.vars(), std::move(out));
    }

    struct GlGreater {
        bool operator()(Monomial a, Monomial b) const { return graded_lex_greater(a, b); }
    };
    std::map<Monomial, Rational, GlGreater> rem;
    for (const Term& t : p.terms()) rem.emplace(t.mon, t.coef);
    const Term& lt = d.leading_term();
    std::vector<Term> quot;
    while (!rem.empty()) {
        auto lead = rem.begin();
        if (!lt.mon.divides(lead->first)) return std::nullopt;  // exact division would not stall
        Monomial qm = lead->first.quotient_by(lt.mon);
        Rational qc = lead->second / lt.coef;
        quot.push_back(Term{qm, qc});
        if (quot.size() > term_limit()) throw ResourceLimitError("quotient exceeds term limit");
        for (const Term& dt : d.terms()) {
            Monomial m = qm * dt.mon;
            auto it = rem.find(m);
            if (it == rem.end()) {
                Rational c = -(qc * dt.coef);
                if (!c.is_zero()) rem.emplace(m, std::move(c));
            } else {
                it->second -= qc * dt.coef;
                if (it->second.is_zero()) rem.erase(it);
            }
        }
    }
    return Polynomial::from_terms(p.vars(), std::move(quot));
}

// divides out d as many times as possible; returns {reduced, multiplicity}
inline std::pair<Polynomial, int> divide_out(Polynomial p, const Polynomial& d) {
    if (d.is_zero()) throw std::domain_error("division by zero polynomial");
    if (p.is_zero()) throw std::domain_error("divide_out of zero polynomial");
    if (d.term_count() == 1) {
        const Term& dt = d.leading_term();
        int e = -1;
        for (const Term& t : p.terms()) {
            int ce = kMaxExponent;
            for (int v = 0; v < kMaxVars; ++v)
                if (int de = dt.mon.exponent(v); de > 0)
                    ce = std::min(ce, t.mon.exponent(v) / de);
            e = (e < 0) ? ce : std::min(e, ce);
            if (e == 0) return {std::move(p), 0};
        }
        Monomial shift;
        shift.bits = dt.mon.bits * static_cast<Monomial::Bits>(e);
        Rational scale = dt.coef.pow(static_cast<unsigned>(e));
        std::vector<Term> out;
        out.reserve(p.term_count());
        for (const Term& t : p.terms()) out.push_back(Term{t.mon.quotient_by(shift), t.coef / scale});
        return {Polynomial::from_terms(p.vars(), std::move(out)), e};
    }
    int e = 0;
    while (true) {
        auto q = trial_divide(p, d);
        if (!q) return {std::move(p), e};
        p = std::move(*q);
        ++e;
    }
}

// ---- valuations and derivatives --------------------------------------------

// order of vanishing along {var = 0}; undefined for the zero polynomial
inline int u_valuation(const Polynomial& p, int var = 0) {
    if (p.is_zero()) throw std::domain_error("u-valuation of the zero polynomial");
    int v = kMaxExponent;
    for (const Term& t : p.terms()) v = std::min(v, t.mon.exponent(var));
    return v;
}

inline Polynomial derivative(const Polynomial& p, int var) {
    std::vector<Term> out;
    out.reserve(p.term_count());
    for (const Term& t : p.terms()) {
        int e = t.mon.exponent(var);
        if (e == 0) continue;
        Monomial m = t.mon;
        m.set(var, e - 1);
        out.push_back(Term{m, t.coef * Rational(e)});
    }
    return Polynomial::from_terms(p.vars(), std::move(out));
}

namespace detail {

inline Polynomial det_rec(std::vector<std::vector<Polynomial>>& m) {
    size_t n = m.size();
    if (n == 1) return m[0][0];
    size_t best = 0;
    size_t best_sz = SIZE_MAX;
    for (size_t i = 0; i < n; ++i) {
        size_t sz = 0;
        for (size_t j = 0; j < n; ++j) sz += m[i][j].term_count();
        if (sz < best_sz) {
            best_sz = sz;
            best = i;
        }
    }
    int nv = m[0][0].vars();
    Polynomial res = Polynomial::zero(nv);
    int sign = (best % 2 == 0) ? 1 : -1;
    for (size_t j = 0; j < n; ++j) {
        if (!m[best][j].is_zero()) {
            std::vector<std::vector<Polynomial>> sub;
            sub.reserve(n - 1);
            for (size_t i = 0; i < n; ++i) {
                if (i == best) continue;
                std::vector<Polynomial> row;
                row.reserve(n - 1);
                for (size_t jj = 0; jj < n; ++jj)
                    if (jj != j) row.push_back(m[i][jj]);
                sub.push_back(std::move(row));
            }
            Polynomial t = m[best][j] * det_rec(sub);
            res = res + (sign > 0 ? t : -t);
        }
        sign = -sign;
    }
    return res;
}

}  // namespace detail

// determinant of the Jacobian matrix of a square system (cofactor expansion
// along the sparsest row; fine for the 4x4 systems this engine handles)
inline Polynomial jacobian_determinant(std::span<const Polynomial> comps) {
    if (comps.empty()) throw std::invalid_argument("empty component list");
    int nv = comps.front().vars();
    if (static_cast<int>(comps.size()) != nv)
        throw std::invalid_argument("jacobian needs as many components as variables");
    std::vector<std::vector<Polynomial>> m(nv);
    for (int i = 0; i < nv; ++i) {
        for (int j = 0; j < nv; ++j) m[i].push_back(derivative(comps[i], j));
    }
    return detail::det_rec(m);
}

inline Polynomial jacobian_determinant(const std::vector<Polynomial>& comps) {
    return jacobian_determinant(std::span<const Polynomial>(comps.data(), comps.size()));
}

// ---- text form --------------------------------------------------------------

inline std::string to_string(const Polynomial& p, std::span<const std::string> names) {
    if (static_cast<int>(names.size()) < p.vars())
        throw std::invalid_argument("not enough variable names");
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const Term& t : p.terms()) {
        bool neg = t.coef.sign() < 0;
        out += first ? (neg ? "-" : "") : (neg ? " - " : " + ");
        first = false;
        Rational mag = t.coef.abs();
        std::string mon;
        for (int v = 0; v < p.vars(); ++v) {
            int e = t.mon.exponent(v);
            if (!e) continue;
            if (!mon.empty()) mon += "*";
            mon += names[v];
            if (e > 1) mon += "^" + std::to_string(e);
        }
        if (mon.empty())
            out += mag.str();
        else if (mag.is_one())
            out += mon;
        else
            out += mag.str() + "*" + mon;
    }
    return out;
}

inline std::string to_string(const Polynomial& p, const std::vector<std::string>& names) {
    return to_string(p, std::span<const std::string>(names.data(), names.size()));
}

namespace detail {

struct PolyParser {
    std::string_view s;
    size_t i = 0;
    std::span<const std::string> names;
    int nv;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("polynomial parse error at offset " + std::to_string(i) +
                                    ": " + why);
    }

    mpz_class number() {
        skip();
        size_t b = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (b == i) fail("expected number");
        return mpz_class(std::string(s.substr(b, i - b)), 10);
    }

    int name() {
        skip();
        size_t b = i;
        if (i >= s.size() ||
            !(std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            fail("expected variable name");
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        std::string_view nm = s.substr(b, i - b);
        for (int v = 0; v < nv; ++v)
            if (names[v] == nm) return v;
        fail("unknown variable '" + std::string(nm) + "'");
    }

    Term term() {
        Rational coef(1);
        Monomial mon;
        bool any = false;
        while (true) {
            skip();
            if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
                mpz_class num = number();
                if (eat('/'))
                    coef *= Rational(num, number());
                else
                    coef *= Rational(num);
                any = true;
            } else if (i < s.size() &&
                       (std::isalpha(static_cast<unsigned char>(s[i])) || s[i] == '_')) {
                int v = name();
                long e = 1;
                if (eat('^')) {
                    mpz_class en = number();
                    if (en > kMaxExponent) fail("exponent too large");
                    e = en.get_si();
                }
                long cur = mon.exponent(v) + e;
                if (cur > kMaxExponent) fail("exponent too large");
                mon.set(v, static_cast<int>(cur));
                any = true;
            } else {
                fail("expected coefficient or variable");
            }
            if (!eat('*')) break;
        }
        if (!any) fail("empty term");
        return Term{mon, std::move(coef)};
    }

    Polynomial parse() {
        std::vector<Term> ts;
        skip();
        if (i >= s.size()) fail("empty input");
        bool neg = false;
        if (eat('-'))
            neg = true;
        else
            eat('+');
        while (true) {
            Term t = term();
            if (neg) t.coef = -t.coef;
            ts.push_back(std::move(t));
            skip();
            if (i >= s.size()) break;
            if (eat('-'))
                neg = true;
            else if (eat('+'))
                neg = false;
            else
                fail("expected '+' or '-'");
        }
        return Polynomial::from_terms(nv, std::move(ts));
    }
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text, std::span<const std::string> names) {
    if (names.empty() || static_cast<int>(names.size()) > kMaxVars)
        throw std::invalid_argument("bad variable name list");
    detail::PolyParser p{text, 0, names, static_cast<int>(names.size())};
    Polynomial r = p.parse();
    p.skip();
    if (p.i != text.size()) p.fail("trailing input");
    return r;
}

inline Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& names) {
    return parse_polynomial(text, std::span<const std::string>(names.data(), names.size()));
}

// homogeneous polynomial with its degree pinned at construction
struct HomogeneousPolynomial {
    Polynomial poly;
    int deg = 0;

    HomogeneousPolynomial() = default;
    explicit HomogeneousPolynomial(Polynomial p) : poly(std::move(p)) {
        if (poly.is_zero()) throw std::invalid_argument("zero is not a valid homogeneous component");
        if (!poly.is_homogeneous()) throw std::invalid_argument("polynomial is not homogeneous");
        deg = poly.degree();
    }

    operator const Polynomial&() const { return poly; }
};

}  // namespace birat
