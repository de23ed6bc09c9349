#pragma once
// Degree sequences: exact orbits of proper pull-backs with their chart
// indices, the companion affine index recursion, and exact fitting of
// linear recurrences and closed forms.

#include "birmap.hpp"
#include "chart.hpp"
#include "linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace birat {

inline Rational evaluate(const Polynomial& p, const QVec& point) {
    if (static_cast<int>(point.size()) != p.vars())
        throw std::invalid_argument("evaluation arity mismatch");
    Rational acc(0);
    for (const Term& t : p.terms()) {
        Rational m = t.coef;
        for (int v = 0; v < p.vars(); ++v)
            for (int e = t.mon.exponent(v); e > 0; --e) m *= point[v];
        acc += m;
    }
    return acc;
}

struct OrbitRow {
    int n = 0;
    int degree = 0;
    std::vector<int> indices;  // one per chart, in chart-set order
};

struct OrbitTable {
    std::vector<std::string> chart_names;
    std::vector<OrbitRow> rows;
    std::vector<std::vector<int>> pull_exponents;  // factor powers cleared at step n -> n+1
    bool seed_at_center = false;  // seed vanishes at some tower base point
    bool truncated = false;
    std::string truncation_reason;
};

// iterate proper pull-backs of a seed and record degrees and chart indices
inline OrbitTable run_orbit(const BirationalMap& f, const ChartSet& charts,
                            const Polynomial& seed, int nmax) {
    if (seed.is_zero()) throw std::invalid_argument("zero seed");
    if (seed.vars() != 4 || !seed.is_homogeneous())
        throw std::invalid_argument("seed must be homogeneous in 4 variables");
    if (nmax < 0) throw std::invalid_argument("negative orbit length");

    OrbitTable table;
    table.chart_names = charts.names();
    for (const Chart& c : charts.charts)
        if (evaluate(seed, c.base_point).is_zero()) table.seed_at_center = true;

    Polynomial p = seed;
    for (int n = 0; n <= nmax; ++n) {
        OrbitRow row;
        row.n = n;
        row.degree = p.degree();
        try {
            // charts framed by the same linear change share one composition
            std::vector<std::pair<const QMat*, Polynomial>> framed;
            for (size_t ci = 0; ci < charts.charts.size(); ++ci) {
                const Chart& c = charts.charts[ci];
                // seed the truncation bound by extrapolating the last two indices
                int hint = -1;
                size_t r = table.rows.size();
                if (r >= 2)
                    hint = std::max(2 * table.rows[r - 1].indices[ci] - table.rows[r - 2].indices[ci],
                                    table.rows[r - 1].indices[ci]) + 6;
                if (c.recipe && c.recipe->post_linear) {
                    const QMat& l = *c.recipe->post_linear;
                    const Polynomial* moved = nullptr;
                    for (const auto& [mat, poly] : framed)
                        if (*mat == l) { moved = &poly; break; }
                    if (!moved) {
                        framed.emplace_back(&l, linear_substitute(p, l));
                        moved = &framed.back().second;
                    }
                    row.indices.push_back(chart_index_local(c, *moved, hint));
                } else {
                    row.indices.push_back(chart_index(c, p, hint));
                }
            }
            table.rows.push_back(std::move(row));
            if (n == nmax) break;
            PullbackResult next = proper_pullback(f, p);
            table.pull_exponents.push_back(next.exponents);
            p = std::move(next.proper);
        } catch (const ResourceLimitError& e) {
            table.truncated = true;
            table.truncation_reason = e.what();
            break;
        }
    }
    return table;
}

// state vector (deg, indices...) used to drive the affine index recursion
inline QVec orbit_initial_state(const ChartSet& charts, const std::vector<std::string>& order,
                                const Polynomial& seed) {
    QVec st;
    st.push_back(Rational(seed.degree()));
    for (const std::string& name : order)
        st.push_back(Rational(chart_index(charts.at(name), seed)));
    return st;
}

struct AffineSystem {
    std::vector<std::string> labels;  // "d" followed by chart names
    QMat matrix;
};

inline std::vector<QVec> run_affine(const AffineSystem& sys, QVec state, int nmax) {
    if (sys.matrix.size() != sys.labels.size() || state.size() != sys.labels.size())
        throw std::invalid_argument("affine system shape mismatch");
    std::vector<QVec> out;
    out.push_back(state);
    for (int n = 0; n < nmax; ++n) {
        state = q_mul_vec(sys.matrix, state);
        out.push_back(state);
    }
    return out;
}

// ---- recurrence fitting -----------------------------------------------------

struct LinearRecurrence {
    int order = 0;
    QVec coefficients;  // d(n) = c1 d(n-1) + ... + ck d(n-k)

    // characteristic polynomial, leading coefficient first
    QVec characteristic() const {
        QVec cp;
        cp.push_back(Rational(1));
        for (const Rational& c : coefficients) cp.push_back(-c);
        return cp;
    }

    bool satisfied_by(const std::vector<Rational>& seq, size_t from = 0) const {
        for (size_t n = std::max(from, static_cast<size_t>(order)); n < seq.size(); ++n) {
            Rational acc(0);
            for (int j = 1; j <= order; ++j) acc.add_mul(coefficients[j - 1], seq[n - j]);
            if (acc != seq[n]) return false;
        }
        return true;
    }
};

// minimal-order exact recurrence valid on every full window of the data
inline std::optional<LinearRecurrence> fit_recurrence(const std::vector<Rational>& seq,
                                                      int max_order) {
    if (max_order < 1) throw std::invalid_argument("max_order must be positive");
    if (seq.size() < 2 * static_cast<size_t>(max_order) + 2)
        throw std::invalid_argument("not enough terms to certify a recurrence");
    for (int k = 1; k <= max_order; ++k) {
        QMat a;
        QVec b;
        for (size_t n = k; n < seq.size(); ++n) {
            QVec row;
            for (int j = 1; j <= k; ++j) row.push_back(seq[n - j]);
            a.push_back(std::move(row));
            b.push_back(seq[n]);
        }
        if (auto c = solve_linear(a, b)) {
            LinearRecurrence r{k, std::move(*c)};
            if (r.satisfied_by(seq)) return r;
        }
    }
    return std::nullopt;
}

// minimal order annihilating every sequence of the family simultaneously
inline std::optional<LinearRecurrence> fit_common_recurrence(
    const std::vector<std::vector<Rational>>& family, int max_order) {
    if (family.empty()) throw std::invalid_argument("empty sequence family");
    for (const auto& seq : family)
        if (seq.size() < 2 * static_cast<size_t>(max_order) + 2)
            throw std::invalid_argument("not enough terms to certify a recurrence");
    for (int k = 1; k <= max_order; ++k) {
        QMat a;
        QVec b;
        for (const auto& seq : family)
            for (size_t n = k; n < seq.size(); ++n) {
                QVec row;
                for (int j = 1; j <= k; ++j) row.push_back(seq[n - j]);
                a.push_back(std::move(row));
                b.push_back(seq[n]);
            }
        if (auto c = solve_linear(a, b)) {
            LinearRecurrence r{k, *c};
            bool all = true;
            for (const auto& seq : family) all = all && r.satisfied_by(seq);
            if (all) return r;
        }
    }
    return std::nullopt;
}

// ---- closed forms -----------------------------------------------------------

// d(n) = p(n) + (-1)^n q(n) for n >= first_valid; q empty for plain polynomials
struct ClosedForm {
    QVec p;  // ascending coefficients
    QVec q;
    int first_valid = 0;

    bool pure() const { return q.empty(); }

    Rational operator()(long n) const {
        auto horner = [n](const QVec& cs) {
            Rational acc(0);
            for (size_t i = cs.size(); i-- > 0;) acc = acc * Rational(n) + cs[i];
            return acc;
        };
        Rational val = horner(p);
        if (!q.empty()) {
            Rational qq = horner(q);
            val += (n % 2 == 0) ? qq : -qq;
        }
        return val;
    }
};

// smallest polynomial (or period-2 quasi-polynomial) matching the data,
// allowing a short anomalous prefix; every candidate must be confirmed by
// at least two data points beyond its coefficient count
inline std::optional<ClosedForm> fit_closed_form(const std::vector<Rational>& seq,
                                                 int max_trim = 2) {
    const long nn = static_cast<long>(seq.size());
    for (int trim = 0; trim <= max_trim; ++trim) {
        long points = nn - trim;
        auto solve_model = [&](int deg, bool quasi) -> std::optional<ClosedForm> {
            long unknowns = quasi ? 2 * (deg + 1) : deg + 1;
            if (points < unknowns + 2) return std::nullopt;
            QMat a;
            QVec b;
            for (long n = trim; n < nn; ++n) {
                QVec row;
                Rational pw(1);
                for (int j = 0; j <= deg; ++j) {
                    row.push_back(pw);
                    pw *= Rational(n);
                }
                if (quasi) {
                    Rational sign(n % 2 == 0 ? 1 : -1);
                    pw = Rational(1);
                    for (int j = 0; j <= deg; ++j) {
                        row.push_back(pw * sign);
                        pw *= Rational(n);
                    }
                }
                a.push_back(std::move(row));
                b.push_back(seq[n]);
            }
            auto sol = solve_linear(a, b);
            if (!sol) return std::nullopt;
            ClosedForm cf;
            cf.first_valid = trim;
            cf.p.assign(sol->begin(), sol->begin() + (deg + 1));
            if (quasi) {
                cf.q.assign(sol->begin() + (deg + 1), sol->end());
                bool zero = true;
                for (const Rational& c : cf.q) zero = zero && c.is_zero();
                if (zero) cf.q.clear();
            }
            while (cf.p.size() > 1 && cf.p.back().is_zero()) cf.p.pop_back();
            while (cf.q.size() > 1 && cf.q.back().is_zero()) cf.q.pop_back();
            return cf;
        };
        for (int deg = 0; deg < points - 2; ++deg)
            if (auto cf = solve_model(deg, false)) return cf;
        for (int deg = 0; 2 * (deg + 1) + 2 <= points; ++deg)
            if (auto cf = solve_model(deg, true)) return cf;
    }
    return std::nullopt;
}

// ---- exact vs affine agreement ----------------------------------------------

struct CrossCheck {
    bool ok = true;
    std::vector<std::string> mismatches;
    QVec alpha;                      // d - nu_alpha per exact row, when requested
    bool alpha_constant_tail = true; // constant from n = 1 on
};

inline CrossCheck cross_validate(const OrbitTable& table, const std::vector<QVec>& states,
                                 const std::vector<std::string>& labels,
                                 const std::optional<std::string>& alpha_label = std::nullopt) {
    CrossCheck out;
    if (labels.empty() || labels[0] != "d")
        throw std::invalid_argument("affine labels must start with d");
    std::vector<int> chart_to_state(table.chart_names.size(), -1);
    for (size_t c = 0; c < table.chart_names.size(); ++c)
        for (size_t l = 1; l < labels.size(); ++l)
            if (labels[l] == table.chart_names[c]) chart_to_state[c] = static_cast<int>(l);

    auto note = [&](std::string msg) {
        out.ok = false;
        out.mismatches.push_back(std::move(msg));
    };

    for (const OrbitRow& row : table.rows) {
        size_t n = static_cast<size_t>(row.n);
        if (n >= states.size()) break;
        if (Rational(row.degree) != states[n][0])
            note("degree at n=" + std::to_string(row.n) + ": exact " + std::to_string(row.degree) +
                 " vs affine " + states[n][0].str());
        for (size_t c = 0; c < table.chart_names.size(); ++c) {
            if (chart_to_state[c] < 0) continue;
            if (Rational(row.indices[c]) != states[n][chart_to_state[c]])
                note(table.chart_names[c] + " at n=" + std::to_string(row.n) + ": exact " +
                     std::to_string(row.indices[c]) + " vs affine " +
                     states[n][chart_to_state[c]].str());
        }
    }

    if (alpha_label) {
        size_t col = table.chart_names.size();
        for (size_t c = 0; c < table.chart_names.size(); ++c)
            if (table.chart_names[c] == *alpha_label) col = c;
        if (col == table.chart_names.size())
            throw std::invalid_argument("alpha label " + *alpha_label + " is not a chart column");
        for (const OrbitRow& row : table.rows)
            out.alpha.push_back(Rational(row.degree - row.indices[col]));
        for (size_t n = 2; n < out.alpha.size(); ++n)
            if (out.alpha[n] != out.alpha[1]) out.alpha_constant_tail = false;
    }
    return out;
}

}  // namespace birat
