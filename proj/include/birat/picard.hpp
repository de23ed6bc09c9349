#pragma once
// Pushforward action on the Picard lattice of an algebraically stable lift:
// degree extraction from matrix powers and the eigenvalue-1 classes.

#include "linalg.hpp"

#include <cctype>
#include <string>
#include <vector>

namespace birat {

struct PicardLattice {
    std::vector<std::string> basis;  // basis[0] is the hyperplane class
    QMat pushforward;                // column j = image class of basis j
};

inline PicardLattice make_picard_lattice(std::vector<std::string> basis, QMat pushforward) {
    if (basis.empty()) throw std::invalid_argument("empty lattice basis");
    if (pushforward.size() != basis.size())
        throw std::invalid_argument("pushforward must be square of basis size");
    for (const QVec& row : pushforward)
        if (row.size() != basis.size())
            throw std::invalid_argument("pushforward must be square of basis size");
    return PicardLattice{std::move(basis), std::move(pushforward)};
}

// d(n) as the hyperplane-hyperplane entry of the n-th pushforward power;
// computed by running products and checked against binary powering
inline QVec picard_degrees(const PicardLattice& lat, int nmax) {
    if (nmax < 0) throw std::invalid_argument("negative power");
    QVec degs;
    QMat p = q_identity(lat.basis.size());
    degs.push_back(p[0][0]);
    for (int n = 1; n <= nmax; ++n) {
        p = q_mul(p, lat.pushforward);
        degs.push_back(p[0][0]);
    }
    if (q_pow(lat.pushforward, static_cast<unsigned>(nmax))[0][0] != degs.back())
        throw std::logic_error("matrix powering disagreement");
    return degs;
}

// primitive integer basis of the eigenvalue-1 subspace of the pushforward
inline std::vector<QVec> invariant_classes(const PicardLattice& lat) {
    size_t n = lat.basis.size();
    QMat mi = lat.pushforward;
    for (size_t i = 0; i < n; ++i) mi[i][i] -= Rational(1);
    std::vector<QVec> out;
    for (const QVec& v : kernel_basis(mi)) {
        QVec scaled;
        for (const mpz_class& x : primitive_integer(v)) scaled.push_back(Rational(x));
        out.push_back(std::move(scaled));
    }
    return out;
}

inline bool is_invariant_class(const PicardLattice& lat, const QVec& v) {
    if (v.size() != lat.basis.size()) throw std::invalid_argument("class dimension mismatch");
    return q_mul_vec(lat.pushforward, v) == v;
}

// parse sums like "2H - F1 - F3 + 3*F5" against the lattice basis
inline QVec parse_class(const std::string& text, const std::vector<std::string>& basis) {
    QVec out(basis.size(), Rational(0));
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    skip_ws();
    bool first = true;
    while (i < text.size()) {
        int sign = 1;
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw std::invalid_argument("expected + or - in class expression at offset " +
                                        std::to_string(i));
        }
        first = false;
        Rational coef(sign);
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            size_t start = i;
            while (i < text.size() &&
                   (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/'))
                ++i;
            coef = Rational::parse(text.substr(start, i - start)) * Rational(sign);
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws();
            }
        }
        size_t start = i;
        while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
            ++i;
        std::string name = text.substr(start, i - start);
        if (name.empty()) throw std::invalid_argument("expected basis class name at offset " +
                                                      std::to_string(start));
        size_t idx = basis.size();
        for (size_t b = 0; b < basis.size(); ++b)
            if (basis[b] == name) idx = b;
        if (idx == basis.size()) throw std::invalid_argument("unknown class " + name);
        out[idx] += coef;
        skip_ws();
    }
    return out;
}

inline std::string format_class(const QVec& v, const std::vector<std::string>& basis) {
    if (v.size() != basis.size()) throw std::invalid_argument("class dimension mismatch");
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i].is_zero()) continue;
        Rational c = v[i];
        if (out.empty()) {
            if (c.sign() < 0) out += "-";
        } else {
            out += c.sign() < 0 ? " - " : " + ";
        }
        Rational mag = c.abs();
        if (!mag.is_one()) out += mag.str() + "*";
        out += basis[i];
    }
    return out.empty() ? "0" : out;
}

}  // namespace birat
