#pragma once
// Exponent vectors packed into a 128-bit word: eight 16-bit lanes, variable 0
// in the highest lane so that raw integer comparison is lexicographic order.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>

namespace birat {

inline constexpr int kMaxVars = 8;
inline constexpr int kMaxExponent = 0x7fff;  // lane headroom so sums cannot carry

struct Monomial {
    using Bits = unsigned __int128;
    Bits bits = 0;

    Monomial() = default;
    explicit Monomial(Bits b) : bits(b) {}
    Monomial(std::initializer_list<int> es) : Monomial(std::span<const int>(es.begin(), es.size())) {}
    explicit Monomial(std::span<const int> es) {
        if (es.size() > kMaxVars) throw std::invalid_argument("too many variables");
        for (size_t i = 0; i < es.size(); ++i) set(static_cast<int>(i), es[i]);
    }

    static Monomial unit(int var, int e = 1) {
        Monomial m;
        m.set(var, e);
        return m;
    }

    int exponent(int var) const { return static_cast<int>((bits >> shift(var)) & 0xffff); }

    void set(int var, int e) {
        if (var < 0 || var >= kMaxVars) throw std::out_of_range("variable index");
        if (e < 0 || e > kMaxExponent) throw std::out_of_range("exponent out of range");
        bits = (bits & ~(Bits(0xffff) << shift(var))) | (Bits(static_cast<unsigned>(e)) << shift(var));
    }

    int degree() const {
        int d = 0;
        Bits b = bits;
        for (int i = 0; i < kMaxVars; ++i) {
            d += static_cast<int>(b & 0xffff);
            b >>= 16;
        }
        return d;
    }

    bool is_constant() const { return bits == 0; }

    // product; exponent overflow is excluded by the degree guard in Polynomial
    friend Monomial operator*(Monomial a, Monomial b) { return Monomial(a.bits + b.bits); }

    bool divides(Monomial other) const {
        Bits a = bits, b = other.bits;
        for (int i = 0; i < kMaxVars; ++i) {
            if ((a & 0xffff) > (b & 0xffff)) return false;
            a >>= 16;
            b >>= 16;
        }
        return true;
    }

    // valid only if divides() holds
    Monomial quotient_by(Monomial d) const { return Monomial(bits - d.bits); }

    friend bool operator==(Monomial a, Monomial b) { return a.bits == b.bits; }
    friend bool operator!=(Monomial a, Monomial b) { return a.bits != b.bits; }

private:
    static int shift(int var) { return 16 * (kMaxVars - 1 - var); }
};

// graded lexicographic, variable 0 most significant
inline bool graded_lex_greater(Monomial a, Monomial b) {
    int da = a.degree(), db = b.degree();
    if (da != db) return da > db;
    return a.bits > b.bits;
}

inline bool graded_lex_less(Monomial a, Monomial b) { return graded_lex_greater(b, a); }

inline uint64_t monomial_hash(Monomial m) {
    uint64_t lo = static_cast<uint64_t>(m.bits);
    uint64_t hi = static_cast<uint64_t>(m.bits >> 64);
    uint64_t x = lo ^ (hi * 0x9e3779b97f4a7c15ULL);
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

}  // namespace birat
