#pragma once
// Exact rational scalar on top of GMP integers.
//
// Kept as an explicit numerator/denominator pair (denominator > 0, reduced)
// rather than mpq_class so the integer-only paths that dominate pull-back
// arithmetic stay on plain mpz additions.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace birat {

class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long v) : num_(v), den_(1) {}
    Rational(const mpz_class& v) : num_(v), den_(1) {}
    Rational(mpz_class num, mpz_class den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        normalize();
    }

    static Rational parse(std::string_view text);

    const mpz_class& numerator() const { return num_; }
    const mpz_class& denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return den_ == 1 && num_ == 1; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return sgn(num_); }

    Rational& operator+=(const Rational& o) {
        if (den_ == 1 && o.den_ == 1) {
            num_ += o.num_;
            return *this;
        }
        num_ = num_ * o.den_ + o.num_ * den_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator-=(const Rational& o) {
        if (den_ == 1 && o.den_ == 1) {
            num_ -= o.num_;
            return *this;
        }
        num_ = num_ * o.den_ - o.num_ * den_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator*=(const Rational& o) {
        if (den_ == 1 && o.den_ == 1) {
            num_ *= o.num_;
            return *this;
        }
        num_ *= o.num_;
        den_ *= o.den_;
        normalize();
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw std::domain_error("rational division by zero");
        num_ *= o.den_;
        den_ *= o.num_;
        normalize();
        return *this;
    }

    // this += a*b, fused so the integer case is a single mpz_addmul
    void add_mul(const Rational& a, const Rational& b) {
        if (den_ == 1 && a.den_ == 1 && b.den_ == 1) {
            mpz_addmul(num_.get_mpz_t(), a.num_.get_mpz_t(), b.num_.get_mpz_t());
            return;
        }
        *this += a * b;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(Rational a) {
        a.num_ = -a.num_;
        return a;
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        if (a.den_ == 1 && b.den_ == 1) return a.num_ < b.num_;
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    Rational pow(unsigned e) const {
        Rational r(1), base = *this;
        while (e) {
            if (e & 1) r *= base;
            base *= base;
            e >>= 1;
        }
        return r;
    }

    std::string str() const {
        std::string s = num_.get_str();
        if (den_ != 1) s += "/" + den_.get_str();
        return s;
    }

private:
    void normalize() {
        if (sgn(den_) < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        if (num_ == 0) {
            den_ = 1;
            return;
        }
        if (den_ == 1) return;
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
        if (g != 1) {
            mpz_divexact(num_.get_mpz_t(), num_.get_mpz_t(), g.get_mpz_t());
            mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
        }
    }

    mpz_class num_, den_;
};

inline Rational Rational::parse(std::string_view text) {
    size_t a = 0, b = text.size();
    while (a < b && std::isspace(static_cast<unsigned char>(text[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(text[b - 1]))) --b;
    text = text.substr(a, b - a);
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    auto slash = text.find('/');
    auto to_mpz = [](std::string_view s) {
        if (s.empty()) throw std::invalid_argument("empty integer literal");
        size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
        if (i == s.size()) throw std::invalid_argument("sign without digits");
        for (; i < s.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(s[i])))
                throw std::invalid_argument("bad integer literal: " + std::string(s));
        return mpz_class(std::string(s), 10);
    };
    if (slash == std::string_view::npos) return Rational(to_mpz(text));
    return Rational(to_mpz(text.substr(0, slash)), to_mpz(text.substr(slash + 1)));
}

}  // namespace birat
