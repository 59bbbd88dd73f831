#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dops/rational.hpp"

namespace dops {

// Dense univariate polynomial with exact rational coefficients.
// coeffs()[k] multiplies x^k; the zero polynomial has an empty vector,
// every other polynomial has a nonzero trailing coefficient.
class Poly {
public:
    Poly() = default;
    Poly(const Rational& constant);
    Poly(std::vector<Rational> coeffs);
    Poly(std::initializer_list<Rational> coeffs);

    static Poly zero() { return Poly(); }
    static Poly one() { return Poly(Rational(1)); }
    static Poly x() { return monomial(1, Rational(1)); }
    static Poly monomial(int k, const Rational& a);

    const std::vector<Rational>& coeffs() const { return c_; }
    // -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    // Coefficient of x^k; zero beyond the stored degree.
    Rational coeff(int k) const;
    Rational leading() const;
    bool is_monic() const { return !c_.empty() && c_.back().is_one(); }

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { a += b; return a; }
    friend Poly operator-(Poly a, const Poly& b) { a -= b; return a; }
    friend Poly operator*(const Poly& a, const Poly& b);
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    friend Poly operator*(const Rational& s, Poly p);
    friend Poly operator*(Poly p, const Rational& s) { return s * std::move(p); }
    Poly& operator*=(const Rational& s) { *this = s * std::move(*this); return *this; }
    Poly& operator/=(const Rational& s) { *this *= s.inverse(); return *this; }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Rational eval(const Rational& x) const;
    double eval_double(double x) const;
    Poly derivative() const;
    // k-fold derivative (k >= 0).
    Poly derivative(int k) const;

    // Euclidean division: a = q*b + r with deg r < deg b. b must be nonzero.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
    // Quotient a/b when the division is known to be exact; throws otherwise.
    static Poly exact_div(const Poly& a, const Poly& b);
    // Monic greatest common divisor.
    static Poly gcd(Poly a, Poly b);
    // p with all repeated factors reduced to multiplicity one.
    Poly squarefree_part() const;

    // Substitute x -> x^k (k >= 1): spreads coefficients k slots apart.
    Poly compose_power(int k) const;
    // Multiply by x^k (k >= 0).
    Poly shift_up(int k) const;

    // Human-readable form, e.g. "x^3 - 4/3*x + 1".
    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const Poly& p);

private:
    void normalize();
    std::vector<Rational> c_;
};

}  // namespace dops
