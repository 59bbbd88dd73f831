#include "dops/poly.hpp"

#include <ostream>
#include <sstream>

#include "dops/errors.hpp"

namespace dops {

Poly::Poly(const Rational& constant) {
    if (!constant.is_zero()) c_.push_back(constant);
}

Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

Poly::Poly(std::initializer_list<Rational> coeffs) : c_(coeffs) { normalize(); }

Poly Poly::monomial(int k, const Rational& a) {
    if (k < 0) throw Error("Poly::monomial: negative exponent");
    if (a.is_zero()) return Poly();
    Poly p;
    p.c_.assign(static_cast<size_t>(k) + 1, Rational(0));
    p.c_.back() = a;
    return p;
}

void Poly::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rational Poly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size())) return Rational(0);
    return c_[static_cast<size_t>(k)];
}

Rational Poly::leading() const {
    if (c_.empty()) return Rational(0);
    return c_.back();
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& a : r.c_) a = -a;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    normalize();
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    normalize();
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    Poly r;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i].is_zero()) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) {
            r.c_[i + j] += a.c_[i] * b.c_[j];
        }
    }
    r.normalize();
    return r;
}

Poly operator*(const Rational& s, Poly p) {
    if (s.is_zero()) return Poly();
    for (auto& a : p.c_) a *= s;
    return p;
}

Rational Poly::eval(const Rational& x) const {
    Rational acc(0);
    for (size_t i = c_.size(); i-- > 0;) {
        acc = acc * x + c_[i];
    }
    return acc;
}

double Poly::eval_double(double x) const {
    double acc = 0.0;
    for (size_t i = c_.size(); i-- > 0;) {
        acc = acc * x + c_[i].to_double();
    }
    return acc;
}

Poly Poly::derivative() const {
    if (c_.size() <= 1) return Poly();
    Poly r;
    r.c_.resize(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) {
        r.c_[i - 1] = Rational(static_cast<long>(i)) * c_[i];
    }
    r.normalize();
    return r;
}

Poly Poly::derivative(int k) const {
    if (k < 0) throw Error("Poly::derivative: negative order");
    Poly r = *this;
    for (int i = 0; i < k; ++i) r = r.derivative();
    return r;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw Error("Poly::divmod: division by zero polynomial");
    Poly r = a;
    Poly q;
    const int db = b.degree();
    if (r.degree() >= db) {
        q.c_.assign(static_cast<size_t>(r.degree() - db) + 1, Rational(0));
    }
    const Rational lead_inv = b.leading().inverse();
    while (!r.is_zero() && r.degree() >= db) {
        const int k = r.degree() - db;
        const Rational f = r.leading() * lead_inv;
        q.c_[static_cast<size_t>(k)] = f;
        // r -= f * x^k * b, done in place
        for (int i = 0; i <= db; ++i) {
            r.c_[static_cast<size_t>(i + k)] -= f * b.c_[static_cast<size_t>(i)];
        }
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

Poly Poly::exact_div(const Poly& a, const Poly& b) {
    auto [q, r] = divmod(a, b);
    if (!r.is_zero()) throw Error("Poly::exact_div: division is not exact");
    return q;
}

Poly Poly::gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
        Poly r = divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a * a.leading().inverse();
}

Poly Poly::squarefree_part() const {
    if (is_zero() || degree() == 0) return *this;
    Poly g = gcd(*this, derivative());
    return exact_div(*this, g);
}

Poly Poly::compose_power(int k) const {
    if (k < 1) throw Error("Poly::compose_power: exponent must be >= 1");
    if (is_zero() || k == 1) return *this;
    Poly r;
    r.c_.assign(static_cast<size_t>(degree()) * k + 1, Rational(0));
    for (size_t i = 0; i < c_.size(); ++i) {
        r.c_[i * static_cast<size_t>(k)] = c_[i];
    }
    r.normalize();
    return r;
}

Poly Poly::shift_up(int k) const {
    if (k < 0) throw Error("Poly::shift_up: negative shift");
    if (is_zero() || k == 0) return *this;
    Poly r;
    r.c_.assign(c_.size() + static_cast<size_t>(k), Rational(0));
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i + static_cast<size_t>(k)] = c_[i];
    return r;
}

std::string Poly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        const Rational a = coeff(k);
        if (a.is_zero()) continue;
        if (first) {
            if (a.sign() < 0) os << "-";
        } else {
            os << (a.sign() < 0 ? " - " : " + ");
        }
        const Rational mag = a.abs();
        if (k == 0) {
            os << mag.str();
        } else {
            if (!mag.is_one()) os << mag.str() << "*";
            os << "x";
            if (k > 1) os << "^" << k;
        }
        first = false;
    }
    return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.str(); }

}  // namespace dops
