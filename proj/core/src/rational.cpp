#include "dops/rational.hpp"

#include <ostream>

namespace dops {

Rational Rational::parse(std::string_view text) {
    if (text.empty()) throw Error("Rational::parse: empty string");
    const std::string s(text);
    const auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(mpz_class(s), mpz_class(1));
        }
        mpz_class num(s.substr(0, slash));
        mpz_class den(s.substr(slash + 1));
        return Rational(num, den);
    } catch (const std::invalid_argument&) {
        throw Error("Rational::parse: malformed rational '" + s + "'");
    }
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

}  // namespace dops
