#pragma once

#include <vector>

#include "dops/ops.hpp"
#include "dops/poly.hpp"
#include "dops/random.hpp"
#include "dops/reccoeffs.hpp"

namespace dops::testing {

// Poly from integer coefficients, low to high.
inline Poly ipoly(std::initializer_list<long> coeffs) {
    std::vector<Rational> c;
    c.reserve(coeffs.size());
    for (long v : coeffs) c.emplace_back(v);
    return Poly(std::move(c));
}

// Descriptor with constant bands: beta[n] = b, gamma[nu][m] = g[nu].
inline RecCoeffs constant_coeffs(int d, long b, std::vector<long> g, int N) {
    RecCoeffs c;
    c.d = d;
    c.beta.assign(static_cast<size_t>(N), Rational(b));
    c.gamma.assign(static_cast<size_t>(d), {});
    for (int nu = 0; nu < d; ++nu) {
        c.gamma[static_cast<size_t>(nu)].assign(static_cast<size_t>(N),
                                                Rational(g[static_cast<size_t>(nu)]));
    }
    return c;
}

}  // namespace dops::testing
