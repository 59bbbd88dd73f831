#pragma once

#include <vector>

#include "dops/errors.hpp"
#include "dops/poly.hpp"

namespace dops {

// Graded monic sequence: polys[n] is monic of degree n, polys[0] = 1.
struct PolySeq {
    std::vector<Poly> polys;

    PolySeq() = default;
    explicit PolySeq(std::vector<Poly> p) : polys(std::move(p)) {}

    int size() const { return static_cast<int>(polys.size()); }
    // Largest available degree, -1 when empty.
    int max_degree() const { return size() - 1; }

    const Poly& operator[](int n) const { return polys[static_cast<size_t>(n)]; }
    Poly& operator[](int n) { return polys[static_cast<size_t>(n)]; }

    // Member with out-of-range indices read as the zero polynomial.
    // Recurrence identities rely on this convention for negative degrees.
    Poly at_or_zero(int n) const {
        if (n < 0 || n >= size()) return Poly::zero();
        return polys[static_cast<size_t>(n)];
    }

    void validate() const {
        for (int n = 0; n < size(); ++n) {
            const Poly& p = polys[static_cast<size_t>(n)];
            if (p.degree() != n || !p.is_monic()) {
                throw NotGradedMonic("PolySeq: entry " + std::to_string(n) +
                                     " is not monic of degree " + std::to_string(n));
            }
        }
    }

    bool is_graded_monic() const {
        for (int n = 0; n < size(); ++n) {
            const Poly& p = polys[static_cast<size_t>(n)];
            if (p.degree() != n || !p.is_monic()) return false;
        }
        return true;
    }
};

}  // namespace dops
