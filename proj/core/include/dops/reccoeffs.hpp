#pragma once

#include <string>
#include <vector>

#include "dops/errors.hpp"
#include "dops/rational.hpp"

namespace dops {

// Recurrence descriptor of a monic d-orthogonal sequence.
//
// The sequence it describes satisfies the (d+2)-term recurrence
//
//   P_{n+1}(x) = (x - beta[n]) P_n(x)
//                - sum_{v=0}^{min(d,n)-1} g(n-v, d-1-v) P_{n-1-v}(x),
//
// where g(m, nu) is the band coefficient conventionally written with
// subscript m >= 1 and superscript 0 <= nu <= d-1.
//
// Index map (the double indexing is the main source of bugs, keep this
// table in sight):
//   gamma[nu][m-1] = g(m, nu),  so the v-th term above reads
//   gamma[d-1-v][n-v-1].
// Row gamma[0] is the deepest band of the monic Hessenberg matrix, and
// regularity demands gamma[0][m] != 0 for every stored m.
struct RecCoeffs {
    int d = 1;
    std::vector<Rational> beta;                // beta[n], n >= 0
    std::vector<std::vector<Rational>> gamma;  // gamma[nu][m-1] = g(m, nu)

    RecCoeffs() = default;
    RecCoeffs(int d_, std::vector<Rational> beta_, std::vector<std::vector<Rational>> gamma_)
        : d(d_), beta(std::move(beta_)), gamma(std::move(gamma_)) {}

    // Convenience accessor: g(m, nu) with the conventional indices.
    // m >= 1; 0 <= nu <= d-1.
    const Rational& g(int m, int nu) const {
        if (nu < 0 || nu >= d) {
            throw MissingCoefficient("RecCoeffs: band superscript " + std::to_string(nu) +
                                     " out of range for d=" + std::to_string(d));
        }
        const auto& row = gamma[static_cast<size_t>(nu)];
        if (m < 1 || m > static_cast<int>(row.size())) {
            throw MissingCoefficient("RecCoeffs: band coefficient (" + std::to_string(m) + "," +
                                     std::to_string(nu) + ") not stored");
        }
        return row[static_cast<size_t>(m - 1)];
    }

    const Rational& b(int n) const {
        if (n < 0 || n >= static_cast<int>(beta.size())) {
            throw MissingCoefficient("RecCoeffs: beta[" + std::to_string(n) + "] not stored");
        }
        return beta[static_cast<size_t>(n)];
    }

    // Number of fully stored levels: generate(*this, N) is possible
    // for every N <= horizon().
    int horizon() const {
        size_t h = beta.size();
        for (const auto& row : gamma) h = std::min(h, row.size());
        return static_cast<int>(h);
    }

    // Checks shape, data depth N, and regularity of the deepest band.
    void require(int N) const;

    // True when both descriptors agree on every entry they both store.
    bool agrees_with(const RecCoeffs& o) const;

    bool operator==(const RecCoeffs& o) const {
        return d == o.d && beta == o.beta && gamma == o.gamma;
    }
};

// Serialization of the descriptor:
//   {"d": int, "beta": ["p/q", ...], "gamma": [[...], ..., [...]]}
// with rationals as "p" or "p/q" strings and gamma rows ordered by
// superscript 0..d-1.
std::string to_json(const RecCoeffs& c);
RecCoeffs reccoeffs_from_json(const std::string& text);

}  // namespace dops
