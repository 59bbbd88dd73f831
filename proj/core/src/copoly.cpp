#include "dops/copoly.hpp"

#include <algorithm>

#include "dops/errors.hpp"

namespace dops {

std::pair<int, int> eta_window(int d, int k, int t) {
    if (t < 1 || t > d - 1) throw Error("eta_window: band superscript out of range");
    return {std::max(1, t + k + 1 - d), t + k};
}

Rational Perturbation::eta_at(int d, int t, int s) const {
    if (t < 1 || t > static_cast<int>(eta.size())) return Rational(0);
    const auto [lo, hi] = eta_window(d, k, t);
    if (s < lo || s > hi) return Rational(0);
    const auto& row = eta[static_cast<size_t>(t - 1)];
    const int j = s - lo;
    if (j >= static_cast<int>(row.size())) return Rational(0);
    return row[static_cast<size_t>(j)];
}

void Perturbation::validate(int d) const {
    if (k < 0) throw Error("Perturbation: level must be >= 0");
    if (static_cast<int>(mu.size()) > d) {
        throw Error("Perturbation: mu holds more than d entries");
    }
    if (static_cast<int>(eta.size()) > std::max(0, d - 1)) {
        throw Error("Perturbation: eta holds more than d-1 rows");
    }
    for (int t = 1; t <= static_cast<int>(eta.size()); ++t) {
        const auto [lo, hi] = eta_window(d, k, t);
        if (static_cast<int>(eta[static_cast<size_t>(t - 1)].size()) > hi - lo + 1) {
            throw Error("Perturbation: eta row " + std::to_string(t) +
                        " exceeds its level-" + std::to_string(k) + " window");
        }
    }
}

RecCoeffs co_recursive(const RecCoeffs& coeffs, const Perturbation& p) {
    p.validate(coeffs.d);
    const int d = coeffs.d;
    RecCoeffs out = coeffs;
    for (int j = 0; j < d; ++j) {
        const Rational m = p.mu_at(j);
        if (m.is_zero()) continue;
        const int idx = p.k + j;
        if (idx >= static_cast<int>(out.beta.size())) {
            throw MissingCoefficient("co_recursive: beta too shallow for level " +
                                     std::to_string(p.k));
        }
        out.beta[static_cast<size_t>(idx)] += m;
    }
    for (int t = 1; t <= d - 1; ++t) {
        const auto [lo, hi] = eta_window(d, p.k, t);
        for (int s = lo; s <= hi; ++s) {
            const Rational e = p.eta_at(d, t, s);
            if (e.is_zero()) continue;
            auto& row = out.gamma[static_cast<size_t>(t)];
            if (s > static_cast<int>(row.size())) {
                throw MissingCoefficient("co_recursive: band row " + std::to_string(t) +
                                         " too shallow for level " + std::to_string(p.k));
            }
            row[static_cast<size_t>(s - 1)] += e;
        }
    }
    return out;
}

ClosedForm co_recursive_closed_form(const RecCoeffs& coeffs, const Perturbation& p, int N) {
    const int d = coeffs.d;
    const int k = p.k;
    if (N < k + d) throw Error("co_recursive_closed_form: need N >= k + d");
    const PolySeq P = generate(coeffs, N);
    const PolySeq Q = generate(co_recursive(coeffs, p), N);

    // The connection at n = k+j involves only A_1..A_j, with the unit
    // leading factor P_0^{(k+j)} = 1: solve forward.
    std::vector<PolySeq> assoc(static_cast<size_t>(d) + 1);
    for (int i = 1; i <= d; ++i) {
        assoc[static_cast<size_t>(i)] = generate_associated(coeffs, k + i, N - k - i);
    }
    ClosedForm out;
    out.A.resize(static_cast<size_t>(d));
    for (int j = 1; j <= d; ++j) {
        Poly rhs = P[k + j] - Q[k + j];
        for (int i = 1; i < j; ++i) {
            rhs -= out.A[static_cast<size_t>(i - 1)] * assoc[static_cast<size_t>(i)][j - i];
        }
        out.A[static_cast<size_t>(j - 1)] = std::move(rhs);
    }
    for (int n = 0; n <= N; ++n) {
        Poly expect = P[n];
        for (int i = 1; i <= d; ++i) {
            const int idx = n - k - i;
            if (idx < 0) continue;
            expect -= out.A[static_cast<size_t>(i - 1)] * assoc[static_cast<size_t>(i)][idx];
        }
        Poly diff = Q[n] - expect;
        if (!diff.is_zero()) {
            out.residual = std::move(diff);
            return out;
        }
    }
    out.residual = Poly::zero();
    return out;
}

RecCoeffs co_dilated(const RecCoeffs& coeffs, int k, const Rational& lambda) {
    if (lambda.is_zero()) throw ZeroLambda("co_dilated: lambda must be nonzero");
    if (k < 1) throw Error("co_dilated: level must be >= 1");
    RecCoeffs out = coeffs;
    if (k > static_cast<int>(out.gamma[0].size())) {
        throw MissingCoefficient("co_dilated: deepest band too shallow for level " +
                                 std::to_string(k));
    }
    out.gamma[0][static_cast<size_t>(k - 1)] *= lambda;
    return out;
}

CoModified co_modified(const RecCoeffs& coeffs, const Perturbation& p) {
    if (p.lambda.is_zero()) throw ZeroLambda("co_modified: lambda must be nonzero");
    const int d = coeffs.d;
    const int k = p.k;
    RecCoeffs desc = co_recursive(coeffs, p);
    desc = co_dilated(desc, k + 1, p.lambda);

    const int N = coeffs.horizon();
    if (N < k + d + 1) {
        throw MissingCoefficient("co_modified: horizon too shallow for level " +
                                 std::to_string(k));
    }
    const PolySeq C = generate(desc, N);
    const PolySeq P = generate(coeffs, N);
    const ClosedForm cf = co_recursive_closed_form(coeffs, p, N);

    const Rational dil = coeffs.g(k + 1, 0) * (Rational(1) - p.lambda);
    const PolySeq deep = generate_associated(coeffs, d + k + 1, N - d - k - 1);
    std::vector<PolySeq> assoc(static_cast<size_t>(d) + 1);
    for (int i = 1; i <= d; ++i) {
        assoc[static_cast<size_t>(i)] = generate_associated(coeffs, k + i, N - k - i);
    }

    CoModified out;
    out.coeffs = std::move(desc);
    out.residual = Poly::zero();
    for (int n = 0; n <= N; ++n) {
        Poly expect = P[n];
        for (int i = 1; i <= d; ++i) {
            const int idx = n - k - i;
            if (idx < 0) continue;
            expect -= cf.A[static_cast<size_t>(i - 1)] * assoc[static_cast<size_t>(i)][idx];
        }
        if (n - (d + k + 1) >= 0) {
            expect += dil * P[k] * deep[n - (d + k + 1)];
        }
        Poly diff = C[n] - expect;
        if (!diff.is_zero()) {
            out.residual = std::move(diff);
            break;
        }
    }
    return out;
}

}  // namespace dops
