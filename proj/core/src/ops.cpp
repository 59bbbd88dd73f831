#include "dops/ops.hpp"

#include <algorithm>
#include <string>

namespace dops {

PolySeq generate(const RecCoeffs& coeffs, int N) {
    if (N < 0) throw Error("generate: N must be >= 0");
    coeffs.require(N);
    PolySeq seq;
    seq.polys.reserve(static_cast<size_t>(N) + 1);
    seq.polys.push_back(Poly::one());
    const Poly x = Poly::x();
    for (int n = 0; n < N; ++n) {
        Poly next = (x - Poly(coeffs.b(n))) * seq[n];
        const int terms = std::min(coeffs.d, n);
        for (int v = 0; v < terms; ++v) {
            next -= coeffs.g(n - v, coeffs.d - 1 - v) * seq[n - 1 - v];
        }
        seq.polys.push_back(std::move(next));
    }
    return seq;
}

RecCoeffs associated(const RecCoeffs& coeffs, int r) {
    if (r < 0) throw Error("associated: r must be >= 0");
    if (r == 0) return coeffs;
    RecCoeffs out;
    out.d = coeffs.d;
    if (static_cast<int>(coeffs.beta.size()) < r) {
        throw MissingCoefficient("associated: beta too shallow for shift " + std::to_string(r));
    }
    out.beta.assign(coeffs.beta.begin() + r, coeffs.beta.end());
    out.gamma.resize(coeffs.gamma.size());
    for (size_t nu = 0; nu < coeffs.gamma.size(); ++nu) {
        const auto& row = coeffs.gamma[nu];
        if (static_cast<int>(row.size()) < r) {
            throw MissingCoefficient("associated: band row " + std::to_string(nu) +
                                     " too shallow for shift " + std::to_string(r));
        }
        out.gamma[nu].assign(row.begin() + r, row.end());
    }
    return out;
}

PolySeq generate_associated(const RecCoeffs& coeffs, int r, int N) {
    return generate(associated(coeffs, r), N);
}

RecCoeffs anti_associated(const RecCoeffs& coeffs, const std::vector<AntiRow>& rows) {
    RecCoeffs out = coeffs;
    for (const AntiRow& row : rows) {
        if (static_cast<int>(row.gamma.size()) != out.d) {
            throw MissingCoefficient("anti_associated: row must supply " + std::to_string(out.d) +
                                     " band values");
        }
        if (row.gamma[0].is_zero()) {
            throw RegularityViolation("anti_associated: prepended deepest-band value is zero");
        }
        out.beta.insert(out.beta.begin(), row.beta);
        for (int nu = 0; nu < out.d; ++nu) {
            auto& g = out.gamma[static_cast<size_t>(nu)];
            g.insert(g.begin(), row.gamma[static_cast<size_t>(nu)]);
        }
    }
    return out;
}

std::vector<Rational> expand_in_basis(const Poly& target, const PolySeq& basis) {
    basis.validate();
    const int deg = target.degree();
    if (deg > basis.max_degree()) {
        throw Error("expand_in_basis: target degree " + std::to_string(deg) +
                    " exceeds basis degree " + std::to_string(basis.max_degree()));
    }
    std::vector<Rational> out(static_cast<size_t>(basis.size()), Rational(0));
    Poly rem = target;
    for (int k = deg; k >= 0; --k) {
        const Rational c = rem.coeff(k);
        if (!c.is_zero()) {
            out[static_cast<size_t>(k)] = c;
            rem -= c * basis[k];
        }
    }
    return out;
}

std::variant<RecCoeffs, QuasiReport> extract_recurrence(const PolySeq& seq, int d) {
    if (d < 1) throw Error("extract_recurrence: d must be >= 1");
    if (!seq.is_graded_monic()) {
        throw NotGradedMonic("extract_recurrence: input sequence is not graded monic");
    }
    const int L = seq.size();
    if (L < d + 3) {
        throw Error("extract_recurrence: need at least " + std::to_string(d + 3) + " members");
    }

    // chi[n][v]: coefficient of seq[v] in x*seq[n] - seq[n+1], for n <= L-2.
    QuasiReport report;
    report.d = d;
    const Poly x = Poly::x();
    for (int n = 0; n + 1 < L; ++n) {
        Poly rem = x * seq[n] - seq[n + 1];
        std::vector<Rational> row = expand_in_basis(rem, seq);
        row.resize(static_cast<size_t>(n) + 1, Rational(0));
        report.chi.push_back(std::move(row));
    }
    for (int n = 0; n + 1 < L; ++n) {
        for (int v = 0; v <= n - d - 1; ++v) {
            if (!report.chi[static_cast<size_t>(n)][static_cast<size_t>(v)].is_zero()) {
                report.violations.emplace_back(n, v);
            }
        }
    }
    if (!report.violations.empty()) return report;

    RecCoeffs out;
    out.d = d;
    out.beta.resize(static_cast<size_t>(L) - 1);
    out.gamma.assign(static_cast<size_t>(d), {});
    for (int nu = 0; nu < d; ++nu) {
        const int len = std::max(0, L - 1 - d + nu);
        out.gamma[static_cast<size_t>(nu)].assign(static_cast<size_t>(len), Rational(0));
    }
    for (int n = 0; n + 1 < L; ++n) {
        out.beta[static_cast<size_t>(n)] = report.chi[static_cast<size_t>(n)][static_cast<size_t>(n)];
        for (int v = 0; v < std::min(d, n); ++v) {
            // chi[n][n-1-v] sits in band row d-1-v at subscript n-v.
            out.gamma[static_cast<size_t>(d - 1 - v)][static_cast<size_t>(n - v - 1)] =
                report.chi[static_cast<size_t>(n)][static_cast<size_t>(n - 1 - v)];
        }
    }
    for (const Rational& g0 : out.gamma[0]) {
        if (g0.is_zero()) return report;
    }
    return out;
}

namespace {

// Residual of the expansion of P_{n+m}^{(r)} against the level-(n+r)
// tail. With swapped=true the roles of n and m are interchanged.
Poly split_residual(const RecCoeffs& coeffs, int n, int m, int r, bool swapped) {
    if (swapped) std::swap(n, m);
    const int d = coeffs.d;
    const PolySeq base = generate_associated(coeffs, r, n + m);
    const PolySeq mid = generate_associated(coeffs, n + r, std::max(0, m));
    Poly rhs = mid.at_or_zero(m) * base.at_or_zero(n);
    for (int k = 1; k <= d; ++k) {
        if (n - k < 0) continue;
        Poly weight;
        for (int i = 1; i <= d + 1 - k; ++i) {
            const int sub = n + r - k + 1;
            const int sup = d - k + 1 - i;
            if (m - i < 0) continue;
            const PolySeq tail = generate_associated(coeffs, n + r + i, m - i);
            weight += coeffs.g(sub, sup) * tail.at_or_zero(m - i);
        }
        rhs -= weight * base.at_or_zero(n - k);
    }
    return base.at_or_zero(n + m) - rhs;
}

// Residual of the recurrence that steps the association level instead
// of the degree.
Poly dual_residual(const RecCoeffs& coeffs, int n, int r) {
    const int d = coeffs.d;
    const PolySeq lhs_seq = generate_associated(coeffs, r, n + 1);
    Poly rhs = (Poly::x() - Poly(coeffs.b(r))) *
               generate_associated(coeffs, r + 1, std::max(0, n)).at_or_zero(n);
    for (int i = 1; i <= d; ++i) {
        if (n - i < 0) continue;
        rhs -= coeffs.g(r + 1, d - i) *
               generate_associated(coeffs, r + 1 + i, n - i).at_or_zero(n - i);
    }
    return lhs_seq.at_or_zero(n + 1) - rhs;
}

}  // namespace

IteratedExpansion iterated_association_expansion(const RecCoeffs& coeffs, int n, int k, int r) {
    const int d = coeffs.d;
    if (r < 1) throw Error("iterated_association_expansion: r must be >= 1");
    if (n - k < r + 1) {
        throw Error("iterated_association_expansion: need n - k >= r + 1");
    }
    // Expansion state: P_{n-k}^{(k)} = c[0] P_{n-(k+s)}^{(k+s)} + sum_{j>=1} c[j] P_{n-(k+s+j)}^{(k+s+j)}.
    // One step rewrites the head via the level-stepping recurrence at level k+s.
    std::vector<Poly> c(static_cast<size_t>(d) + 1);
    c[0] = Poly::x() - Poly(coeffs.b(k));
    for (int j = 1; j <= d; ++j) c[static_cast<size_t>(j)] = -Poly(coeffs.g(k + 1, d - j));
    for (int s = 1; s < r; ++s) {
        std::vector<Poly> next(static_cast<size_t>(d) + 1);
        next[0] = c[0] * (Poly::x() - Poly(coeffs.b(k + s))) + c[1];
        for (int j = 1; j <= d; ++j) {
            next[static_cast<size_t>(j)] = -coeffs.g(k + s + 1, d - j) * c[0];
            if (j + 1 <= d) next[static_cast<size_t>(j)] += c[static_cast<size_t>(j) + 1];
        }
        c = std::move(next);
    }
    IteratedExpansion out;
    out.head = c[0];
    out.q.assign(c.begin() + 1, c.end());
    for (Poly& qj : out.q) qj = -qj;

    Poly rhs = out.head * generate_associated(coeffs, k + r, n - k - r).at_or_zero(n - k - r);
    for (int j = 1; j <= d; ++j) {
        const int idx = n - k - r - j;
        if (idx < 0) continue;
        rhs -= out.q[static_cast<size_t>(j - 1)] *
               generate_associated(coeffs, k + r + j, idx).at_or_zero(idx);
    }
    out.residual = generate_associated(coeffs, k, n - k).at_or_zero(n - k) - rhs;
    return out;
}

Poly association_expansion_check(const RecCoeffs& coeffs, AssocExpansion which, int n, int m,
                                 int r) {
    switch (which) {
        case AssocExpansion::split:
            return split_residual(coeffs, n, m, r, false);
        case AssocExpansion::split_swapped:
            return split_residual(coeffs, n, m, r, true);
        case AssocExpansion::dual:
            return dual_residual(coeffs, n, r);
        case AssocExpansion::iterated:
            return iterated_association_expansion(coeffs, n, m, r).residual;
    }
    throw BadSelector("association_expansion_check: unknown selector");
}

}  // namespace dops
