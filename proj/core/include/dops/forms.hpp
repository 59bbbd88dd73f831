#pragma once

#include <string>
#include <vector>

#include "dops/poly.hpp"
#include "dops/polyseq.hpp"
#include "dops/rational.hpp"
#include "dops/reccoeffs.hpp"

namespace dops {

// Moments of the first d dual functionals of the family described by a
// recurrence descriptor: rows[r][k] is the coefficient of member r in
// the expansion of x^k over the family, so each row is unitriangular
// against the degree (zero below index r, one at index r).
struct MomentTable {
    int d = 1;
    std::vector<std::vector<Rational>> rows;

    // Largest monomial power the table stores.
    int depth() const { return rows.empty() ? -1 : static_cast<int>(rows[0].size()) - 1; }

    // rows[r][k] with bounds checks.
    const Rational& at(int r, int k) const;

    // Pairing of dual functional r with q: the moment-weighted sum of
    // the coefficients of q. q must not be deeper than the table.
    Rational bracket(int r, const Poly& q) const;
};

// Moment table of depth N, filled by running the recurrence on the
// expansion coefficients of x^k; no polynomial arithmetic is involved.
MomentTable moments(const RecCoeffs& coeffs, int N);

// Single dual row <u_row, x^k> for k = 0..N. Rows at and beyond d are
// the duals of the higher members; the series relations below use them.
std::vector<Rational> moment_row(const RecCoeffs& coeffs, int row, int N);

// Pairing of dual functional `row` with q, computed from a fresh moment
// row of matching depth.
Rational dual_bracket(const RecCoeffs& coeffs, int row, const Poly& q);

// Truncated expansion in powers of 1/z: c[k] is the coefficient of
// z^{-(k+1)}, for k < order. This is the proper part shape of the
// moment generating series -sum_k (u)_k z^{-k-1}.
struct SeriesTrunc {
    int order = 0;
    std::vector<Rational> c;
};

// Series of a moment row, truncated to `order` coefficients; the row
// must hold at least that many values.
SeriesTrunc stieltjes_series(const std::vector<Rational>& moment_row, int order);

// Coefficient-wise sum; the result keeps the shorter order.
SeriesTrunc series_sum(const SeriesTrunc& a, const SeriesTrunc& b);
SeriesTrunc series_negate(SeriesTrunc s);
// Cauchy product. A product of proper series starts at z^{-2}, so the
// result is exact one coefficient past the shorter factor.
SeriesTrunc series_product(const SeriesTrunc& a, const SeriesTrunc& b);
// Expansion of the inverse functional: the series t with z^2*s*t = 1.
// Exact long division, order preserving; needs c[0] != 0 and throws
// SeriesDivisionByZero otherwise.
SeriesTrunc series_reciprocal(const SeriesTrunc& s);

// Families of bracket identities that tie the moments to the recurrence
// data. Every bracket is evaluated as a moment-weighted coefficient
// sum, never from the identity under test.
enum class BracketKind {
    // Powers against aligned members telescope into products of the
    // deepest-band entries, normalized by <u_r, P_r> = 1.
    weight_products,
    // The same telescoping read from the last dual row, with the empty
    // product anchored at 1.
    weight_products_top,
    // Every diagonal entry and band coefficient recovered from a single
    // bracket of x times a member.
    coefficient_recovery,
    // Dual rows shifted r places up, paired with x^r-weighted members:
    // one shift reads a band entry, r shifts telescope one power per
    // step into a product of deepest-band entries.
    shifted_duals,
    // One-step descent recursions for <u_r, x^k P_m> as the member index
    // walks away from the aligned diagonal.
    power_descent,
};

struct BracketReport {
    BracketKind kind;
    int checks = 0;
    bool ok = true;
    std::string first_failure;
};

// Verifies the selected identity family over the deepest window the
// descriptor supports, or over `depth` stored levels when depth >= 0.
// Throws MissingCoefficient when not a single instance fits.
BracketReport bracket_check(const RecCoeffs& coeffs, BracketKind kind, int depth = -1);

// True when every deepest-band entry on the stored horizon is strictly
// positive; with rational data this is the positive-definiteness test
// for all d dual functionals.
bool positive_definite(const RecCoeffs& coeffs);

// Series identities between the family and a derived one.
enum class SeriesRelation {
    // The series of dual row r-1 times the series of dual row n of the
    // r-step shifted family cancels the series of dual row n+r.
    markov,
    // The family with its first deepest-band entry scaled by lambda:
    // its dual series are the original ones divided by a common
    // polynomial-weighted combination.
    codilated,
};

struct SeriesParams {
    int n = 0;                      // markov: dual row of the shifted family
    int r = 1;                      // markov: shift count, >= 1
    int nu = 0;                     // codilated: dual row, 0 <= nu < d
    Rational lambda = Rational(1);  // codilated: nonzero scale
};

// Exact residual of the selected relation through `order` coefficients;
// all-zero is the pass condition. The relations are cross-multiplied so
// only sums and products of tracked series enter.
SeriesTrunc stieltjes_relations(const RecCoeffs& coeffs, SeriesRelation kind,
                                const SeriesParams& params, int order = 20);

// Connection of P onto Q in windows of whole multiples of d:
// P_n = Q_n + sum_{i=1}^{d*l} a[n][i-1] Q_{n-i} for every stored n >= d*l.
struct QuasiOrder {
    int l = 0;
    std::vector<std::vector<Rational>> a;  // d*l entries for n >= d*l, empty rows below
};

// Smallest l whose window holds for every stored member with the
// deepest entry nonzero somewhere; throws NotQuasi when no l up to
// max_degree/d works. Both sequences must be graded monic.
QuasiOrder quasi_detect(const PolySeq& P, const PolySeq& Q, int d);

// Expands pi*Q_n in the P basis and checks the support stays inside
// {n, ..., n + deg pi}. Returns per-member window coefficients, leading
// first; throws NotQuasi naming the first member that leaks deeper.
std::vector<std::vector<Rational>> quasi_window(const PolySeq& P, const PolySeq& Q,
                                                const Poly& pi);

// Rewrite of the r-deep constant-coefficient combination
// Q_n = P_n + sum_{i=1}^r a[i-1] P_{n-i} (r > d) as a combination of
// the d+2 members P_{n-r+1}..P_{n-r-d+1} with polynomial cofactors:
// one recurrence sweep builds U_0..U_{r-1}, and residual is the exact
// defect of the rewritten form (zero when the rewrite holds). Needs
// n >= r + d - 1 so the window stays inside the family.
struct ReducedComb {
    std::vector<Poly> U;
    Poly residual;
};
ReducedComb quasi_reduce(const RecCoeffs& coeffs, const std::vector<Rational>& a, int n, int r);

// Point-mass shift of the whole dual vector: every functional gains
// lambda times evaluation at c. L[m] is the reproducing combination
//   sum_{j<=m} P_{j/d}(c) P_j / <u_{j mod d}, P_j P_{j/d}>,
// whose denominators are deepest-band products, nonzero by regularity;
// the transformed members are
//   Q_m = P_m - lambda P_m(c) / (1 + lambda L_{m-1}(c;c)) * L_{m-1}.
// L holds L_0..L_{N-1} (Q_0 uses the empty combination). Throws
// DenominatorVanishes when 1 + lambda L_{m-1}(c;c) = 0.
struct UvarovResult {
    std::vector<Poly> L;
    PolySeq Q;
};
UvarovResult uvarov(const RecCoeffs& coeffs, const Rational& c, const Rational& lambda, int N);

}  // namespace dops
