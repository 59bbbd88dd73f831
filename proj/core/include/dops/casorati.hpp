#pragma once

#include <map>
#include <vector>

#include "dops/copoly.hpp"
#include "dops/poly.hpp"
#include "dops/polyseq.hpp"
#include "dops/reccoeffs.hpp"

namespace dops {

// Square polynomial matrix with an exact fraction-free determinant.
class PolyMatrix {
public:
    explicit PolyMatrix(int dim);

    int dim() const { return dim_; }
    Poly& at(int i, int j);
    const Poly& at(int i, int j) const;

    // Bareiss elimination with row pivoting. Every intermediate division
    // is exact over the coefficient ring; a failed division means the
    // matrix data is corrupt, not a numeric accident.
    Poly det() const;

private:
    int dim_;
    std::vector<Poly> cells_;
};

// Lazily generated table of associated sequences keyed by association
// level. Negative degrees read as the zero polynomial; every determinant
// window below leans on that convention for its out-of-range entries.
class SeqCache {
public:
    explicit SeqCache(RecCoeffs coeffs);

    int d() const { return coeffs_.d; }
    const RecCoeffs& coeffs() const { return coeffs_; }
    const Poly& at(int degree, int level);

private:
    RecCoeffs coeffs_;
    Poly zero_;
    std::map<int, PolySeq> levels_;
};

// Degree window of order d+1 anchored at degree n and level r: entry
// (j, i) is the degree-(n+j-i) member of level r+i. Rows carry degree
// indices, columns carry association levels, here and in every other
// window below. Regular data makes this a nonzero constant.
Poly window_det(SeqCache& cache, int n, int r);

// The same constant in closed form: (-1)^{(d+1)n} times the product of
// the deepest-band entries at subscripts r+1 .. r+n.
Rational window_value(const RecCoeffs& coeffs, int n, int r);

// Third route to the window constant: start from the degree-0 window and
// push it forward one degree at a time with the one-step companion
// matrix, multiplying the step determinants. Each factor is computed by
// elimination, not read off a formula.
Poly window_det_by_steps(SeqCache& cache, int n, int r);

// Order-d window with the same layout; the leading minor of the full
// window. Unlike the full window it genuinely depends on x.
Poly short_window_det(SeqCache& cache, int n, int r);

// Window with hand-picked degree rows: entry (t, i) is the member of
// degree rows[t]-i at level r+i. rows.size() must be d+1.
Poly spread_window_det(SeqCache& cache, int r, const std::vector<int>& rows);

// Window of order d+2: one association level too many, so the columns
// are d+2 solutions of one recurrence of order d+2 and the determinant
// vanishes for every anchor n >= 1. At n = 0 the matrix is unitriangular
// and the determinant is one; the dependence only kicks in once every
// column has cleared its starting level.
Poly extended_window_det(SeqCache& cache, int n, int r);

// Defect of the window constant against both independent routes,
// (direct - closed form) + (stepwise - direct). Zero exactly when the
// three agree.
Poly verify_delta(const RecCoeffs& coeffs, int n, int r);

// Defect of the short window against its own order-(d+2) recurrence,
// which steps the anchor degree and the level together. Needs n >= d+1.
Poly verify_B_recurrence(const RecCoeffs& coeffs, int n, int r);

// Defect of the factorization of the spread window with rows
// {n, m_1..m_d} into the anchored window constant at n times a d x d
// tail window. Every m_i must exceed n.
Poly verify_F(const RecCoeffs& coeffs, int n, int r, const std::vector<int>& m);

// Which first column the mixed window carries and which closed form it
// is checked against.
enum class NablaKind {
    corecursive,         // first column from the additive perturbation
    comodified,          // first column from the combined perturbation
    corecursive_spread,  // additive, with hand-picked degree rows
    comodified_spread,   // combined, with hand-picked degree rows
    shifted,             // no perturbation: columns at arbitrary levels
};

// Mixed-window determinant check: one perturbed column bordered by d
// unperturbed ones, compared with the matching closed form; the return
// is det minus expected. The perturbation must sit at level 0 and
// 0 <= r <= n+1. offsets carries the d spread rows (each > n) for the
// spread kinds. For `shifted` it carries the d+1 column levels instead
// (each within [0, n+d-1]); r and the perturbation are unused there and
// the check becomes the one-step ratio between consecutive shifted
// windows.
Poly verify_nabla(const RecCoeffs& coeffs, const Perturbation& pert, int n, int r, NablaKind kind,
                  const std::vector<int>& offsets = {});

// Connection cofactors that push a window row p degrees past the anchor
// n: at every level the degree-(n+p) member expands through the members
// of degrees n, n-1, ..., n-d with the same d+1 cofactors T. residual
// sums the expansion defect over all d+1 levels plus the defect of the
// determinant bridge between the window constants at n+p and n-d.
// Requires n >= d and p >= 0.
struct TransferResult {
    std::vector<Poly> T;  // cofactors of degrees n, n-1, ..., n-d
    Poly residual;
};
TransferResult transfer_Tp(const RecCoeffs& coeffs, int n, int p);

// Which cross-degree kernel identity verify_cd checks.
enum class CdKind {
    product,          // spread window split at an intermediate degree (d = 2 only)
    sum,              // weighted telescoping of `product` over the intermediate degree (d = 2)
    multipoint,       // bordered-window sum telescoping to the top window, one point per column
    confluent,        // all points merged: columns carry successive derivatives
    confluent_assoc,  // derivative columns with stepped association levels
};

// Parameters for verify_cd. n is the anchor degree; m and k the
// intermediate and outer degrees for product/sum; r the base level.
// points lists the d+1 evaluation abscissas for multipoint (defaults to
// distinct half-integers); symbolic_var keeps one multipoint column
// symbolic in x, -1 evaluates every column.
struct CdParams {
    int n = 0;
    int m = 0;
    int k = 0;
    int r = 0;
    std::vector<Rational> points;
    int symbolic_var = -1;
};

// Exact defect of the selected identity; zero when it holds. For `sum`
// the defect aggregates the one-step weighted splits across the whole
// range, for the bordered kinds it aggregates the telescoping steps up
// to the anchor degree.
Poly verify_cd(const RecCoeffs& coeffs, CdKind kind, const CdParams& params);

}  // namespace dops
