#pragma once

#include <string>
#include <vector>

#include "dops/poly.hpp"
#include "dops/polyseq.hpp"
#include "dops/rational.hpp"
#include "dops/reccoeffs.hpp"

namespace dops {

// Unit-lower-triangular band factor with d subdiagonals, stored by row:
// entries[a-1][o-1] is the entry of row a sitting o places below the
// diagonal (columns are 0-based, so that is position (a, a-o)). Row a
// holds min(a, d) values.
struct LowerBands {
    int d = 1;
    std::vector<std::vector<Rational>> entries;

    // Dense 0-based view: unit diagonal, zero outside the band.
    // Asking below the stored rows throws.
    Rational at(int row, int col) const;
    // Rows with stored band data; the dense view covers 0..row_count().
    int row_count() const { return static_cast<int>(entries.size()); }
};

// Upper bidiagonal factor with unit superdiagonal; diag[k] is the pivot
// in row k.
struct UpperBands {
    std::vector<Rational> diag;

    Rational at(int row, int col) const;
    int row_count() const { return static_cast<int>(diag.size()); }
};

struct Factors {
    LowerBands lower;
    UpperBands upper;
};

// Splits the banded Hessenberg matrix of coeffs as lower * upper with
// unit diagonals on the lower factor. Produces n pivots and the first n
// band rows. The pivots satisfy m_n = -P_n(0)/P_{n-1}(0), so a member
// vanishing at the origin shows up as a zero pivot; the elimination
// divides by it and aborts with ZeroAtOrigin.
Factors lu(const RecCoeffs& coeffs, int n);

// Splits the same matrix as upper * lower. The first d pivots are free
// parameters; pass them in free_m (size d). An empty free_m picks the
// lu pivots of the d-step associated shift, a generic choice that keeps
// the elimination alive on typical data. Every later pivot divides by a
// band entry of the lower factor; Breakdown reports a zero one.
Factors ul(const RecCoeffs& coeffs, int n, std::vector<Rational> free_m = {});

// Band coefficients of upper*lower read back as a recurrence descriptor
// with the given horizon. For lu factors this is the transformed
// family. Needs band rows up to horizon + d.
RecCoeffs swapped_product_coeffs(const Factors& f, int d, int horizon);

// Band coefficients of lower*upper: the family the factors rebuild.
// Needs band rows up to horizon + d - 1.
RecCoeffs straight_product_coeffs(const Factors& f, int d, int horizon);

// The perturbed descriptor tied to an upper*lower split: its first d
// diagonal entries are the stored first-subdiagonal values and its
// early upper bands are the stored row entries, so its associated
// members evaluated at the origin rebuild the first d rows.
RecCoeffs ul_value_family(const RecCoeffs& coeffs, const Factors& f);

// Residuals of those value identities: for every row 1 <= a <= d and
// depth 1 <= k <= a, the entry k places into row a plus the weighted
// origin values of the perturbed associated members must cancel.
std::vector<Rational> ul_value_residuals(const RecCoeffs& coeffs, const Factors& f);

// The transformed family: bands of the swapped product, its members,
// and the defects of the two exchange identities. expansion_defects[m]
// is P_m minus its expansion over K_{m-d..m} with the band row weights;
// step_defects[m] is x*K_m - P_{m+1} + (P_{m+1}(0)/P_m(0)) P_m. All are
// identically zero.
struct KernelResult {
    Factors factors;
    RecCoeffs coeffs;
    PolySeq members;
    std::vector<Poly> expansion_defects;
    std::vector<Poly> step_defects;
};
KernelResult kernel(const RecCoeffs& coeffs, int n);

// Splits the unit-lower factor into d unit-lower bidiagonal factors
// whose left-to-right product rebuilds it. sub[i][c] is factor i+1's
// entry at position (c+1, c). The deterministic schedule halves the
// first-subdiagonal entry at each free choice; later rows are forced
// and divide by earlier choices (a zero divisor is FactorizationFailed
// always). With require_positive, the first entry that is not strictly
// positive also aborts, named in the message; otherwise it is recorded
// in first_violation and positive is cleared.
struct BidiagSplit {
    int d = 1;
    std::vector<std::vector<Rational>> sub;
    bool positive = true;
    std::string first_violation;

    Rational at(int factor, int row, int col) const;
};
BidiagSplit bidiag_factor(const LowerBands& L, bool require_positive = true);

// One station of the transformation chain: its recurrence bands and the
// members generated from them.
struct ChainLink {
    RecCoeffs coeffs;
    PolySeq members;
};

// The d+1 stations from the input family (station 0) to the transformed
// family (station d): station i cycles i bidiagonal factors of the
// lower part past the pivot factor. Station i's members satisfy
// members[m+1](i) = members[m+1](i+1) + sub[i][m] * members[m](i+1)
// with the split entries of bidiag_factor. Coefficients and members are
// produced to index n; needs horizon n + 2d + 2.
std::vector<ChainLink> darboux_chain(const RecCoeffs& coeffs, int n);

// Same chain with caller-chosen bidiagonal bands instead of the default
// split schedule: sub[i][c] is factor i+1's entry at (c+1, c), each band
// holding at least n + 2d + 1 values. The intermediate stations depend
// on the split, so a caller that knows a structured factorization (the
// symmetric-family module does) passes it here; the bands must rebuild
// the lower factor exactly or the call fails.
std::vector<ChainLink> darboux_chain(const RecCoeffs& coeffs, int n,
                                     const std::vector<std::vector<Rational>>& sub);

// Multiplier tables expressing the dual functionals of the transformed
// family over the dual functionals of the input: functional r acts as
// sum_{i<=r} (a[r][i] x - b[r][i]) u_i - sum_{j>r} b[r][j] u_j. The a
// table is triangular (a[r] has r+1 entries); b is d x d.
struct KernelDual {
    int d = 1;
    std::vector<std::vector<Rational>> a;
    std::vector<std::vector<Rational>> b;
};
KernelDual kernel_dual_matrix(const RecCoeffs& coeffs);

// <functional r, q> evaluated exactly by expanding q and x*q in the
// graded basis of coeffs. Against the transformed members this is
// delta_{r,m}.
Rational kernel_dual_bracket(const RecCoeffs& coeffs, const KernelDual& kd, int r, const Poly& q);

// Dense 0-based m x m truncations, exact. The lower truncation needs
// m - 1 stored band rows; the upper one needs m pivots.
std::vector<std::vector<Rational>> dense_jacobi(const RecCoeffs& coeffs, int m);
std::vector<std::vector<Rational>> dense_lower(const LowerBands& L, int m);
std::vector<std::vector<Rational>> dense_upper(const UpperBands& U, int m);
std::vector<std::vector<Rational>> mat_mul(const std::vector<std::vector<Rational>>& a,
                                           const std::vector<std::vector<Rational>>& b);

}  // namespace dops
