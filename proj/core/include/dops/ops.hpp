#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "dops/poly.hpp"
#include "dops/polyseq.hpp"
#include "dops/reccoeffs.hpp"

namespace dops {

// Produces P_0..P_N from the descriptor. Exact; every entry is monic of
// its degree. Throws MissingCoefficient when data is too shallow and
// RegularityViolation when a used deepest-band entry is zero.
PolySeq generate(const RecCoeffs& coeffs, int N);

// Descriptor of the r-fold associated sequence: every index is shifted
// by r, so generate(associated(c, r), N) yields the tail solutions of
// the original recurrence starting at level r.
RecCoeffs associated(const RecCoeffs& coeffs, int r);

// generate(associated(coeffs, r), N), the workhorse for identities that
// mix several association levels.
PolySeq generate_associated(const RecCoeffs& coeffs, int r, int N);

// One prepended leading row for anti_associated: a new diagonal entry
// and the d band values below it, listed by superscript 0..d-1.
// The superscript-0 slot must be nonzero.
struct AntiRow {
    Rational beta;
    std::vector<Rational> gamma;
};

// Extends the recurrence downward: each row is prepended in list order,
// so the last row ends up outermost. associated(anti_associated(c, rows),
// rows.size()) returns c exactly.
RecCoeffs anti_associated(const RecCoeffs& coeffs, const std::vector<AntiRow>& rows);

// Exact coordinates of target in the graded monic basis.
std::vector<Rational> expand_in_basis(const Poly& target, const PolySeq& basis);

// Expansion table of a graded monic sequence that is not a plain
// (d+2)-term recurrence: chi[n][v] is the coefficient of basis member v
// in x*seq[n] - seq[n+1]. violations lists the (n, v) places with
// v <= n-d-1 where chi is nonzero.
struct QuasiReport {
    int d = 1;
    std::vector<std::vector<Rational>> chi;
    std::vector<std::pair<int, int>> violations;
};

// Recovers the descriptor from a graded monic sequence when it satisfies
// a (d+2)-term recurrence with nonzero deepest band; otherwise returns
// the full expansion table. seq must hold at least d+3 members.
std::variant<RecCoeffs, QuasiReport> extract_recurrence(const PolySeq& seq, int d);

// Which cross-association expansion to verify.
enum class AssocExpansion {
    split,          // P_{n+m}^{(r)} expanded against the level-(n+r) tail
    split_swapped,  // same with the roles of n and m interchanged
    dual,           // the (d+2)-term recurrence running over association levels
    iterated,       // r-fold unrolling of the dual recurrence
};

// Exact left-minus-right residual of the selected expansion; the zero
// polynomial when the identity holds. For `iterated`, m is the base
// association level and r the number of unrolling steps (requires
// n - m >= r + 1); for `dual`, m is ignored.
Poly association_expansion_check(const RecCoeffs& coeffs, AssocExpansion which, int n, int m,
                                 int r);

// Constructive form of the iterated expansion: head and tail cofactors
// with the exact residual. head must equal the r-th member of the
// level-k associated sequence and each q[j] has degree <= r-1.
struct IteratedExpansion {
    Poly head;
    std::vector<Poly> q;
    Poly residual;
};
IteratedExpansion iterated_association_expansion(const RecCoeffs& coeffs, int n, int k, int r);

}  // namespace dops
