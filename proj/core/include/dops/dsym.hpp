#pragma once

#include <string>
#include <vector>

#include "dops/poly.hpp"
#include "dops/polyseq.hpp"
#include "dops/rational.hpp"
#include "dops/reccoeffs.hpp"

namespace dops {

// A symmetric family of order d is driven by a single multiplier per
// step: B_{n+d+1} = x B_{n+d} - rho_{n+1} B_n with B_n = x^n through
// degree d. Every member then concentrates its exponents on one residue
// class mod d+1, and slicing by class yields d+1 ordinary families (the
// components) whose bands are sums of multiplier products.
struct SymData {
    int d = 1;
    // rho[m-1] stores the multiplier at subscript m; subscripts start
    // at 1 and every stored value must be nonzero.
    std::vector<Rational> rho;

    // Multiplier by subscript. Nonpositive subscripts read as zero (the
    // band sums below shorten themselves that way); subscripts beyond
    // the stored data throw MissingRho.
    Rational rho_at(int m) const;

    // Checks that subscripts 1..m are stored and nonzero; throws
    // MissingRho or RegularityViolation.
    void require(int m) const;
};

// Members B_0..B_n. Generation needs multipliers through n - d when
// n > d. Each member is checked against the residue-class structure
// before it is returned; a violation would mean corrupted state and
// surfaces as NotDSymmetric.
PolySeq dsym_generate(const SymData& s, int n);

// The same family as a banded recurrence descriptor with `terms` stored
// levels: zero diagonal, zero middle bands, deepest band rho. Lets the
// symmetric family flow into every descriptor-based routine.
RecCoeffs dsym_to_reccoeffs(const SymData& s, int terms);

// Slices a symmetric sequence into its d+1 components: member (d+1)n+s
// of the input equals x^s times component s's member n evaluated at
// x^{d+1}. Throws NotDSymmetric naming the first exponent off its
// residue class. Component sizes differ by at most one.
std::vector<PolySeq> decompose(const PolySeq& seq, int d);

// Interleaves components back into the symmetric family; stops at the
// first member whose component entry is missing.
PolySeq recompose(const std::vector<PolySeq>& comps, int d);

// Recurrence descriptor of component i, with beta and every gamma band
// holding `terms` entries. The bands are assembled from nondecreasing
// index tuples of multiplier products and, independently, fitted from
// the decomposed members; the two routes must agree entry for entry and
// the deepest band must match its closed product form, so a mismatch
// throws Error. i outside 0..d throws IndexOutOfRange.
RecCoeffs component_coeffs(const SymData& s, int i, int terms);

// Inter-component identities, each evaluated as an exact residual
// polynomial (zero iff the identity holds on the given indices).
enum class LinkKind {
    // One factor step down: component i's member n+1 equals component
    // i+1's member n+1 plus a single multiplier times its member n.
    // Params: n, i in 0..d-1.
    adjacent,
    // k factor steps telescoped: component i expanded over component
    // i+k with strictly-increasing-tuple coefficients. Params: n, i, k
    // with i+k <= d; k = 0 degenerates to an empty sum.
    distant,
    // x times the last component's member n expanded over component i,
    // walking down t members. Params: n, i in 0..d.
    wrap,
    // x^r times the undecomposed member n expanded over members
    // n+r-k(d+1) with nondecreasing-tuple coefficients. Params: n, r.
    power,
    // The wrap at i = 0: x B_n^d = B_{n+1}^0 + rho_{(d+1)n+1} B_n^0,
    // exhibiting the last component as the kernel family of the first.
    // Params: n.
    kernel_wrap,
    // The kernel_wrap multiplier equals the elimination pivot of the
    // first component's factorization: rho_{(d+1)n+1} = m_{n+1}.
    // Params: n. The residual is a constant polynomial.
    pivot_match,
};

struct LinkParams {
    int n = 0;
    int i = 0;
    int k = 0;
    int r = 0;
};

// Residual of the selected link; exact zero is the pass condition.
// Index combinations outside the ranges above throw IndexOutOfRange;
// exhausting the stored multipliers throws MissingRho.
Poly verify_links(const SymData& s, LinkKind which, const LinkParams& p);

// Derivative ladder: order j holds the members P'_{n+1}/(n+1) of order
// j-1. A family passes when every requested order is again a banded
// family with nonvanishing deepest band, and each rung satisfies the
// finite combination tying it to the next.
struct HahnOrder {
    int order = 0;            // 1-based derivative order
    bool banded = false;      // the fit produced a regular descriptor
    RecCoeffs coeffs;         // that descriptor (empty when !banded)
    bool combination_ok = false;  // previous order expands over this one
};

// Degree <= 2 multiplier relation of the base family: a polynomial pi
// with pi P'_n supported on members n-1..n+1 for every tested n. Found
// means a nonzero pi exists (scaled so its first nonzero coefficient
// from the top is one); strict additionally requires the coefficient on
// member n-1 to be nonzero throughout, which the classical criterion
// demands. Absence of such a pi does not contradict the ladder: ladders
// of order two and higher can pass with no quadratic multiplier.
struct StructureFit {
    bool found = false;
    Poly pi;
    bool strict = false;
};

struct HahnReport {
    bool hahn = false;            // every order banded and combined
    std::vector<HahnOrder> orders;
    StructureFit structure;
};

// Runs the ladder to max_order on the family of the descriptor, using
// every stored level; report-style, throws only on malformed input.
HahnReport hahn_check(const RecCoeffs& coeffs, int max_order);
// The same on the symmetric family itself, using every stored
// multiplier.
HahnReport hahn_check(const SymData& s, int max_order);

// One functional equation line: the dual row r of the derivative family
// expressed over the dual rows of the base family, with scalars fitted
// from moments. Rows 0..d-2 pair row r with rows r and r+1 (the latter
// weighted by x); the last row wraps to row 0 weighted by x^2.
struct PearsonLine {
    int r = 0;
    bool consistent = false;  // every moment equation through the depth holds
    bool normalized = false;  // the two scalars sum to one
    Rational b;               // weight on the matching base row
    Rational a;               // weight on the wrapped, x-shifted row
    std::string note;         // first failing equation when inconsistent
};

struct PearsonReport {
    bool derivative_banded = false;  // prerequisite for any fit
    bool consistent = false;         // all d lines fit and normalize
    std::vector<PearsonLine> lines;
};

// Fits every line through moment depth N. The scalars are solved from
// the first independent pair of moment equations and verified against
// all the rest; failures are reported per line, never thrown.
PearsonReport pearson_dsym_check(const SymData& s, int N);

}  // namespace dops
