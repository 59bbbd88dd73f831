#include <string>
#include <vector>

#include "doctest.h"
#include "dops/copoly.hpp"
#include "dops/darboux.hpp"
#include "dops/errors.hpp"
#include "dops/forms.hpp"
#include "dops/ops.hpp"
#include "dops/random.hpp"
#include "helpers.hpp"

using namespace dops;
using dops::testing::constant_coeffs;
using dops::testing::ipoly;

namespace {

// Monic Laguerre: beta_n = 2n+1, gamma_n = n^2, P_n(0) = (-1)^n n!.
RecCoeffs laguerre(int N) {
    RecCoeffs c;
    c.d = 1;
    for (long n = 0; n < N; ++n) c.beta.emplace_back(2 * n + 1);
    c.gamma.assign(1, {});
    for (long n = 1; n <= N; ++n) c.gamma[0].emplace_back(n * n);
    return c;
}

RecCoeffs kernel_ready(int d, int N, int depth, Rng& rng) {
    for (;;) {
        RecCoeffs c = random_reccoeffs(d, N, rng);
        try {
            kernel(c, depth);
            return c;
        } catch (const ZeroAtOrigin&) {
        }
    }
}

bool all_zero(const SeriesTrunc& s) {
    for (const auto& v : s.c) {
        if (!v.is_zero()) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("moment tables are unitriangular and match basis expansion") {
    {
        const RecCoeffs c = constant_coeffs(1, 0, {1}, 8);
        const MomentTable t = moments(c, 6);
        CHECK(t.at(0, 0) == Rational(1));
        CHECK(t.at(0, 1) == Rational(0));
        CHECK(t.at(0, 2) == Rational(1));
    }
    {
        // d-symmetric cubic family: x^3 expands as B_3 + B_0.
        const RecCoeffs c = constant_coeffs(2, 0, {1, 0}, 8);
        const MomentTable t = moments(c, 6);
        CHECK(t.at(0, 3) == Rational(1));
        CHECK(t.at(1, 3) == Rational(0));
    }

    Rng rng(421);
    for (int d = 1; d <= 3; ++d) {
        const RecCoeffs c = random_reccoeffs(d, 14, rng);
        const int N = 10;
        const MomentTable t = moments(c, N);
        CHECK(t.d == d);
        CHECK(static_cast<int>(t.rows.size()) == d);
        CHECK(t.depth() == N);

        const PolySeq seq = generate(c, N);
        for (int k = 0; k <= N; ++k) {
            const auto e = expand_in_basis(Poly::monomial(k, Rational(1)), seq);
            for (int r = 0; r < d; ++r) {
                const Rational oracle =
                    r < static_cast<int>(e.size()) ? e[static_cast<size_t>(r)] : Rational(0);
                CHECK(t.at(r, k) == oracle);
            }
        }
        for (int r = 0; r < d; ++r) {
            CHECK(t.at(r, r) == Rational(1));
            for (int k = 0; k < r; ++k) CHECK(t.at(r, k) == Rational(0));
        }
    }
}

TEST_CASE("dual rows pair with members as a delta") {
    Rng rng(422);
    for (int d = 1; d <= 3; ++d) {
        const RecCoeffs c = random_reccoeffs(d, 14, rng);
        const int N = 9;
        const MomentTable t = moments(c, N);
        const PolySeq seq = generate(c, N);
        for (int r = 0; r < d; ++r) {
            for (int m = 0; m <= N; ++m) {
                const Rational expected(r == m ? 1 : 0);
                CHECK(t.bracket(r, seq.polys[static_cast<size_t>(m)]) == expected);
            }
        }
        // Rows at and beyond d behave the same way through moment_row.
        for (int r = 0; r <= N; ++r) {
            for (int m = 0; m <= N; ++m) {
                CHECK(dual_bracket(c, r, seq.polys[static_cast<size_t>(m)]) ==
                      Rational(r == m ? 1 : 0));
            }
        }
    }
}

TEST_CASE("moment accessors reject out-of-range requests") {
    const RecCoeffs c = laguerre(8);
    const MomentTable t = moments(c, 6);
    CHECK_THROWS_AS((void)t.at(1, 0), MissingCoefficient);
    CHECK_THROWS_AS((void)t.at(0, 7), MissingCoefficient);
    CHECK_THROWS_AS((void)t.at(-1, 0), MissingCoefficient);
    CHECK_THROWS_AS((void)t.bracket(0, Poly::monomial(7, Rational(1))), MissingCoefficient);
    CHECK_THROWS_AS((void)moments(c, -1), BadParameter);
    CHECK_THROWS_AS((void)moments(laguerre(6), 12), MissingCoefficient);
    CHECK_THROWS_AS((void)moment_row(c, -1, 4), BadParameter);
}

TEST_CASE("series arithmetic is exact and order-aware") {
    const RecCoeffs c = laguerre(20);
    const auto row0 = moment_row(c, 0, 12);
    const SeriesTrunc s = stieltjes_series(row0, 12);
    CHECK(s.order == 12);
    for (int k = 0; k < 12; ++k) CHECK(s.c[static_cast<size_t>(k)] == -row0[static_cast<size_t>(k)]);
    CHECK(s.c[0] == Rational(-1));

    const SeriesTrunc sum = series_sum(s, series_negate(s));
    CHECK(sum.order == 12);
    CHECK(all_zero(sum));

    const SeriesTrunc prod = series_product(s, s);
    CHECK(prod.order == 13);
    CHECK(prod.c[0] == Rational(0));
    CHECK(prod.c[1] == Rational(1));

    // Form inverse: z^2 * s * t = 1, so the product collapses to z^{-2}.
    const SeriesTrunc t = series_reciprocal(s);
    CHECK(t.order == 12);
    const SeriesTrunc check = series_product(s, t);
    for (int k = 0; k < check.order; ++k) {
        CHECK(check.c[static_cast<size_t>(k)] == Rational(k == 1 ? 1 : 0));
    }

    // Dual row 1 of a two-band family starts with a zero moment.
    const RecCoeffs c2 = constant_coeffs(2, 1, {1, 1}, 10);
    const SeriesTrunc s1 = stieltjes_series(moment_row(c2, 1, 8), 8);
    CHECK(s1.c[0].is_zero());
    CHECK_THROWS_AS((void)series_reciprocal(s1), SeriesDivisionByZero);
    CHECK_THROWS_AS((void)stieltjes_series(row0, 14), MissingCoefficient);
}

TEST_CASE("aligned brackets telescope into band products") {
    Rng rng(423);
    std::vector<RecCoeffs> instances;
    instances.push_back(laguerre(16));
    instances.push_back(constant_coeffs(2, 3, {1, 3}, 16));
    instances.push_back(random_reccoeffs(2, 16, rng));
    instances.push_back(random_reccoeffs(3, 18, rng));
    for (const auto& c : instances) {
        const BracketReport a = bracket_check(c, BracketKind::weight_products);
        CHECK(a.ok);
        CHECK(a.checks > 0);
        if (!a.ok) MESSAGE(a.first_failure);
        const BracketReport b = bracket_check(c, BracketKind::weight_products_top);
        CHECK(b.ok);
        CHECK(b.checks > 0);
        if (!b.ok) MESSAGE(b.first_failure);
    }

    // Hand values: the one-step bracket reads the deepest band directly,
    // and the Laguerre diagonal grows as squared factorials.
    {
        const RecCoeffs c = random_reccoeffs(2, 12, rng);
        const PolySeq seq = generate(c, 6);
        for (int r = 0; r < 2; ++r) {
            CHECK(dual_bracket(c, r, seq.polys[static_cast<size_t>(2 + r)].shift_up(1)) ==
                  c.g(r + 1, 0));
        }
    }
    {
        const RecCoeffs c = laguerre(12);
        const PolySeq seq = generate(c, 6);
        CHECK(dual_bracket(c, 0, seq.polys[3].shift_up(3)) == Rational(36));
    }
}

TEST_CASE("single brackets recover every recurrence coefficient") {
    Rng rng(424);
    std::vector<RecCoeffs> instances;
    instances.push_back(laguerre(14));
    instances.push_back(random_reccoeffs(2, 14, rng));
    instances.push_back(random_reccoeffs(3, 15, rng));
    for (const auto& c : instances) {
        const BracketReport rep = bracket_check(c, BracketKind::coefficient_recovery);
        CHECK(rep.ok);
        CHECK(rep.checks > 0);
        if (!rep.ok) MESSAGE(rep.first_failure);
    }
}

TEST_CASE("shifted dual rows read band entries and deep products") {
    Rng rng(425);
    std::vector<RecCoeffs> instances;
    instances.push_back(laguerre(16));
    instances.push_back(random_reccoeffs(2, 17, rng));
    instances.push_back(random_reccoeffs(3, 18, rng));
    for (const auto& c : instances) {
        const BracketReport rep = bracket_check(c, BracketKind::shifted_duals);
        CHECK(rep.ok);
        CHECK(rep.checks > 0);
        if (!rep.ok) MESSAGE(rep.first_failure);
    }
    // One banded entry by hand: dual row 1 against x times member 2
    // gives the deepest band at subscript 2. The unshifted pairing of
    // the once-shifted family's dual row 0 with member 2 picks up a
    // correction instead; pin that too so the distinction stays visible.
    const RecCoeffs c = laguerre(10);
    const PolySeq seq = generate(c, 4);
    CHECK(dual_bracket(c, 1, seq.polys[2].shift_up(1)) == c.g(2, 0));
    CHECK(dual_bracket(associated(c, 1), 0, seq.polys[2]) == c.g(2, 0) - c.g(1, 0));
}

TEST_CASE("descent steps walk brackets down one power") {
    Rng rng(426);
    std::vector<RecCoeffs> instances;
    instances.push_back(laguerre(16));
    instances.push_back(constant_coeffs(2, 3, {1, 3}, 16));
    instances.push_back(random_reccoeffs(2, 16, rng));
    instances.push_back(random_reccoeffs(3, 18, rng));
    for (const auto& c : instances) {
        const BracketReport rep = bracket_check(c, BracketKind::power_descent);
        CHECK(rep.ok);
        CHECK(rep.checks > 0);
        if (!rep.ok) MESSAGE(rep.first_failure);
    }
}

TEST_CASE("bracket check starves on shallow data") {
    const RecCoeffs shallow = constant_coeffs(2, 1, {1, 1}, 3);
    CHECK_THROWS_AS((void)bracket_check(shallow, BracketKind::shifted_duals), MissingCoefficient);
    const RecCoeffs c = constant_coeffs(2, 1, {1, 1}, 10);
    CHECK_THROWS_AS((void)bracket_check(c, BracketKind::weight_products, 40), MissingCoefficient);
}

TEST_CASE("positive definiteness reads the deepest band") {
    CHECK(positive_definite(laguerre(10)));
    CHECK(positive_definite(constant_coeffs(1, 0, {1}, 8)));
    CHECK(positive_definite(constant_coeffs(2, 3, {1, 3}, 10)));

    RecCoeffs flipped = constant_coeffs(2, 3, {1, 3}, 10);
    flipped.gamma[0][4] = Rational(-2);
    CHECK_FALSE(positive_definite(flipped));
    flipped.gamma[0][4] = Rational(0);
    CHECK_FALSE(positive_definite(flipped));

    // Positive deepest band forces positive aligned brackets.
    for (const RecCoeffs& c : {laguerre(16), constant_coeffs(2, 3, {1, 3}, 16)}) {
        REQUIRE(positive_definite(c));
        const PolySeq seq = generate(c, 12);
        for (int r = 0; r < c.d; ++r) {
            for (int k = 0; k * (c.d + 1) + r <= 12; ++k) {
                const Poly q = seq.polys[static_cast<size_t>(c.d * k + r)].shift_up(k);
                CHECK(dual_bracket(c, r, q).sign() == 1);
            }
        }
    }
}

TEST_CASE("markov relation annihilates through the requested order") {
    {
        SeriesParams p;
        p.n = 0;
        p.r = 1;
        const SeriesTrunc res = stieltjes_relations(laguerre(30), SeriesRelation::markov, p, 20);
        CHECK(res.order == 20);
        CHECK(all_zero(res));
    }
    Rng rng(427);
    {
        SeriesParams p;
        p.n = 1;
        p.r = 1;
        const RecCoeffs c = random_reccoeffs(2, 24, rng);
        CHECK(all_zero(stieltjes_relations(c, SeriesRelation::markov, p, 15)));
    }
    {
        SeriesParams p;
        p.n = 0;
        p.r = 2;
        const RecCoeffs c = random_reccoeffs(3, 24, rng);
        CHECK(all_zero(stieltjes_relations(c, SeriesRelation::markov, p, 12)));
    }

    // Pairing the shifted row with the wrong dual row leaves a residue.
    {
        const RecCoeffs c = laguerre(20);
        const SeriesTrunc sa = stieltjes_series(moment_row(c, 0, 10), 10);
        const SeriesTrunc sb = stieltjes_series(moment_row(associated(c, 1), 0, 10), 10);
        const SeriesTrunc wrong = series_sum(series_product(sa, sb),
                                             stieltjes_series(moment_row(c, 0, 10), 10));
        CHECK_FALSE(all_zero(wrong));
    }

    SeriesParams bad;
    bad.r = 0;
    CHECK_THROWS_AS((void)stieltjes_relations(laguerre(10), SeriesRelation::markov, bad, 4),
                    BadParameter);
    bad.r = 1;
    bad.n = -1;
    CHECK_THROWS_AS((void)stieltjes_relations(laguerre(10), SeriesRelation::markov, bad, 4),
                    BadParameter);
}

TEST_CASE("codilated duals divide by the common denominator") {
    Rng rng(428);
    const RecCoeffs c2 = random_reccoeffs(2, 20, rng);
    const RecCoeffs c3 = random_reccoeffs(3, 20, rng);
    {
        SeriesParams p;
        p.lambda = Rational(1);
        for (int nu = 0; nu < 2; ++nu) {
            p.nu = nu;
            CHECK(all_zero(stieltjes_relations(c2, SeriesRelation::codilated, p, 12)));
        }
    }
    {
        SeriesParams p;
        p.lambda = Rational(3);
        for (int nu = 0; nu < 2; ++nu) {
            p.nu = nu;
            CHECK(all_zero(stieltjes_relations(c2, SeriesRelation::codilated, p, 12)));
        }
    }
    {
        SeriesParams p;
        p.lambda = Rational(5, 2);
        for (int nu = 0; nu < 3; ++nu) {
            p.nu = nu;
            CHECK(all_zero(stieltjes_relations(c3, SeriesRelation::codilated, p, 10)));
        }
    }
    {
        SeriesParams p;
        p.lambda = Rational(2);
        CHECK(all_zero(stieltjes_relations(laguerre(20), SeriesRelation::codilated, p, 12)));
    }

    SeriesParams bad;
    bad.lambda = Rational(0);
    CHECK_THROWS_AS((void)stieltjes_relations(c2, SeriesRelation::codilated, bad, 6), ZeroLambda);
    bad.lambda = Rational(1);
    bad.nu = 2;
    CHECK_THROWS_AS((void)stieltjes_relations(c2, SeriesRelation::codilated, bad, 6), BadParameter);
}

TEST_CASE("quasi detection finds the exact window") {
    Rng rng(429);
    {
        const RecCoeffs c = random_reccoeffs(2, 14, rng);
        const PolySeq P = generate(c, 10);
        const QuasiOrder q = quasi_detect(P, P, 2);
        CHECK(q.l == 0);
        for (const auto& row : q.a) CHECK(row.empty());
    }
    {
        // Kernel members sit one window below, with the lower factor
        // bands as connection entries, nonzero all the way down.
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = kernel_ready(d, 20, 10, rng);
            const KernelResult k = kernel(c, 10);
            const PolySeq P = generate(c, 10);
            const QuasiOrder q = quasi_detect(P, k.members, d);
            CHECK(q.l == 1);
            for (int n = d; n <= 10; ++n) {
                REQUIRE(static_cast<int>(q.a[static_cast<size_t>(n)].size()) == d);
                for (int i = 1; i <= d; ++i) {
                    CHECK(q.a[static_cast<size_t>(n)][static_cast<size_t>(i - 1)] ==
                          k.factors.lower.at(n, n - i));
                }
                CHECK_FALSE(q.a[static_cast<size_t>(n)][static_cast<size_t>(d - 1)].is_zero());
            }
        }
    }
    {
        // A one-deep window under d=2 is not a multiple of the block
        // size; under d=1 it is the exact order.
        const RecCoeffs c = random_reccoeffs(2, 14, rng);
        const PolySeq Q = generate(c, 9);
        PolySeq P;
        P.polys.push_back(Q.polys[0]);
        for (int n = 1; n <= 9; ++n) {
            P.polys.push_back(Q.polys[static_cast<size_t>(n)] +
                              Rational(3) * Q.polys[static_cast<size_t>(n - 1)]);
        }
        CHECK_THROWS_AS((void)quasi_detect(P, Q, 2), NotQuasi);
        const QuasiOrder q = quasi_detect(P, Q, 1);
        CHECK(q.l == 1);
        for (int n = 1; n <= 9; ++n) {
            CHECK(q.a[static_cast<size_t>(n)] == std::vector<Rational>{Rational(3)});
        }
    }
    {
        const PolySeq A = generate(random_reccoeffs(2, 14, rng), 9);
        const PolySeq B = generate(random_reccoeffs(2, 14, rng), 9);
        CHECK_THROWS_AS((void)quasi_detect(A, B, 2), NotQuasi);
    }
    {
        PolySeq bad;
        bad.polys.push_back(Poly::one());
        bad.polys.push_back(ipoly({1, 2}));
        const PolySeq P = generate(laguerre(6), 1);
        CHECK_THROWS_AS((void)quasi_detect(bad, P, 1), NotGradedMonic);
        CHECK_THROWS_AS((void)quasi_detect(P, P, 0), BadParameter);
    }
}

TEST_CASE("window products stay inside the allowed member range") {
    Rng rng(430);
    for (int d = 1; d <= 2; ++d) {
        const RecCoeffs c = kernel_ready(d, 20, 10, rng);
        const KernelResult k = kernel(c, 10);
        const PolySeq P = generate(c, 10);
        const auto rows = quasi_window(P, k.members, Poly::x());
        REQUIRE(static_cast<int>(rows.size()) == 10);
        for (int n = 0; n < 10; ++n) {
            REQUIRE(rows[static_cast<size_t>(n)].size() == 2);
            CHECK(rows[static_cast<size_t>(n)][0] == Rational(1));
            CHECK(rows[static_cast<size_t>(n)][1] == k.factors.upper.at(n, n));
        }
    }
    {
        const PolySeq A = generate(random_reccoeffs(2, 14, rng), 8);
        const PolySeq B = generate(random_reccoeffs(2, 14, rng), 8);
        CHECK_THROWS_AS((void)quasi_window(A, B, Poly::x()), NotQuasi);
        CHECK_THROWS_AS((void)quasi_window(A, B, Poly::zero()), BadParameter);
    }
}

TEST_CASE("deep combinations reduce to the short member window") {
    Rng rng(431);
    {
        const RecCoeffs c = random_reccoeffs(2, 12, rng);
        const std::vector<Rational> a(3, Rational(0));
        const ReducedComb rc = quasi_reduce(c, a, 4, 3);
        CHECK(rc.residual == Poly::zero());
        REQUIRE(rc.U.size() == 3);
        for (int j = 0; j < 3; ++j) {
            CHECK(rc.U[static_cast<size_t>(j)].degree() == j);
            CHECK(rc.U[static_cast<size_t>(j)].leading() == Rational(1));
        }
    }
    struct Probe {
        int d, r, n;
    };
    for (const Probe pr : {Probe{1, 2, 8}, Probe{2, 3, 10}, Probe{3, 5, 12}}) {
        const RecCoeffs c = random_reccoeffs(pr.d, pr.n + 2, rng);
        std::vector<Rational> a;
        for (int i = 0; i < pr.r; ++i) a.push_back(random_rational(rng));
        const ReducedComb rc = quasi_reduce(c, a, pr.n, pr.r);
        CHECK(rc.residual == Poly::zero());
        CHECK(rc.U[0] == Poly::one());
    }
    const RecCoeffs c = random_reccoeffs(2, 12, rng);
    CHECK_THROWS_AS((void)quasi_reduce(c, {Rational(1), Rational(1)}, 6, 2), BadParameter);
    CHECK_THROWS_AS((void)quasi_reduce(c, {Rational(1)}, 6, 3), BadParameter);
    CHECK_THROWS_AS(
        (void)quasi_reduce(c, {Rational(1), Rational(1), Rational(1)}, 3, 3), BadParameter);
}

TEST_CASE("point mass transforms keep the reproducing structure") {
    Rng rng(432);
    {
        const RecCoeffs c = random_reccoeffs(2, 16, rng);
        const UvarovResult u = uvarov(c, Rational(1), Rational(0), 8);
        const PolySeq P = generate(c, 8);
        REQUIRE(u.Q.size() == 9);
        for (int m = 0; m <= 8; ++m) {
            CHECK(u.Q.polys[static_cast<size_t>(m)] == P.polys[static_cast<size_t>(m)]);
        }
        CHECK(u.L[0] == Poly::one());
    }
    {
        // beta = 0, gamma = 1, c = 2, lambda = 1: the first transformed
        // member shifts to x - 1 and scales back against P_1 at c.
        const RecCoeffs c = constant_coeffs(1, 0, {1}, 10);
        const UvarovResult u = uvarov(c, Rational(2), Rational(1), 4);
        CHECK(u.L[0] == Poly::one());
        CHECK(u.Q.polys[1] == ipoly({-1, 1}));
        const PolySeq P = generate(c, 4);
        const Rational lhs =
            u.Q.polys[1].eval(Rational(2)) * (Rational(1) + u.L[0].eval(Rational(2)));
        CHECK(lhs == P.polys[1].eval(Rational(2)));
        CHECK_THROWS_AS((void)uvarov(c, Rational(2), Rational(-1), 4), DenominatorVanishes);
    }
    {
        // The correction term carries lambda exactly: scaling it away
        // leaves a lambda-independent polynomial.
        const RecCoeffs c = random_reccoeffs(2, 16, rng);
        const Rational cc(2);
        const int N = 6;
        const PolySeq P = generate(c, N);
        const UvarovResult u3 = uvarov(c, cc, Rational(3), N);
        const UvarovResult u5 = uvarov(c, cc, Rational(5), N);
        for (int m = 1; m <= N; ++m) {
            const Poly& lm = u3.L[static_cast<size_t>(m - 1)];
            CHECK(u5.L[static_cast<size_t>(m - 1)] == lm);
            const Rational t3 = Rational(1) + Rational(3) * lm.eval(cc);
            const Rational t5 = Rational(1) + Rational(5) * lm.eval(cc);
            const Poly lhs3 = (u3.Q.polys[static_cast<size_t>(m)] -
                               P.polys[static_cast<size_t>(m)]) * (t3 / Rational(3));
            const Poly lhs5 = (u5.Q.polys[static_cast<size_t>(m)] -
                               P.polys[static_cast<size_t>(m)]) * (t5 / Rational(5));
            CHECK(lhs3 == lhs5);
            CHECK(lhs3 == -P.polys[static_cast<size_t>(m)].eval(cc) * lm);
        }
        // Each reproducing increment is the member pair over its
        // bracket denominator, and that bracket telescopes into the
        // same deepest-band product the aligned powers give.
        for (int m = 1; m < N; ++m) {
            const int r = m % c.d;
            const int block = m / c.d;
            const Poly pair =
                P.polys[static_cast<size_t>(block)] * P.polys[static_cast<size_t>(m)];
            const Rational den = dual_bracket(c, r, pair);
            Rational prod(1);
            for (int nu = 1; nu <= block; ++nu) prod *= c.g(c.d * (nu - 1) + r + 1, 0);
            CHECK(den == prod);
            const Poly inc = u3.L[static_cast<size_t>(m)] - u3.L[static_cast<size_t>(m - 1)];
            CHECK(inc * den ==
                  P.polys[static_cast<size_t>(block)].eval(cc) * P.polys[static_cast<size_t>(m)]);
        }
    }
    CHECK_THROWS_AS((void)uvarov(laguerre(6), Rational(1), Rational(1), 0), BadParameter);
}
