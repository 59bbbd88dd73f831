#include <doctest.h>

#include <vector>

#include "dops/casorati.hpp"
#include "dops/copoly.hpp"
#include "dops/ops.hpp"
#include "dops/random.hpp"
#include "helpers.hpp"

using namespace dops;
using dops::testing::constant_coeffs;
using dops::testing::ipoly;

namespace {

// gamma[0] = (5, 7, 11, ...): primes keep every band subscript visible,
// so an identity that grabs a neighbouring subscript cannot pass by luck.
RecCoeffs prime_band_coeffs(int d, int N) {
    static const long primes[] = {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                  47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
    RecCoeffs c;
    c.d = d;
    for (int n = 0; n < N; ++n) c.beta.emplace_back(n % 3 - 1);
    c.gamma.assign(static_cast<size_t>(d), {});
    for (int nu = 0; nu < d; ++nu) {
        for (int m = 0; m < N; ++m) {
            long base = primes[(m + 5 * nu) % 23];
            c.gamma[static_cast<size_t>(nu)].emplace_back(nu == 0 ? base : base - 4);
        }
    }
    return c;
}

}  // namespace

TEST_CASE("PolyMatrix: exact determinants") {
    SUBCASE("dimension one") {
        PolyMatrix m(1);
        m.at(0, 0) = ipoly({1, 2});
        CHECK(m.det() == ipoly({1, 2}));
    }
    SUBCASE("frozen numeric 3x3") {
        PolyMatrix m(3);
        long rows[3][3] = {{1, 1, 1}, {1, 2, 4}, {1, 3, 9}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m.at(i, j) = Poly(Rational(rows[i][j]));
        CHECK(m.det() == Poly(Rational(2)));
    }
    SUBCASE("symbolic entries with cancellation") {
        PolyMatrix m(2);
        m.at(0, 0) = ipoly({0, 1});
        m.at(0, 1) = ipoly({1});
        m.at(1, 0) = ipoly({0, 0, 1});
        m.at(1, 1) = ipoly({0, 1});
        CHECK(m.det().is_zero());
    }
    SUBCASE("zero pivot forces a row swap") {
        PolyMatrix m(3);
        m.at(0, 1) = Poly::one();
        m.at(1, 0) = Poly::one();
        m.at(2, 2) = Poly::one();
        CHECK(m.det() == Poly(Rational(-1)));
    }
    SUBCASE("structurally singular") {
        PolyMatrix m(3);
        m.at(0, 2) = Poly::one();
        m.at(1, 2) = Poly::x();
        m.at(2, 2) = ipoly({1, 1});
        CHECK(m.det().is_zero());
    }
    SUBCASE("matches cofactor expansion on a symbolic 3x3") {
        PolyMatrix m(3);
        Poly e[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                e[i][j] = ipoly({i - j, 1 + i, (i * j) % 3});
                m.at(i, j) = e[i][j];
            }
        Poly byhand = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                      e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                      e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
        CHECK(m.det() == byhand);
    }
}

TEST_CASE("SeqCache: lazy associated table") {
    Rng rng(101);
    const RecCoeffs c = random_reccoeffs(2, 16, rng);
    SeqCache cache(c);
    SUBCASE("negative degrees read as zero") {
        CHECK(cache.at(-1, 0).is_zero());
        CHECK(cache.at(-7, 3).is_zero());
    }
    SUBCASE("matches direct generation per level") {
        const PolySeq direct = generate_associated(c, 2, 9);
        for (int n = 0; n <= 9; ++n) CHECK(cache.at(n, 2) == direct[n]);
    }
    SUBCASE("growing the table keeps earlier members") {
        const Poly p3 = cache.at(3, 1);
        const Poly p11 = cache.at(11, 1);
        CHECK(cache.at(3, 1) == p3);
        CHECK(p11.degree() == 11);
    }
    SUBCASE("level below zero is rejected") {
        CHECK_THROWS_AS(cache.at(2, -1), BadParameter);
    }
}

TEST_CASE("window determinant: three routes and the closed form") {
    SUBCASE("order 1, unit bands: every window constant is 1") {
        const RecCoeffs c = constant_coeffs(1, 0, {1}, 16);
        SeqCache cache(c);
        for (int n = 0; n <= 6; ++n) {
            CHECK(window_det(cache, n, 0) == Poly::one());
            CHECK(window_value(c, n, 0) == Rational(1));
        }
    }
    SUBCASE("order 1, counting band: frozen products") {
        RecCoeffs c = constant_coeffs(1, 0, {1}, 12);
        for (int m = 0; m < 12; ++m) c.gamma[0][static_cast<size_t>(m)] = Rational(m + 1);
        SeqCache cache(c);
        CHECK(window_value(c, 3, 0) == Rational(6));
        CHECK(window_value(c, 2, 1) == Rational(6));
        CHECK(window_det(cache, 3, 0) == Poly(Rational(6)));
        CHECK(window_det_by_steps(cache, 2, 1) == Poly(Rational(6)));
    }
    SUBCASE("order 2 desk check") {
        RecCoeffs c;
        c.d = 2;
        c.beta = {Rational(1), Rational(-1), Rational(2), Rational(0), Rational(1), Rational(-2)};
        c.gamma = {{Rational(2), Rational(3), Rational(-1), Rational(5), Rational(2), Rational(7)},
                   {Rational(1, 2), Rational(-2), Rational(1), Rational(3), Rational(-1), Rational(4)}};
        SeqCache cache(c);
        CHECK(window_value(c, 2, 0) == Rational(6));
        CHECK(window_det(cache, 2, 0) == Poly(Rational(6)));
        CHECK(window_det_by_steps(cache, 2, 0) == Poly(Rational(6)));
        // (d+1)n = 3 is odd here, so the closed form carries a minus sign.
        CHECK(window_value(c, 1, 0) == -Rational(2));
    }
    SUBCASE("random sweeps, orders 1..3") {
        Rng rng(7001);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 18, rng);
            for (int n = 0; n <= 5; ++n) {
                for (int r = 0; r <= 2; ++r) {
                    CHECK(verify_delta(c, n, r).is_zero());
                }
            }
        }
    }
    SUBCASE("input checks") {
        const RecCoeffs c = constant_coeffs(1, 0, {1}, 8);
        SeqCache cache(c);
        CHECK_THROWS_AS(window_det(cache, -1, 0), BadParameter);
        CHECK_THROWS_AS(window_value(c, 0, -2), BadParameter);
    }
}

TEST_CASE("extended window vanishes for every positive anchor") {
    Rng rng(7100);
    for (int d = 1; d <= 3; ++d) {
        const RecCoeffs c = random_reccoeffs(d, 20, rng);
        SeqCache cache(c);
        for (int n = 1; n <= 8; ++n) {
            for (int r = 0; r <= 1; ++r) {
                CHECK(extended_window_det(cache, n, r).is_zero());
            }
        }
        // Anchor 0 is the boundary: the matrix is unitriangular, so the
        // determinant is one, not zero.
        for (int r = 0; r <= 1; ++r) {
            CHECK(extended_window_det(cache, 0, r) == Poly::one());
        }
    }
}

TEST_CASE("short window: stepped recurrence") {
    SUBCASE("order 1 reduces to the plain recurrence") {
        Rng rng(7200);
        const RecCoeffs c = random_reccoeffs(1, 14, rng);
        for (int n = 2; n <= 7; ++n) CHECK(verify_B_recurrence(c, n, 0).is_zero());
    }
    SUBCASE("random sweeps, orders 2 and 3") {
        Rng rng(7201);
        for (int d = 2; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 20, rng);
            for (int n = d + 1; n <= d + 5; ++n) {
                for (int r = 0; r <= 2; ++r) {
                    CHECK(verify_B_recurrence(c, n, r).is_zero());
                }
            }
        }
    }
    SUBCASE("prime bands catch subscript drift") {
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = prime_band_coeffs(d, 20);
            CHECK(verify_B_recurrence(c, d + 2, 1).is_zero());
        }
    }
    SUBCASE("starts at n = d+1") {
        const RecCoeffs c = constant_coeffs(2, 0, {1, 1}, 12);
        CHECK_THROWS_AS(verify_B_recurrence(c, 2, 0), BadParameter);
    }
}

TEST_CASE("spread window factorization") {
    SUBCASE("random sweeps, orders 1..3") {
        Rng rng(7300);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 24, rng);
            for (int n = 0; n <= 4; ++n) {
                for (int r = 0; r <= 2; ++r) {
                    std::vector<int> tight, wide;
                    for (int i = 1; i <= d; ++i) {
                        tight.push_back(n + i);
                        wide.push_back(n + 2 * i + 1);
                    }
                    CHECK(verify_F(c, n, r, tight).is_zero());
                    CHECK(verify_F(c, n, r, wide).is_zero());
                }
            }
        }
    }
    SUBCASE("consecutive rows then one far row collapse to a single member") {
        Rng rng(7301);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 26, rng);
            SeqCache cache(c);
            for (int n = 0; n <= 3; ++n) {
                for (int far = n + d + 1; far <= n + d + 4; ++far) {
                    std::vector<int> rows;
                    for (int t = 0; t < d; ++t) rows.push_back(n + t);
                    rows.push_back(far);
                    const Poly lhs = spread_window_det(cache, 1, rows);
                    const Poly rhs = window_value(c, n, 1) * cache.at(far - n - d, n + 1 + d);
                    CHECK(lhs == rhs);
                }
            }
        }
    }
    SUBCASE("repeated spread rows vanish on both sides") {
        const RecCoeffs c = constant_coeffs(2, 1, {2, 1}, 18);
        CHECK(verify_F(c, 1, 0, {3, 3}).is_zero());
        SeqCache cache(c);
        CHECK(spread_window_det(cache, 0, {1, 3, 3}).is_zero());
    }
    SUBCASE("offset checks") {
        const RecCoeffs c = constant_coeffs(2, 0, {1, 1}, 12);
        CHECK_THROWS_AS(verify_F(c, 2, 0, {3}), BadOffsets);
        CHECK_THROWS_AS(verify_F(c, 2, 0, {3, 2}), BadOffsets);
        SeqCache cache(c);
        CHECK_THROWS_AS(spread_window_det(cache, 0, {1, 2}), BadOffsets);
    }
}

TEST_CASE("mixed window: additive perturbation") {
    SUBCASE("random sweeps, orders 1..3, all levels") {
        Rng rng(7400);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 26, rng);
            const Perturbation p = random_perturbation(d, 0, rng);
            for (int n = 1; n <= 4; ++n) {
                for (int r = 0; r <= n + 1; ++r) {
                    CHECK(verify_nabla(c, p, n, r, NablaKind::corecursive).is_zero());
                }
            }
        }
    }
    SUBCASE("trivial perturbation keeps the table") {
        const RecCoeffs c = prime_band_coeffs(2, 20);
        Perturbation p;
        for (int n = 1; n <= 3; ++n) {
            for (int r = 0; r <= 2; ++r) {
                CHECK(verify_nabla(c, p, n, r, NablaKind::corecursive).is_zero());
            }
        }
    }
    SUBCASE("perturbation away from level 0 is rejected") {
        Rng rng(7401);
        const RecCoeffs c = random_reccoeffs(2, 16, rng);
        const Perturbation p = random_perturbation(2, 1, rng);
        CHECK_THROWS_AS(verify_nabla(c, p, 3, 1, NablaKind::corecursive), BadParameter);
    }
    SUBCASE("level range and stray offsets are rejected") {
        Rng rng(7402);
        const RecCoeffs c = random_reccoeffs(2, 16, rng);
        const Perturbation p = random_perturbation(2, 0, rng);
        CHECK_THROWS_AS(verify_nabla(c, p, 3, 5, NablaKind::corecursive), BadParameter);
        CHECK_THROWS_AS(verify_nabla(c, p, 3, -1, NablaKind::corecursive), BadParameter);
        CHECK_THROWS_AS(verify_nabla(c, p, 3, 1, NablaKind::corecursive, {4, 5}), BadOffsets);
    }
}

TEST_CASE("mixed window: combined perturbation") {
    SUBCASE("random sweeps, orders 1..3, all levels") {
        Rng rng(7500);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 26, rng);
            const Perturbation p = random_perturbation(d, 0, rng);
            for (int n = 1; n <= 4; ++n) {
                for (int r = 0; r <= n + 1; ++r) {
                    CHECK(verify_nabla(c, p, n, r, NablaKind::comodified).is_zero());
                }
            }
        }
    }
    SUBCASE("pure dilation, order 1: frozen bottom row") {
        // Unit bands, zero diagonal, lambda = 3: the first column differs
        // from the plain family by (1-3) * member two degrees down, level 2.
        const RecCoeffs c = constant_coeffs(1, 0, {1}, 16);
        Perturbation p;
        p.lambda = Rational(3);
        for (int n = 1; n <= 5; ++n) {
            CHECK(verify_nabla(c, p, n, 0, NablaKind::comodified).is_zero());
            CHECK(verify_nabla(c, p, n, 1, NablaKind::comodified).is_zero());
        }
    }
    SUBCASE("pure dilation, orders 2 and 3") {
        Rng rng(7501);
        for (int d = 2; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 24, rng);
            Perturbation p;
            p.lambda = Rational(-3, 2);
            for (int n = 1; n <= 3; ++n) {
                for (int r = 0; r <= n + 1; ++r) {
                    CHECK(verify_nabla(c, p, n, r, NablaKind::comodified).is_zero());
                }
            }
        }
    }
    SUBCASE("lambda = 1 reduces to the additive table") {
        Rng rng(7502);
        const RecCoeffs c = random_reccoeffs(2, 22, rng);
        Perturbation p = random_perturbation(2, 0, rng);
        p.lambda = Rational(1);
        for (int n = 1; n <= 3; ++n) {
            for (int r = 0; r <= 2; ++r) {
                CHECK(verify_nabla(c, p, n, r, NablaKind::comodified).is_zero());
                CHECK(verify_nabla(c, p, n, r, NablaKind::corecursive).is_zero());
            }
        }
    }
}

TEST_CASE("mixed window: spread rows") {
    SUBCASE("additive, random sweeps") {
        Rng rng(7600);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 28, rng);
            const Perturbation p = random_perturbation(d, 0, rng);
            for (int n = 1; n <= 3; ++n) {
                std::vector<int> m;
                for (int i = 1; i <= d; ++i) m.push_back(n + i + (i % 2));
                for (int r = 0; r <= n + 1; ++r) {
                    CHECK(verify_nabla(c, p, n, r, NablaKind::corecursive_spread, m).is_zero());
                }
            }
        }
    }
    SUBCASE("combined, random sweeps") {
        Rng rng(7601);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 28, rng);
            const Perturbation p = random_perturbation(d, 0, rng);
            for (int n = 1; n <= 3; ++n) {
                std::vector<int> m;
                for (int i = 1; i <= d; ++i) m.push_back(n + 2 * i);
                for (int r = 0; r <= n + 1; ++r) {
                    CHECK(verify_nabla(c, p, n, r, NablaKind::comodified_spread, m).is_zero());
                }
            }
        }
    }
    SUBCASE("spread rows must clear the anchor") {
        Rng rng(7602);
        const RecCoeffs c = random_reccoeffs(2, 20, rng);
        const Perturbation p = random_perturbation(2, 0, rng);
        CHECK_THROWS_AS(verify_nabla(c, p, 3, 1, NablaKind::corecursive_spread, {4}), BadOffsets);
        CHECK_THROWS_AS(verify_nabla(c, p, 3, 1, NablaKind::corecursive_spread, {3, 5}), BadOffsets);
    }
}

TEST_CASE("shifted window ratio") {
    SUBCASE("frozen order-1 check pins the band subscript") {
        RecCoeffs c = constant_coeffs(1, 0, {1}, 12);
        c.gamma[0][0] = Rational(5);
        c.gamma[0][1] = Rational(7);
        // Ratio between consecutive full windows must grab the subscript
        // at the new degree, not d places below it.
        CHECK(window_value(c, 2, 0) == Rational(35));
        CHECK(window_value(c, 2, 0) != c.g(1, 0) * window_value(c, 1, 0));
        Perturbation unused;
        CHECK(verify_nabla(c, unused, 2, 0, NablaKind::shifted, {0, 1}).is_zero());
    }
    SUBCASE("random shifts, orders 1..3") {
        Rng rng(7700);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 26, rng);
            Perturbation unused;
            for (int n = 1; n <= 5; ++n) {
                std::vector<int> canonical, scattered;
                for (int v = 0; v <= d; ++v) {
                    canonical.push_back(v);
                    scattered.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(n + d))));
                }
                CHECK(verify_nabla(c, unused, n, 0, NablaKind::shifted, canonical).is_zero());
                CHECK(verify_nabla(c, unused, n, 0, NablaKind::shifted, scattered).is_zero());
            }
        }
    }
    SUBCASE("repeated levels vanish on both sides") {
        const RecCoeffs c = prime_band_coeffs(1, 14);
        Perturbation unused;
        CHECK(verify_nabla(c, unused, 3, 0, NablaKind::shifted, {2, 2}).is_zero());
    }
    SUBCASE("offset checks") {
        const RecCoeffs c = constant_coeffs(2, 0, {1, 1}, 14);
        Perturbation unused;
        CHECK_THROWS_AS(verify_nabla(c, unused, 2, 0, NablaKind::shifted, {0, 1}), BadOffsets);
        CHECK_THROWS_AS(verify_nabla(c, unused, 2, 0, NablaKind::shifted, {0, 1, 9}), BadOffsets);
        CHECK_THROWS_AS(verify_nabla(c, unused, 0, 0, NablaKind::shifted, {0, 1, 2}), BadParameter);
    }
}

TEST_CASE("transfer cofactors") {
    SUBCASE("zero steps is the identity row") {
        Rng rng(7800);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 20, rng);
            const TransferResult t = transfer_Tp(c, d + 2, 0);
            CHECK(t.T[0] == Poly::one());
            for (int i = 1; i <= d; ++i) CHECK(t.T[static_cast<size_t>(i)].is_zero());
            CHECK(t.residual.is_zero());
        }
    }
    SUBCASE("one step, order 2: frozen cofactors") {
        const RecCoeffs c = prime_band_coeffs(2, 20);
        const int n = 4;
        const TransferResult t = transfer_Tp(c, n, 1);
        CHECK(t.T[0] == Poly::x() - Poly(c.b(n)));
        CHECK(t.T[1] == Poly(-c.g(n, 1)));
        CHECK(t.T[2] == Poly(-c.g(n - 1, 0)));
        CHECK(t.residual.is_zero());
    }
    SUBCASE("random sweeps, orders 1..3") {
        Rng rng(7801);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 26, rng);
            for (int n = d; n <= d + 3; ++n) {
                for (int p = 0; p <= 4; ++p) {
                    CHECK(transfer_Tp(c, n, p).residual.is_zero());
                }
            }
        }
    }
    SUBCASE("degree pattern under nonzero bands") {
        for (int d = 1; d <= 3; ++d) {
            std::vector<long> g;
            for (int nu = 0; nu < d; ++nu) g.push_back(2 + nu);
            const RecCoeffs c = constant_coeffs(d, 1, g, 24);
            for (int p = 1; p <= 4; ++p) {
                const TransferResult t = transfer_Tp(c, d + 2, p);
                CHECK(t.T[0].degree() == p);
                for (int i = 1; i <= d; ++i) CHECK(t.T[static_cast<size_t>(i)].degree() == p - 1);
                CHECK(t.T[0].is_monic());
            }
        }
    }
    SUBCASE("input checks") {
        const RecCoeffs c = constant_coeffs(2, 0, {1, 1}, 12);
        CHECK_THROWS_AS(transfer_Tp(c, 1, 2), BadParameter);
        CHECK_THROWS_AS(transfer_Tp(c, 3, -1), BadParameter);
    }
}

TEST_CASE("cross-degree split at an intermediate degree (order 2)") {
    SUBCASE("random sweeps") {
        Rng rng(7900);
        const RecCoeffs c = random_reccoeffs(2, 30, rng);
        for (int n = 0; n <= 2; ++n) {
            for (int m = n + 1; m <= n + 4; ++m) {
                for (int k = m + 1; k <= m + 3; ++k) {
                    for (int r = 0; r <= 2; ++r) {
                        CdParams prm;
                        prm.n = n;
                        prm.m = m;
                        prm.k = k;
                        prm.r = r;
                        CHECK(verify_cd(c, CdKind::product, prm).is_zero());
                    }
                }
            }
        }
    }
    SUBCASE("only order 2") {
        CdParams prm;
        prm.n = 0;
        prm.m = 1;
        prm.k = 2;
        CHECK_THROWS_AS(verify_cd(constant_coeffs(1, 0, {1}, 10), CdKind::product, prm), UnsupportedD);
        CHECK_THROWS_AS(verify_cd(constant_coeffs(3, 0, {1, 1, 1}, 10), CdKind::product, prm), UnsupportedD);
    }
    SUBCASE("degrees must be strictly ordered") {
        const RecCoeffs c = constant_coeffs(2, 0, {1, 1}, 14);
        CdParams prm;
        prm.n = 2;
        prm.m = 2;
        prm.k = 4;
        CHECK_THROWS_AS(verify_cd(c, CdKind::product, prm), BadOffsets);
    }
}

TEST_CASE("weighted telescoping over the intermediate degree (order 2)") {
    SUBCASE("exact for the full grid below 8") {
        Rng rng(8000);
        const RecCoeffs c = random_reccoeffs(2, 30, rng);
        for (int n = 0; n <= 5; ++n) {
            for (int m = n + 1; m <= 7; ++m) {
                for (int k = m + 1; k <= 8; ++k) {
                    CdParams prm;
                    prm.n = n;
                    prm.m = m;
                    prm.k = k;
                    prm.r = 1;
                    CHECK(verify_cd(c, CdKind::sum, prm).is_zero());
                }
            }
        }
    }
    SUBCASE("one-step sums collapse, longer sums need the cross terms") {
        // The weighted sum equals the single end term only for m = n+1.
        // For m >= n+2 the exact defect of that collapsed form is the
        // window constant times the sum of the interior cross terms.
        const RecCoeffs c = prime_band_coeffs(2, 30);
        SeqCache cache(c);
        const int r = 0;
        auto cross = [&](int n, int v) {
            PolyMatrix M(2);
            M.at(0, 0) = cache.at(v - n - 1, r + n + 1);
            M.at(0, 1) = cache.at(v - n - 2, r + n + 2);
            M.at(1, 0) = cache.at(v - n, r + n + 1);
            M.at(1, 1) = cache.at(v - n - 1, r + n + 2);
            return M.det();
        };
        auto weight = [&](int v) {
            Rational w(1);
            for (int l = 1; l <= v; ++l) w *= c.g(l + r, 0);
            if (v % 2 != 0) w = -w;
            return w.inverse();
        };
        for (int n = 0; n <= 2; ++n) {
            for (int m = n + 1; m <= n + 3; ++m) {
                const int k = m + 2;
                Poly lhs;
                for (int v = n + 1; v <= m; ++v) {
                    lhs += weight(v) * spread_window_det(cache, r, {n, v, k});
                }
                const Rational delta_n = window_value(c, n, r);
                Poly collapsed = delta_n * (cache.at(k - m - 1, m + r + 1) * (weight(m) * cross(n, m)));
                Poly interior;
                for (int v = n + 1; v <= m - 1; ++v) {
                    interior += (cache.at(k - v - 1, v + r + 1) - cache.at(k - v - 3, v + r + 3)) *
                                (weight(v) * cross(n, v));
                }
                CHECK(lhs - collapsed == delta_n * interior);
                if (m == n + 1) {
                    CHECK(lhs == collapsed);
                } else {
                    CHECK(lhs != collapsed);
                }
            }
        }
    }
}

TEST_CASE("multipoint telescoping") {
    SUBCASE("default points, orders 1..3") {
        Rng rng(8100);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 24, rng);
            for (int n = 1; n <= 6; ++n) {
                for (int r = 0; r <= 1; ++r) {
                    CdParams prm;
                    prm.n = n;
                    prm.r = r;
                    CHECK(verify_cd(c, CdKind::multipoint, prm).is_zero());
                }
            }
        }
    }
    SUBCASE("one symbolic column at a time agrees with full evaluation") {
        Rng rng(8101);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 22, rng);
            for (int col = -1; col <= d; ++col) {
                CdParams prm;
                prm.n = 4;
                prm.r = 1;
                prm.symbolic_var = col;
                CHECK(verify_cd(c, CdKind::multipoint, prm).is_zero());
            }
        }
    }
    SUBCASE("custom and coincident points") {
        Rng rng(8102);
        const RecCoeffs c = random_reccoeffs(2, 22, rng);
        CdParams prm;
        prm.n = 5;
        prm.points = {Rational(-2), Rational(1, 3), Rational(4)};
        CHECK(verify_cd(c, CdKind::multipoint, prm).is_zero());
        prm.points = {Rational(2), Rational(2), Rational(2)};
        CHECK(verify_cd(c, CdKind::multipoint, prm).is_zero());
        prm.points = {Rational(1)};
        CHECK_THROWS_AS(verify_cd(c, CdKind::multipoint, prm), BadOffsets);
    }
}

TEST_CASE("confluent telescoping") {
    SUBCASE("order 1 desk oracle") {
        // Unit bands, zero diagonal: members 1, x, x^2-1, x^3-2x. The
        // derivative-bordered sum at n = 2 is P_1^2 + P_2^2 and the top
        // window minus the constant is x^4 - x^2 + 1.
        const RecCoeffs c = constant_coeffs(1, 0, {1}, 12);
        CdParams prm;
        prm.n = 2;
        CHECK(verify_cd(c, CdKind::confluent, prm).is_zero());
        SeqCache cache(c);
        const Poly direct = cache.at(1, 0) * cache.at(1, 0) + cache.at(2, 0) * cache.at(2, 0);
        CHECK(direct == ipoly({1, 0, -1, 0, 1}));
    }
    SUBCASE("same-level derivatives, orders 1..3") {
        Rng rng(8200);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 24, rng);
            for (int n = 1; n <= 6; ++n) {
                for (int r = 0; r <= 1; ++r) {
                    CdParams prm;
                    prm.n = n;
                    prm.r = r;
                    CHECK(verify_cd(c, CdKind::confluent, prm).is_zero());
                }
            }
        }
    }
    SUBCASE("stepped-level derivatives, orders 1..3") {
        Rng rng(8201);
        for (int d = 1; d <= 3; ++d) {
            const RecCoeffs c = random_reccoeffs(d, 24, rng);
            for (int n = 1; n <= 6; ++n) {
                for (int r = 0; r <= 1; ++r) {
                    CdParams prm;
                    prm.n = n;
                    prm.r = r;
                    CHECK(verify_cd(c, CdKind::confluent_assoc, prm).is_zero());
                }
            }
        }
    }
}
