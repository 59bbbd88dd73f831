#include "dops/forms.hpp"

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "dops/copoly.hpp"
#include "dops/errors.hpp"
#include "dops/ops.hpp"

namespace dops {

namespace {

// E[k][j] is the coefficient of member j in the expansion of x^k, built
// by pushing the recurrence through the coefficient vectors; E[k] has
// k+1 entries. Column r of this table is the moment row of u_r.
std::vector<std::vector<Rational>> monomial_table(const RecCoeffs& coeffs, int N) {
    coeffs.require(N);
    const int d = coeffs.d;
    std::vector<std::vector<Rational>> E(static_cast<size_t>(N) + 1);
    E[0] = {Rational(1)};
    for (int k = 0; k < N; ++k) {
        const auto& e = E[static_cast<size_t>(k)];
        std::vector<Rational> f(static_cast<size_t>(k) + 2, Rational(0));
        for (int i = 0; i <= k + 1; ++i) {
            Rational s(0);
            if (i >= 1) s += e[static_cast<size_t>(i - 1)];
            if (i <= k) s += coeffs.b(i) * e[static_cast<size_t>(i)];
            for (int nu = 0; nu < d; ++nu) {
                const int src = i + 1 + nu;
                if (src > k) break;
                s += coeffs.g(i + 1, d - 1 - nu) * e[static_cast<size_t>(src)];
            }
            f[static_cast<size_t>(i)] = s;
        }
        E[static_cast<size_t>(k) + 1] = std::move(f);
    }
    return E;
}

Rational table_entry(const std::vector<std::vector<Rational>>& E, int r, int k) {
    if (k < 0 || k >= static_cast<int>(E.size())) {
        throw MissingCoefficient("forms: monomial power " + std::to_string(k) +
                                 " beyond the prepared depth");
    }
    const auto& row = E[static_cast<size_t>(k)];
    if (r < 0 || r >= static_cast<int>(row.size())) return Rational(0);
    return row[static_cast<size_t>(r)];
}

// <u_r, x^m P_n> as a moment-weighted coefficient sum over the table.
Rational table_bracket(const std::vector<std::vector<Rational>>& E, const Poly& p, int r, int m) {
    Rational s(0);
    for (int j = 0; j <= p.degree(); ++j) {
        const Rational cj = p.coeff(j);
        if (!cj.is_zero()) s += cj * table_entry(E, r, j + m);
    }
    return s;
}

// Truncated Laurent slice: c[hi - e] holds the coefficient of z^e for
// e in [lo, hi]. Everything above hi is exactly zero; below lo the
// coefficients are unknown unless exact is set. Sums and products track
// how far down the result stays trustworthy.
struct ZS {
    int hi = -1;
    int lo = 0;
    bool exact = false;
    std::vector<Rational> c;

    Rational at(int e) const {
        if (e > hi || e < lo) return Rational(0);
        return c[static_cast<size_t>(hi - e)];
    }
};

ZS zs_series(const std::vector<Rational>& row, int order) {
    if (static_cast<int>(row.size()) < order) {
        throw MissingCoefficient("forms: moment row too short for the requested order");
    }
    ZS z;
    z.hi = -1;
    z.lo = -order;
    z.exact = false;
    z.c.resize(static_cast<size_t>(order));
    for (int k = 0; k < order; ++k) z.c[static_cast<size_t>(k)] = -row[static_cast<size_t>(k)];
    return z;
}

ZS zs_poly(const Poly& p) {
    ZS z;
    z.hi = std::max(p.degree(), 0);
    z.lo = 0;
    z.exact = true;
    z.c.resize(static_cast<size_t>(z.hi) + 1);
    for (int e = z.lo; e <= z.hi; ++e) z.c[static_cast<size_t>(z.hi - e)] = p.coeff(e);
    return z;
}

ZS zs_scale(ZS z, const Rational& s) {
    for (auto& v : z.c) v *= s;
    return z;
}

ZS zs_add(const ZS& a, const ZS& b) {
    ZS r;
    r.hi = std::max(a.hi, b.hi);
    r.exact = a.exact && b.exact;
    if (r.exact) {
        r.lo = std::min(a.lo, b.lo);
    } else if (a.exact) {
        r.lo = b.lo;
    } else if (b.exact) {
        r.lo = a.lo;
    } else {
        r.lo = std::max(a.lo, b.lo);
    }
    r.c.resize(static_cast<size_t>(r.hi - r.lo) + 1);
    for (int e = r.lo; e <= r.hi; ++e) r.c[static_cast<size_t>(r.hi - e)] = a.at(e) + b.at(e);
    return r;
}

ZS zs_neg(ZS z) {
    for (auto& v : z.c) v = -v;
    return z;
}

ZS zs_sub(const ZS& a, const ZS& b) { return zs_add(a, zs_neg(b)); }

ZS zs_mul(const ZS& a, const ZS& b) {
    ZS r;
    r.hi = a.hi + b.hi;
    r.exact = a.exact && b.exact;
    if (r.exact) {
        r.lo = a.lo + b.lo;
    } else if (a.exact) {
        r.lo = a.hi + b.lo;
    } else if (b.exact) {
        r.lo = b.hi + a.lo;
    } else {
        r.lo = std::max(a.lo + b.hi, b.lo + a.hi);
    }
    r.c.assign(static_cast<size_t>(r.hi - r.lo) + 1, Rational(0));
    for (int e = r.lo; e <= r.hi; ++e) {
        const int i0 = std::max(a.lo, e - b.hi);
        const int i1 = std::min(a.hi, e - b.lo);
        Rational s(0);
        for (int i = i0; i <= i1; ++i) s += a.at(i) * b.at(e - i);
        r.c[static_cast<size_t>(r.hi - e)] = s;
    }
    return r;
}

SeriesTrunc zs_to_proper(const ZS& z, int order) {
    if (z.lo > -order) throw Error("forms: series margin exhausted before the requested order");
    for (int e = 0; e <= z.hi; ++e) {
        if (!z.at(e).is_zero()) {
            throw Error("forms: residual series has a nonnegative power, relation misassembled");
        }
    }
    SeriesTrunc s;
    s.order = order;
    s.c.resize(static_cast<size_t>(order));
    for (int k = 0; k < order; ++k) s.c[static_cast<size_t>(k)] = z.at(-(k + 1));
    return s;
}

std::string rstr(const Rational& v) { return v.str(); }

}  // namespace

const Rational& MomentTable::at(int r, int k) const {
    if (r < 0 || r >= static_cast<int>(rows.size())) {
        throw MissingCoefficient("MomentTable: dual row " + std::to_string(r) + " not stored");
    }
    const auto& row = rows[static_cast<size_t>(r)];
    if (k < 0 || k >= static_cast<int>(row.size())) {
        throw MissingCoefficient("MomentTable: moment index " + std::to_string(k) +
                                 " beyond depth " + std::to_string(depth()));
    }
    return row[static_cast<size_t>(k)];
}

Rational MomentTable::bracket(int r, const Poly& q) const {
    if (q.degree() > depth()) {
        throw MissingCoefficient("MomentTable: polynomial degree " + std::to_string(q.degree()) +
                                 " exceeds table depth " + std::to_string(depth()));
    }
    Rational s(0);
    for (int j = 0; j <= q.degree(); ++j) {
        const Rational cj = q.coeff(j);
        if (!cj.is_zero()) s += cj * at(r, j);
    }
    return s;
}

MomentTable moments(const RecCoeffs& coeffs, int N) {
    if (N < 0) throw BadParameter("moments: depth must be nonnegative");
    const auto E = monomial_table(coeffs, N);
    MomentTable t;
    t.d = coeffs.d;
    t.rows.assign(static_cast<size_t>(coeffs.d),
                  std::vector<Rational>(static_cast<size_t>(N) + 1, Rational(0)));
    for (int r = 0; r < coeffs.d; ++r) {
        for (int k = 0; k <= N; ++k) {
            t.rows[static_cast<size_t>(r)][static_cast<size_t>(k)] = table_entry(E, r, k);
        }
    }
    return t;
}

std::vector<Rational> moment_row(const RecCoeffs& coeffs, int row, int N) {
    if (row < 0) throw BadParameter("moment_row: dual index must be nonnegative");
    if (N < 0) throw BadParameter("moment_row: depth must be nonnegative");
    const auto E = monomial_table(coeffs, N);
    std::vector<Rational> out(static_cast<size_t>(N) + 1, Rational(0));
    for (int k = 0; k <= N; ++k) out[static_cast<size_t>(k)] = table_entry(E, row, k);
    return out;
}

Rational dual_bracket(const RecCoeffs& coeffs, int row, const Poly& q) {
    if (q.degree() < 0) return Rational(0);
    const auto mr = moment_row(coeffs, row, q.degree());
    Rational s(0);
    for (int j = 0; j <= q.degree(); ++j) {
        const Rational cj = q.coeff(j);
        if (!cj.is_zero()) s += cj * mr[static_cast<size_t>(j)];
    }
    return s;
}

SeriesTrunc stieltjes_series(const std::vector<Rational>& moment_row, int order) {
    if (order < 0) throw BadParameter("stieltjes_series: order must be nonnegative");
    if (static_cast<int>(moment_row.size()) < order) {
        throw MissingCoefficient("stieltjes_series: row holds " +
                                 std::to_string(moment_row.size()) + " moments, order " +
                                 std::to_string(order) + " requested");
    }
    SeriesTrunc s;
    s.order = order;
    s.c.resize(static_cast<size_t>(order));
    for (int k = 0; k < order; ++k) s.c[static_cast<size_t>(k)] = -moment_row[static_cast<size_t>(k)];
    return s;
}

SeriesTrunc series_sum(const SeriesTrunc& a, const SeriesTrunc& b) {
    SeriesTrunc s;
    s.order = std::min(a.order, b.order);
    s.c.resize(static_cast<size_t>(s.order));
    for (int k = 0; k < s.order; ++k) {
        s.c[static_cast<size_t>(k)] = a.c[static_cast<size_t>(k)] + b.c[static_cast<size_t>(k)];
    }
    return s;
}

SeriesTrunc series_negate(SeriesTrunc s) {
    for (auto& v : s.c) v = -v;
    return s;
}

SeriesTrunc series_product(const SeriesTrunc& a, const SeriesTrunc& b) {
    SeriesTrunc s;
    s.order = std::min(a.order, b.order) + 1;
    s.c.assign(static_cast<size_t>(s.order), Rational(0));
    for (int k = 1; k < s.order; ++k) {
        Rational v(0);
        for (int i = 0; i <= k - 1; ++i) {
            if (i < a.order && (k - 1 - i) < b.order) {
                v += a.c[static_cast<size_t>(i)] * b.c[static_cast<size_t>(k - 1 - i)];
            }
        }
        s.c[static_cast<size_t>(k)] = v;
    }
    return s;
}

SeriesTrunc series_reciprocal(const SeriesTrunc& s) {
    if (s.order < 1 || s.c.empty() || s.c[0].is_zero()) {
        throw SeriesDivisionByZero("series_reciprocal: leading coefficient is zero");
    }
    SeriesTrunc t;
    t.order = s.order;
    t.c.resize(static_cast<size_t>(s.order));
    t.c[0] = s.c[0].inverse();
    for (int m = 1; m < s.order; ++m) {
        Rational v(0);
        for (int k = 1; k <= m; ++k) {
            v += s.c[static_cast<size_t>(k)] * t.c[static_cast<size_t>(m - k)];
        }
        t.c[static_cast<size_t>(m)] = -v / s.c[0];
    }
    return t;
}

BracketReport bracket_check(const RecCoeffs& coeffs, BracketKind kind, int depth) {
    const int d = coeffs.d;
    const int H = depth < 0 ? coeffs.horizon() : depth;
    if (H < 0) throw MissingCoefficient("bracket_check: empty descriptor");
    coeffs.require(H);

    BracketReport rep;
    rep.kind = kind;
    auto note = [&rep](bool pass, const std::string& what) {
        ++rep.checks;
        if (!pass && rep.ok) {
            rep.ok = false;
            rep.first_failure = what;
        }
    };

    const PolySeq seq = generate(coeffs, H);
    const auto E = monomial_table(coeffs, H);
    auto br = [&](int r, int m, int n) {
        return table_bracket(E, seq.polys[static_cast<size_t>(n)], r, m);
    };

    switch (kind) {
        case BracketKind::weight_products: {
            for (int r = 0; r < d; ++r) {
                if (H < r) continue;
                const int K = std::min((H - r) / (d + 1), H - r - 1 < 0 ? 0 : (H - r - 1) / d);
                for (int k = 0; k <= K; ++k) {
                    Rational prod(1);
                    for (int nu = 0; nu < k; ++nu) prod *= coeffs.g(nu * d + r + 1, 0);
                    note(br(r, k, d * k + r) == prod,
                         "weight_products r=" + std::to_string(r) + " k=" + std::to_string(k));
                }
            }
            break;
        }
        case BracketKind::weight_products_top: {
            for (int n = 0; n * (d + 1) <= H - d + 1; ++n) {
                if (n >= 1 && n * d > H - d) break;
                Rational prod(1);
                for (int nu = 1; nu <= n; ++nu) prod *= coeffs.g(nu * d, 0);
                note(br(d - 1, n, (n + 1) * d - 1) == prod,
                     "weight_products_top n=" + std::to_string(n));
            }
            break;
        }
        case BracketKind::coefficient_recovery: {
            if (H >= d) {
                for (int nu = 0; nu < d; ++nu) {
                    note(br(nu, 1, nu) == coeffs.b(nu),
                         "coefficient_recovery diag nu=" + std::to_string(nu));
                }
                for (int r = 0; r <= d - 2; ++r) {
                    for (int nu = 1; nu <= d - 1 - r; ++nu) {
                        note(br(nu - 1, 1, d - 1 - r) == coeffs.g(nu, nu + r),
                             "coefficient_recovery head nu=" + std::to_string(nu) +
                                 " r=" + std::to_string(r));
                    }
                }
            }
            for (int n = 0; n <= H - d - 1; ++n) {
                for (int nu = 0; nu < d; ++nu) {
                    note(br(n + nu, 1, n + d) == coeffs.g(n + 1 + nu, nu),
                         "coefficient_recovery band n=" + std::to_string(n) +
                             " nu=" + std::to_string(nu));
                }
            }
            break;
        }
        case BracketKind::shifted_duals: {
            if (H >= 2 * d + 1) {
                for (int nu = 0; nu < d; ++nu) {
                    for (int i = 0; i < d; ++i) {
                        note(br(nu + 1, 1, nu + 2 + i) == coeffs.g(nu + 2, d - 1 - i),
                             "shifted_duals one-step nu=" + std::to_string(nu) +
                                 " i=" + std::to_string(i));
                    }
                }
            }
            for (int r = 1; r * (d + 2) <= H - d + 1; ++r) {
                for (int nu = 0; nu < d; ++nu) {
                    const int row = nu + r;
                    Rational prod(1);
                    for (int j = 0; j < r; ++j) {
                        // One power comes off per step; only the deepest band survives.
                        const Rational step = coeffs.g(j * d + nu + r + 1, 0);
                        note(br(row, j + 1, (j + 1) * d + row) ==
                                 step * br(row, j, j * d + row),
                             "shifted_duals step r=" + std::to_string(r) +
                                 " nu=" + std::to_string(nu) + " j=" + std::to_string(j));
                        prod *= step;
                    }
                    note(br(row, r, r * (d + 1) + nu) == prod,
                         "shifted_duals closed r=" + std::to_string(r) +
                             " nu=" + std::to_string(nu));
                }
            }
            break;
        }
        case BracketKind::power_descent: {
            for (int r = 0; r < d; ++r) {
                if (H < r) continue;
                const int K = (H - r) / (d + 1);
                for (int k = 1; k <= K; ++k) {
                    const int base = d * (k - 1) + r;
                    for (int i = 1; i <= d - 1; ++i) {
                        Rational rhs(0);
                        for (int j = 0; j <= i; ++j) {
                            if (base - j < 0) continue;
                            rhs += coeffs.g(base + 1 - j, i - j) * br(r, k - 1, base - j);
                        }
                        note(br(r, k, d * k + r - i) == rhs,
                             "power_descent shallow r=" + std::to_string(r) +
                                 " k=" + std::to_string(k) + " i=" + std::to_string(i));
                    }
                    {
                        Rational rhs = coeffs.b(base) * br(r, k - 1, base);
                        for (int j = 0; j <= d - 1; ++j) {
                            if (base - 1 - j < 0) continue;
                            rhs += coeffs.g(base - j, d - 1 - j) * br(r, k - 1, base - 1 - j);
                        }
                        note(br(r, k, d * k + r - d) == rhs,
                             "power_descent full r=" + std::to_string(r) +
                                 " k=" + std::to_string(k));
                    }
                    for (int l = d + 1; l <= d * k + r; ++l) {
                        const int m = d * k + r - l;
                        Rational rhs = br(r, k - 1, m + 1) + coeffs.b(m) * br(r, k - 1, m);
                        for (int j = 0; j <= d - 1; ++j) {
                            if (m - 1 - j < 0) continue;
                            rhs += coeffs.g(m - j, d - 1 - j) * br(r, k - 1, m - 1 - j);
                        }
                        note(br(r, k, m) == rhs, "power_descent deep r=" + std::to_string(r) +
                                                     " k=" + std::to_string(k) +
                                                     " m=" + std::to_string(m));
                    }
                }
            }
            break;
        }
    }
    if (rep.checks == 0) {
        throw MissingCoefficient("bracket_check: stored depth " + std::to_string(H) +
                                 " admits no instance of the selected family");
    }
    return rep;
}

bool positive_definite(const RecCoeffs& coeffs) {
    if (coeffs.gamma.empty()) {
        throw MissingCoefficient("positive_definite: descriptor has no bands");
    }
    for (const auto& v : coeffs.gamma[0]) {
        if (v.sign() <= 0) return false;
    }
    return true;
}

SeriesTrunc stieltjes_relations(const RecCoeffs& coeffs, SeriesRelation kind,
                                const SeriesParams& params, int order) {
    if (order < 1) throw BadParameter("stieltjes_relations: order must be positive");
    const int M = order + 2;
    switch (kind) {
        case SeriesRelation::markov: {
            if (params.r < 1) throw BadParameter("stieltjes_relations: shift must be positive");
            if (params.n < 0) throw BadParameter("stieltjes_relations: dual row negative");
            const ZS a = zs_series(moment_row(coeffs, params.r - 1, M - 1), M);
            const ZS b = zs_series(moment_row(associated(coeffs, params.r), params.n, M - 1), M);
            const ZS c = zs_series(moment_row(coeffs, params.n + params.r, M - 1), M);
            return zs_to_proper(zs_add(zs_mul(a, b), c), order);
        }
        case SeriesRelation::codilated: {
            const int d = coeffs.d;
            if (params.nu < 0 || params.nu >= d) {
                throw BadParameter("stieltjes_relations: dual row out of range");
            }
            const RecCoeffs tilde = co_dilated(coeffs, 1, params.lambda);
            const Rational lbar = Rational(1) - params.lambda;
            const ZS su_t = zs_series(moment_row(tilde, params.nu, M - 1), M);
            const ZS su_nu = zs_series(moment_row(coeffs, params.nu, M - 1), M);
            const ZS su_0 = zs_series(moment_row(coeffs, 0, M - 1), M);
            const Poly p1{-coeffs.b(0), Rational(1)};
            ZS den = zs_poly(Poly(params.lambda));
            den = zs_sub(den, zs_scale(zs_mul(zs_poly(p1), su_0), lbar));
            for (int t = 0; t <= d - 2; ++t) {
                const ZS term = zs_series(moment_row(coeffs, t + 1, M - 1), M);
                den = zs_add(den, zs_scale(term, lbar * coeffs.g(1, d - 1 - t)));
            }
            return zs_to_proper(zs_sub(zs_mul(su_t, den), su_nu), order);
        }
    }
    throw BadSelector("stieltjes_relations: unknown relation");
}

QuasiOrder quasi_detect(const PolySeq& P, const PolySeq& Q, int d) {
    if (d < 1) throw BadParameter("quasi_detect: d must be positive");
    P.validate();
    Q.validate();
    const int H = std::min(P.max_degree(), Q.max_degree());
    if (H < 1) {
        throw BadParameter("quasi_detect: need at least two stored members on both sides");
    }
    PolySeq basis;
    basis.polys.assign(Q.polys.begin(), Q.polys.begin() + H + 1);
    std::vector<std::vector<Rational>> e(static_cast<size_t>(H) + 1);
    for (int n = 0; n <= H; ++n) {
        e[static_cast<size_t>(n)] = expand_in_basis(P.polys[static_cast<size_t>(n)], basis);
    }
    auto entry = [&e](int n, int j) -> Rational {
        const auto& row = e[static_cast<size_t>(n)];
        if (j < 0 || j >= static_cast<int>(row.size())) return Rational(0);
        return row[static_cast<size_t>(j)];
    };

    // A window as wide as the whole stored range certifies nothing, so
    // the scan stops where at least one member is genuinely constrained.
    for (int l = 0; l * d <= H - 1; ++l) {
        const int w = l * d;
        bool support = true;
        for (int n = w; n <= H && support; ++n) {
            for (int j = 0; j < n - w; ++j) {
                if (!entry(n, j).is_zero()) {
                    support = false;
                    break;
                }
            }
        }
        if (!support) continue;
        if (l > 0) {
            bool sharp = false;
            for (int n = w; n <= H; ++n) {
                if (!entry(n, n - w).is_zero()) {
                    sharp = true;
                    break;
                }
            }
            // A wider window cannot become sharp once this one holds:
            // everything below depth w is already zero.
            if (!sharp) {
                throw NotQuasi("quasi_detect: connection window is narrower than " +
                               std::to_string(w) + " and not an exact multiple of d");
            }
        }
        QuasiOrder out;
        out.l = l;
        out.a.resize(static_cast<size_t>(H) + 1);
        for (int n = w; n <= H; ++n) {
            auto& row = out.a[static_cast<size_t>(n)];
            row.reserve(static_cast<size_t>(w));
            for (int i = 1; i <= w; ++i) row.push_back(entry(n, n - i));
        }
        return out;
    }
    throw NotQuasi("quasi_detect: no connection window of width below " + std::to_string(H) +
                   " fits every stored member");
}

std::vector<std::vector<Rational>> quasi_window(const PolySeq& P, const PolySeq& Q,
                                                const Poly& pi) {
    P.validate();
    Q.validate();
    const int l = pi.degree();
    if (l < 0) throw BadParameter("quasi_window: pi must be nonzero");
    const int top = std::min(Q.max_degree(), P.max_degree() - l);
    if (top < 0) {
        throw BadParameter("quasi_window: stored members too shallow for deg pi = " +
                           std::to_string(l));
    }
    std::vector<std::vector<Rational>> out;
    out.reserve(static_cast<size_t>(top) + 1);
    for (int n = 0; n <= top; ++n) {
        const auto e = expand_in_basis(pi * Q.polys[static_cast<size_t>(n)], P);
        for (int j = 0; j < n && j < static_cast<int>(e.size()); ++j) {
            if (!e[static_cast<size_t>(j)].is_zero()) {
                throw NotQuasi("quasi_window: member " + std::to_string(n) +
                               " leaks to depth " + std::to_string(j));
            }
        }
        std::vector<Rational> row;
        row.reserve(static_cast<size_t>(l) + 1);
        for (int j = n + l; j >= n; --j) {
            row.push_back(j < static_cast<int>(e.size()) ? e[static_cast<size_t>(j)]
                                                         : Rational(0));
        }
        out.push_back(std::move(row));
    }
    return out;
}

ReducedComb quasi_reduce(const RecCoeffs& coeffs, const std::vector<Rational>& a, int n, int r) {
    const int d = coeffs.d;
    if (r <= d) throw BadParameter("quasi_reduce: depth r must exceed d");
    if (static_cast<int>(a.size()) != r) {
        throw BadParameter("quasi_reduce: expected exactly r connection entries");
    }
    if (n < r + d - 1) {
        throw BadParameter("quasi_reduce: member index must be at least r+d-1");
    }
    const PolySeq seq = generate(coeffs, n);
    const Poly x = Poly::x();

    std::vector<Poly> U(static_cast<size_t>(r));
    U[0] = Poly::one();
    for (int j = 1; j <= r - 1; ++j) {
        Poly u = Poly(a[static_cast<size_t>(j - 1)]) +
                 (x - Poly(coeffs.b(n - j))) * U[static_cast<size_t>(j - 1)];
        for (int nu = 0; nu <= d - 1; ++nu) {
            if (j - 2 - nu < 0) break;
            u -= coeffs.g(n - j + 1, d - 1 - nu) * U[static_cast<size_t>(j - 2 - nu)];
        }
        U[static_cast<size_t>(j)] = u;
    }

    Poly rhs = U[static_cast<size_t>(r - 1)] * seq.polys[static_cast<size_t>(n - r + 1)];
    {
        Poly c = Poly(a[static_cast<size_t>(r - 1)]);
        for (int t = 0; t <= d - 1 && t <= r - 2; ++t) {
            c -= coeffs.g(n - r + 1, d - 1 - t) * U[static_cast<size_t>(r - 2 - t)];
        }
        rhs += c * seq.polys[static_cast<size_t>(n - r)];
    }
    for (int i = 2; i <= d; ++i) {
        Poly c;
        for (int t = 0; t <= d - i && t <= r - 2; ++t) {
            c += coeffs.g(n - r - i + 2, d - i - t) * U[static_cast<size_t>(r - 2 - t)];
        }
        rhs -= c * seq.polys[static_cast<size_t>(n - r + 1 - i)];
    }

    Poly qn = seq.polys[static_cast<size_t>(n)];
    for (int i = 1; i <= r; ++i) {
        qn += a[static_cast<size_t>(i - 1)] * seq.polys[static_cast<size_t>(n - i)];
    }
    ReducedComb out;
    out.U = std::move(U);
    out.residual = qn - rhs;
    return out;
}

UvarovResult uvarov(const RecCoeffs& coeffs, const Rational& c, const Rational& lambda, int N) {
    if (N < 1) throw BadParameter("uvarov: need at least one transformed member");
    const int d = coeffs.d;
    const PolySeq seq = generate(coeffs, N);

    UvarovResult out;
    out.L.reserve(static_cast<size_t>(N));
    out.Q.polys.reserve(static_cast<size_t>(N) + 1);
    out.Q.polys.push_back(seq.polys[0]);

    std::vector<Rational> den(static_cast<size_t>(d), Rational(1));
    Poly acc;
    Rational acc_at_c(0);
    for (int m = 0; m < N; ++m) {
        const int r = m % d;
        const int block = m / d;
        if (block >= 1) den[static_cast<size_t>(r)] *= coeffs.g(d * (block - 1) + r + 1, 0);
        const Rational w =
            seq.polys[static_cast<size_t>(block)].eval(c) / den[static_cast<size_t>(r)];
        acc += w * seq.polys[static_cast<size_t>(m)];
        acc_at_c += w * seq.polys[static_cast<size_t>(m)].eval(c);
        out.L.push_back(acc);

        const Rational t = Rational(1) + lambda * acc_at_c;
        if (t.is_zero()) {
            throw DenominatorVanishes("uvarov: 1 + lambda*L_" + std::to_string(m) +
                                      "(c;c) vanishes (lambda=" + rstr(lambda) +
                                      ", c=" + rstr(c) + ")");
        }
        const Rational f = lambda * seq.polys[static_cast<size_t>(m + 1)].eval(c) / t;
        out.Q.polys.push_back(seq.polys[static_cast<size_t>(m + 1)] - f * acc);
    }
    return out;
}

}  // namespace dops
