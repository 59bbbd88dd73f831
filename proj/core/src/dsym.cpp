#include "dops/dsym.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dops/darboux.hpp"
#include "dops/errors.hpp"
#include "dops/forms.hpp"
#include "dops/ops.hpp"

namespace dops {

namespace {

// Enumerates k-tuples lo <= i_1 <= ... <= i_k <= hi (strictly
// increasing when strict) and feeds each to fn; k = 0 yields exactly
// the empty tuple.
template <typename Fn>
void for_each_tuple(int k, int lo, int hi, bool strict, Fn&& fn) {
    std::vector<int> idx(static_cast<size_t>(std::max(k, 0)));
    if (k > 0) {
        idx[0] = lo;
        for (int t = 1; t < k; ++t) {
            idx[static_cast<size_t>(t)] = idx[static_cast<size_t>(t - 1)] + (strict ? 1 : 0);
        }
        if (idx[static_cast<size_t>(k - 1)] > hi) return;
    }
    while (true) {
        fn(static_cast<const std::vector<int>&>(idx));
        int t = k - 1;
        while (t >= 0 && idx[static_cast<size_t>(t)] >= (strict ? hi - (k - 1 - t) : hi)) --t;
        if (t < 0) break;
        ++idx[static_cast<size_t>(t)];
        for (int u = t + 1; u < k; ++u) {
            idx[static_cast<size_t>(u)] = idx[static_cast<size_t>(u - 1)] + (strict ? 1 : 0);
        }
    }
}

// The k-fold band sum of component `comp` at step n: nondecreasing
// tuples over 1..d-k+2 weight products of multipliers whose subscripts
// march down one block per factor. Factors with nonpositive subscripts
// zero the product, which is how the sum shortens itself near the
// bottom of the family.
Rational band_sum(const SymData& s, int k, int n, int comp) {
    const int d = s.d;
    Rational acc(0);
    for_each_tuple(k, 1, d - k + 2, /*strict=*/false, [&](const std::vector<int>& idx) {
        Rational term(1);
        for (int v = 1; v <= k; ++v) {
            term *= s.rho_at((n - v) * (d + 1) + idx[static_cast<size_t>(v - 1)] + v + comp);
            if (term.is_zero()) break;
        }
        acc += term;
    });
    return acc;
}

// Members P'_{n+1}/(n+1) of the given family; one member shorter.
PolySeq derivative_family(const PolySeq& seq) {
    PolySeq out;
    if (seq.polys.empty()) return out;
    out.polys.reserve(seq.polys.size() - 1);
    for (size_t n = 0; n + 1 < seq.polys.size(); ++n) {
        Poly p = seq.polys[n + 1].derivative();
        p /= Rational(static_cast<int>(n) + 1);
        out.polys.push_back(std::move(p));
    }
    return out;
}

Rational coef_or_zero(const std::vector<Rational>& v, int j) {
    if (j < 0 || j >= static_cast<int>(v.size())) return Rational(0);
    return v[static_cast<size_t>(j)];
}

// Exact residual test of the member-level combination that ties a
// family to its normalized derivative family: every P_n must equal A_n
// plus a d+1 term tail in A with weights built from both coefficient
// tables. The range is clamped to what both tables store.
bool combination_holds(const RecCoeffs& cp, const PolySeq& P, const RecCoeffs& ca,
                       const PolySeq& A) {
    const int d = cp.d;
    int n_max = std::min(static_cast<int>(P.size()) - 1, static_cast<int>(A.size()) - 1);
    n_max = std::min(n_max, static_cast<int>(cp.beta.size()) - 1);
    n_max = std::min(n_max, static_cast<int>(ca.beta.size()));
    for (int nu = 1; nu <= d; ++nu) {
        n_max = std::min(n_max, static_cast<int>(cp.gamma[static_cast<size_t>(d - nu)].size()) +
                                    nu - 1);
        n_max =
            std::min(n_max, static_cast<int>(ca.gamma[static_cast<size_t>(d - nu)].size()) + nu);
    }
    for (int n = 0; n <= n_max; ++n) {
        Poly res = P[n] - A[n];
        if (n >= 1) res -= Rational(n) * (cp.b(n) - ca.b(n - 1)) * A[n - 1];
        for (int nu = 1; nu <= d && n - 1 - nu >= 0; ++nu) {
            const Rational w = Rational(n - nu) * cp.g(n + 1 - nu, d - nu) -
                               Rational(n) * ca.g(n - nu, d - nu);
            res -= w * A[n - 1 - nu];
        }
        if (!res.is_zero()) return false;
    }
    return true;
}

// Nullspace search for the degree <= 2 multiplier: collect the
// must-vanish expansion coefficients of x^2 P'_n, x P'_n, P'_n over the
// family, reduce to row echelon form in three columns, and read off a
// nonzero solution when one column stays pivot-free.
StructureFit structure_fit(const PolySeq& base) {
    StructureFit fit;
    const int L = static_cast<int>(base.size());
    if (L < 4) return fit;
    const int n_hi = L - 2;

    std::array<std::array<Rational, 3>, 3> tri{};
    std::array<bool, 3> have{};
    for (int n = 2; n <= n_hi; ++n) {
        const Poly dp = base[n].derivative();
        const std::array<std::vector<Rational>, 3> cols = {
            expand_in_basis(dp.shift_up(2), base),
            expand_in_basis(dp.shift_up(1), base),
            expand_in_basis(dp, base),
        };
        for (int j = 0; j <= n - 2; ++j) {
            std::array<Rational, 3> row = {coef_or_zero(cols[0], j), coef_or_zero(cols[1], j),
                                           coef_or_zero(cols[2], j)};
            for (int c = 0; c < 3; ++c) {
                if (row[static_cast<size_t>(c)].is_zero()) continue;
                if (have[static_cast<size_t>(c)]) {
                    const Rational f =
                        row[static_cast<size_t>(c)] / tri[static_cast<size_t>(c)][static_cast<size_t>(c)];
                    for (int e = c; e < 3; ++e) {
                        row[static_cast<size_t>(e)] -=
                            f * tri[static_cast<size_t>(c)][static_cast<size_t>(e)];
                    }
                } else {
                    tri[static_cast<size_t>(c)] = row;
                    have[static_cast<size_t>(c)] = true;
                    break;
                }
            }
        }
    }
    if (have[0] && have[1] && have[2]) return fit;

    const int free_c = !have[0] ? 0 : (!have[1] ? 1 : 2);
    std::array<Rational, 3> sol{};
    sol[static_cast<size_t>(free_c)] = Rational(1);
    for (int c = 2; c >= 0; --c) {
        if (c == free_c || !have[static_cast<size_t>(c)]) continue;
        Rational acc(0);
        for (int e = c + 1; e < 3; ++e) {
            acc += tri[static_cast<size_t>(c)][static_cast<size_t>(e)] * sol[static_cast<size_t>(e)];
        }
        sol[static_cast<size_t>(c)] = -acc / tri[static_cast<size_t>(c)][static_cast<size_t>(c)];
    }

    const Rational scale = !sol[0].is_zero() ? sol[0] : (!sol[1].is_zero() ? sol[1] : sol[2]);
    for (auto& v : sol) v = v / scale;
    fit.found = true;
    fit.pi = Poly(std::vector<Rational>{sol[2], sol[1], sol[0]});

    fit.strict = true;
    for (int n = 1; n <= n_hi; ++n) {
        const auto e = expand_in_basis(fit.pi * base[n].derivative(), base);
        if (coef_or_zero(e, n - 1).is_zero()) {
            fit.strict = false;
            break;
        }
    }
    return fit;
}

HahnReport hahn_ladder(const RecCoeffs& base_coeffs, const PolySeq& base, int max_order) {
    const int d = base_coeffs.d;
    HahnReport rep;
    rep.hahn = true;
    PolySeq prev = base;
    RecCoeffs prev_coeffs = base_coeffs;
    for (int j = 1; j <= max_order; ++j) {
        if (static_cast<int>(prev.size()) < d + 4) {
            throw Error("hahn_check: too few stored members to reach order " + std::to_string(j));
        }
        PolySeq cur = derivative_family(prev);
        HahnOrder row;
        row.order = j;
        auto fitted = extract_recurrence(cur, d);
        if (std::holds_alternative<RecCoeffs>(fitted)) {
            row.banded = true;
            row.coeffs = std::get<RecCoeffs>(fitted);
            row.combination_ok = combination_holds(prev_coeffs, prev, row.coeffs, cur);
        }
        rep.hahn = rep.hahn && row.banded && row.combination_ok;
        rep.orders.push_back(row);
        if (!row.banded) break;
        prev = std::move(cur);
        prev_coeffs = rep.orders.back().coeffs;
    }
    rep.structure = structure_fit(base);
    return rep;
}

}  // namespace

Rational SymData::rho_at(int m) const {
    if (m <= 0) return Rational(0);
    if (m > static_cast<int>(rho.size())) {
        throw MissingRho("symmetric family: multiplier " + std::to_string(m) + " beyond the " +
                         std::to_string(rho.size()) + " stored");
    }
    return rho[static_cast<size_t>(m - 1)];
}

void SymData::require(int m) const {
    if (m > static_cast<int>(rho.size())) {
        throw MissingRho("symmetric family: multiplier " + std::to_string(m) + " beyond the " +
                         std::to_string(rho.size()) + " stored");
    }
    for (int j = 1; j <= m; ++j) {
        if (rho[static_cast<size_t>(j - 1)].is_zero()) {
            throw RegularityViolation("symmetric family: multiplier " + std::to_string(j) +
                                      " is zero");
        }
    }
}

PolySeq dsym_generate(const SymData& s, int n) {
    const int d = s.d;
    if (d < 1) throw Error("dsym_generate: d must be >= 1");
    if (n < 0) throw Error("dsym_generate: n must be >= 0");
    if (n > d) s.require(n - d);

    PolySeq seq;
    seq.polys.reserve(static_cast<size_t>(n) + 1);
    for (int m = 0; m <= std::min(n, d); ++m) seq.polys.push_back(Poly::one().shift_up(m));
    const Poly x = Poly::x();
    for (int m = d; m < n; ++m) {
        seq.polys.push_back(x * seq[m] - s.rho_at(m - d + 1) * seq[m - d]);
    }

    for (size_t m = 0; m < seq.polys.size(); ++m) {
        const Poly& p = seq.polys[m];
        const int cls = static_cast<int>(m) % (d + 1);
        for (int e = 0; e <= p.degree(); ++e) {
            if (!p.coeff(e).is_zero() && e % (d + 1) != cls) {
                throw NotDSymmetric("dsym_generate: member " + std::to_string(m) +
                                    " carries exponent " + std::to_string(e) +
                                    " off residue class " + std::to_string(cls));
            }
        }
    }
    return seq;
}

RecCoeffs dsym_to_reccoeffs(const SymData& s, int terms) {
    if (terms < 0) throw Error("dsym_to_reccoeffs: terms must be >= 0");
    s.require(terms);
    RecCoeffs c;
    c.d = s.d;
    c.beta.assign(static_cast<size_t>(terms), Rational(0));
    c.gamma.assign(static_cast<size_t>(s.d),
                   std::vector<Rational>(static_cast<size_t>(terms), Rational(0)));
    for (int m = 1; m <= terms; ++m) c.gamma[0][static_cast<size_t>(m - 1)] = s.rho_at(m);
    return c;
}

std::vector<PolySeq> decompose(const PolySeq& seq, int d) {
    if (d < 1) throw Error("decompose: d must be >= 1");
    seq.validate();
    std::vector<PolySeq> comps(static_cast<size_t>(d) + 1);
    for (size_t m = 0; m < seq.polys.size(); ++m) {
        const Poly& p = seq.polys[m];
        const int cls = static_cast<int>(m) % (d + 1);
        const int n = static_cast<int>(m) / (d + 1);
        std::vector<Rational> c(static_cast<size_t>(n) + 1, Rational(0));
        for (int e = 0; e <= p.degree(); ++e) {
            const Rational ce = p.coeff(e);
            if (ce.is_zero()) continue;
            if (e % (d + 1) != cls) {
                throw NotDSymmetric("decompose: member " + std::to_string(m) +
                                    " carries exponent " + std::to_string(e) +
                                    " off residue class " + std::to_string(cls));
            }
            c[static_cast<size_t>((e - cls) / (d + 1))] = ce;
        }
        comps[static_cast<size_t>(cls)].polys.push_back(Poly(std::move(c)));
    }
    return comps;
}

PolySeq recompose(const std::vector<PolySeq>& comps, int d) {
    if (static_cast<int>(comps.size()) != d + 1) {
        throw Error("recompose: expected " + std::to_string(d + 1) + " components, got " +
                    std::to_string(comps.size()));
    }
    PolySeq out;
    for (int m = 0;; ++m) {
        const int cls = m % (d + 1);
        const int n = m / (d + 1);
        if (n >= static_cast<int>(comps[static_cast<size_t>(cls)].polys.size())) break;
        out.polys.push_back(
            comps[static_cast<size_t>(cls)][n].compose_power(d + 1).shift_up(cls));
    }
    return out;
}

RecCoeffs component_coeffs(const SymData& s, int i, int terms) {
    const int d = s.d;
    if (i < 0 || i > d) {
        throw IndexOutOfRange("component_coeffs: component " + std::to_string(i) +
                              " outside 0.." + std::to_string(d));
    }
    if (terms < 1) throw Error("component_coeffs: terms must be >= 1");

    RecCoeffs direct;
    direct.d = d;
    direct.beta.resize(static_cast<size_t>(terms));
    direct.gamma.assign(static_cast<size_t>(d),
                        std::vector<Rational>(static_cast<size_t>(terms)));
    for (int n = 0; n < terms; ++n) direct.beta[static_cast<size_t>(n)] = band_sum(s, 1, n, i);
    for (int sigma = 0; sigma < d; ++sigma) {
        for (int m = 1; m <= terms; ++m) {
            direct.gamma[static_cast<size_t>(sigma)][static_cast<size_t>(m - 1)] =
                band_sum(s, d + 1 - sigma, m + d - 1 - sigma, i);
        }
    }

    // The deepest band telescopes into a bare product; both the sum and
    // the product routes must produce it.
    for (int m = 1; m <= terms; ++m) {
        Rational prod(1);
        for (int v = m; v <= d + m; ++v) prod *= s.rho_at((v - 1) * d + m + i);
        if (!(prod == direct.gamma[0][static_cast<size_t>(m - 1)])) {
            throw Error("component_coeffs: deepest band of component " + std::to_string(i) +
                        " disagrees with its closed product at subscript " + std::to_string(m));
        }
    }

    // Second route: slice the generated family and fit a recurrence to
    // the component members; the tables must agree on every shared
    // entry.
    const int members = std::max(terms + d + 1, d + 3);
    const int big = (d + 1) * (members - 1) + i;
    const std::vector<PolySeq> comps = decompose(dsym_generate(s, big), d);
    const auto fitted = extract_recurrence(comps[static_cast<size_t>(i)], d);
    if (!std::holds_alternative<RecCoeffs>(fitted)) {
        throw Error("component_coeffs: the fit route found no banded recurrence for component " +
                    std::to_string(i));
    }
    if (!direct.agrees_with(std::get<RecCoeffs>(fitted))) {
        throw Error("component_coeffs: the band-sum route and the fit route disagree for "
                    "component " +
                    std::to_string(i));
    }
    return direct;
}

Poly verify_links(const SymData& s, LinkKind which, const LinkParams& p) {
    const int d = s.d;
    const Poly x = Poly::x();
    const auto comps_to = [&](int big) { return decompose(dsym_generate(s, big), d); };

    switch (which) {
        case LinkKind::adjacent: {
            if (p.n < 0 || p.i < 0 || p.i >= d) {
                throw IndexOutOfRange("adjacent link: need n >= 0 and 0 <= i < d");
            }
            const auto comps = comps_to((d + 1) * (p.n + 1) + p.i + 1);
            return comps[static_cast<size_t>(p.i)][p.n + 1] -
                   comps[static_cast<size_t>(p.i + 1)][p.n + 1] -
                   s.rho_at((d + 1) * p.n + p.i + 2) * comps[static_cast<size_t>(p.i + 1)][p.n];
        }
        case LinkKind::distant: {
            if (p.n < 0 || p.i < 0 || p.k < 0 || p.i + p.k > d) {
                throw IndexOutOfRange("distant link: need n >= 0, i, k >= 0, i + k <= d");
            }
            const auto comps = comps_to((d + 1) * (p.n + 1) + p.i + p.k);
            Poly res = comps[static_cast<size_t>(p.i)][p.n + 1] -
                       comps[static_cast<size_t>(p.i + p.k)][p.n + 1];
            for (int t = 1; t <= p.k; ++t) {
                if (p.n + 1 - t < 0) break;
                Rational coef(0);
                for_each_tuple(t, 2, p.k + 1, /*strict=*/true, [&](const std::vector<int>& idx) {
                    Rational term(1);
                    for (int m = 1; m <= t; ++m) {
                        term *= s.rho_at((d + 1) * (p.n - m + 1) + p.i +
                                         idx[static_cast<size_t>(m - 1)]);
                    }
                    coef += term;
                });
                res -= coef * comps[static_cast<size_t>(p.i + p.k)][p.n + 1 - t];
            }
            return res;
        }
        case LinkKind::wrap: {
            if (p.n < 0 || p.i < 0 || p.i > d) {
                throw IndexOutOfRange("wrap link: need n >= 0 and 0 <= i <= d");
            }
            const auto comps = comps_to((d + 1) * (p.n + 1) + p.i);
            Poly res = x * comps[static_cast<size_t>(d)][p.n] -
                       comps[static_cast<size_t>(p.i)][p.n + 1];
            for (int t = 0; t <= p.i; ++t) {
                if (p.n - t < 0) break;
                Rational coef(0);
                for_each_tuple(t + 1, 1, p.i + 1, /*strict=*/true,
                               [&](const std::vector<int>& idx) {
                                   Rational term(1);
                                   for (int m = 0; m <= t; ++m) {
                                       term *= s.rho_at((d + 1) * (p.n - m) +
                                                        idx[static_cast<size_t>(m)]);
                                   }
                                   coef += term;
                               });
                res -= coef * comps[static_cast<size_t>(p.i)][p.n - t];
            }
            return res;
        }
        case LinkKind::power: {
            if (p.n < 0 || p.r < 0) throw IndexOutOfRange("power link: need n, r >= 0");
            const PolySeq fam = dsym_generate(s, p.n + p.r);
            Poly res = fam[p.n].shift_up(p.r) - fam[p.n + p.r];
            for (int k = 1; k <= p.r; ++k) {
                const int member = p.n + p.r - k * (d + 1);
                if (member < 0) break;
                Rational coef(0);
                for_each_tuple(k, 1, p.r - k + 1, /*strict=*/false,
                               [&](const std::vector<int>& idx) {
                                   Rational term(1);
                                   for (int v = 1; v <= k; ++v) {
                                       term *= s.rho_at(p.n + idx[static_cast<size_t>(v - 1)] -
                                                        v * d);
                                       if (term.is_zero()) break;
                                   }
                                   coef += term;
                               });
                res -= coef * fam[member];
            }
            return res;
        }
        case LinkKind::kernel_wrap: {
            if (p.n < 0) throw IndexOutOfRange("kernel_wrap link: need n >= 0");
            const auto comps = comps_to((d + 1) * (p.n + 1));
            return x * comps[static_cast<size_t>(d)][p.n] - comps[0][p.n + 1] -
                   s.rho_at((d + 1) * p.n + 1) * comps[0][p.n];
        }
        case LinkKind::pivot_match: {
            if (p.n < 0) throw IndexOutOfRange("pivot_match link: need n >= 0");
            const RecCoeffs c0 = component_coeffs(s, 0, p.n + 1);
            const Factors f = lu(c0, p.n + 1);
            return Poly(s.rho_at((d + 1) * p.n + 1) - f.upper.diag[static_cast<size_t>(p.n)]);
        }
    }
    throw BadSelector("verify_links: unhandled selector");
}

HahnReport hahn_check(const RecCoeffs& coeffs, int max_order) {
    if (max_order < 0) throw Error("hahn_check: max_order must be >= 0");
    const int N = coeffs.horizon();
    return hahn_ladder(coeffs, generate(coeffs, N), max_order);
}

HahnReport hahn_check(const SymData& s, int max_order) {
    if (max_order < 0) throw Error("hahn_check: max_order must be >= 0");
    const int R = static_cast<int>(s.rho.size());
    s.require(R);
    return hahn_ladder(dsym_to_reccoeffs(s, R), dsym_generate(s, s.d + R), max_order);
}

PearsonReport pearson_dsym_check(const SymData& s, int N) {
    const int d = s.d;
    if (N < 0) throw Error("pearson_dsym_check: N must be >= 0");
    PearsonReport rep;
    const int R = static_cast<int>(s.rho.size());
    if (R < N + 2) {
        throw MissingRho("pearson_dsym_check: depth " + std::to_string(N) +
                         " needs multipliers through " + std::to_string(N + 2));
    }
    s.require(R);

    const RecCoeffs base = dsym_to_reccoeffs(s, R);
    const PolySeq family = dsym_generate(s, d + R);
    const PolySeq deriv = derivative_family(family);
    const auto fitted = extract_recurrence(deriv, d);
    if (!std::holds_alternative<RecCoeffs>(fitted)) return rep;
    rep.derivative_banded = true;
    const RecCoeffs& dcoeffs = std::get<RecCoeffs>(fitted);

    std::vector<std::vector<Rational>> w(static_cast<size_t>(d)), wt(static_cast<size_t>(d));
    for (int r = 0; r < d; ++r) {
        w[static_cast<size_t>(r)] = moment_row(base, r, N + 2);
        wt[static_cast<size_t>(r)] = moment_row(dcoeffs, r, N);
    }

    rep.consistent = true;
    for (int r = 0; r < d; ++r) {
        PearsonLine line;
        line.r = r;
        const bool last = (r == d - 1);
        const auto bw = [&](int k) {
            return last ? w[static_cast<size_t>(d - 1)][static_cast<size_t>(k)]
                        : w[static_cast<size_t>(r)][static_cast<size_t>(k)];
        };
        const auto aw = [&](int k) {
            return last ? w[0][static_cast<size_t>(k + 2)]
                        : w[static_cast<size_t>(r + 1)][static_cast<size_t>(k + 1)];
        };
        const auto rhs = [&](int k) { return wt[static_cast<size_t>(r)][static_cast<size_t>(k)]; };

        int k1 = -1, k2 = -1;
        Rational det;
        for (int ka = 0; ka <= N && k1 < 0; ++ka) {
            for (int kb = ka + 1; kb <= N; ++kb) {
                det = bw(ka) * aw(kb) - bw(kb) * aw(ka);
                if (!det.is_zero()) {
                    k1 = ka;
                    k2 = kb;
                    break;
                }
            }
        }
        if (k1 < 0) {
            line.note = "no independent pair of moment equations";
            rep.consistent = false;
            rep.lines.push_back(line);
            continue;
        }
        line.b = (rhs(k1) * aw(k2) - rhs(k2) * aw(k1)) / det;
        line.a = (bw(k1) * rhs(k2) - bw(k2) * rhs(k1)) / det;
        line.consistent = true;
        for (int k = 0; k <= N; ++k) {
            if (!(rhs(k) == line.b * bw(k) + line.a * aw(k))) {
                line.consistent = false;
                line.note = "moment equation at power " + std::to_string(k) + " fails";
                break;
            }
        }
        line.normalized = (line.a + line.b == Rational(1));
        rep.consistent = rep.consistent && line.consistent && line.normalized;
        rep.lines.push_back(line);
    }
    return rep;
}

}  // namespace dops
