#include "dops/darboux.hpp"

#include <algorithm>
#include <utility>

#include "dops/errors.hpp"
#include "dops/ops.hpp"

namespace dops {

namespace {

using Mat = std::vector<std::vector<Rational>>;

Mat zeros(int rows, int cols) {
    return Mat(static_cast<size_t>(rows), std::vector<Rational>(static_cast<size_t>(cols)));
}

std::string t_name(int row, int col1) {
    return "t_{" + std::to_string(row) + "," + std::to_string(col1) + "}";
}

std::string l_name(int sub1, int level) {
    return "l_{" + std::to_string(sub1) + "}^" + std::to_string(level);
}

}  // namespace

Rational LowerBands::at(int row, int col) const {
    if (row < 0 || col < 0) return Rational(0);
    if (row == col) return Rational(1);
    const int off = row - col;
    if (off < 1 || off > d) return Rational(0);
    if (row > row_count()) {
        throw MissingCoefficient("LowerBands: row " + std::to_string(row) + " not stored");
    }
    const auto& r = entries[static_cast<size_t>(row - 1)];
    if (off > static_cast<int>(r.size())) return Rational(0);
    return r[static_cast<size_t>(off - 1)];
}

Rational UpperBands::at(int row, int col) const {
    if (row < 0 || col < 0) return Rational(0);
    if (col == row + 1) return Rational(1);
    if (col != row) return Rational(0);
    if (row >= row_count()) {
        throw MissingCoefficient("UpperBands: row " + std::to_string(row) + " not stored");
    }
    return diag[static_cast<size_t>(row)];
}

Factors lu(const RecCoeffs& coeffs, int n) {
    if (n < 1) throw BadParameter("lu: need at least one pivot");
    coeffs.require(n);
    const int d = coeffs.d;

    std::vector<Rational> m(static_cast<size_t>(n));
    // col[o-1] carries the entry o below the diagonal of the current
    // column; the recursion walks column by column.
    std::vector<Rational> col(static_cast<size_t>(d)), prev(static_cast<size_t>(d));
    LowerBands L;
    L.d = d;
    L.entries.assign(static_cast<size_t>(n), {});
    for (int a = 1; a <= n; ++a) {
        L.entries[static_cast<size_t>(a - 1)].assign(static_cast<size_t>(std::min(a, d)),
                                                     Rational(0));
    }

    for (int c = 0; c < n; ++c) {
        if (c == 0) {
            m[0] = coeffs.b(0);
        } else {
            // prev[0] is the first-subdiagonal entry of column c-1.
            m[static_cast<size_t>(c)] = coeffs.b(c) - prev[0];
        }
        if (m[static_cast<size_t>(c)].is_zero()) {
            throw ZeroAtOrigin("lu: pivot " + std::to_string(c + 1) +
                               " vanishes, member " + std::to_string(c + 1) +
                               " of the family is zero at the origin");
        }
        for (int o = 1; o <= d; ++o) {
            Rational num = coeffs.g(c + 1, d - o);
            if (c > 0 && o < d) num -= prev[static_cast<size_t>(o)];
            col[static_cast<size_t>(o - 1)] = num / m[static_cast<size_t>(c)];
            const int row = c + o;
            if (row <= n) {
                L.entries[static_cast<size_t>(row - 1)][static_cast<size_t>(o - 1)] =
                    col[static_cast<size_t>(o - 1)];
            }
        }
        // prev[o] is read as the entry o+1 below the diagonal next turn,
        // one column to the left: same row, previous column.
        prev = col;
    }

    return Factors{std::move(L), UpperBands{std::move(m)}};
}

Factors ul(const RecCoeffs& coeffs, int n, std::vector<Rational> free_m) {
    if (n < 1) throw BadParameter("ul: need at least one pivot");
    coeffs.require(0);
    const int d = coeffs.d;
    if (free_m.empty()) {
        Factors shifted = lu(associated(coeffs, d), d);
        free_m = shifted.upper.diag;
    }
    if (static_cast<int>(free_m.size()) != d) {
        throw BadParameter("ul: expected " + std::to_string(d) + " free pivots, got " +
                           std::to_string(free_m.size()));
    }

    std::vector<Rational> m(static_cast<size_t>(n));
    LowerBands L;
    L.d = d;
    L.entries.assign(static_cast<size_t>(n), {});
    for (int a = 1; a <= n; ++a) {
        L.entries[static_cast<size_t>(a - 1)].assign(static_cast<size_t>(std::min(a, d)),
                                                     Rational(0));
    }
    auto row_entry = [&L](int row, int col) -> Rational& {
        return L.entries[static_cast<size_t>(row - 1)][static_cast<size_t>(row - col - 1)];
    };

    // Free rows: row a pairs with the free pivot of the same index.
    for (int a = 1; a <= std::min(n, d); ++a) {
        m[static_cast<size_t>(a - 1)] = free_m[static_cast<size_t>(a - 1)];
        row_entry(a, a - 1) = coeffs.b(a - 1) - m[static_cast<size_t>(a - 1)];
        for (int b = 1; b <= a - 1; ++b) {
            row_entry(a, b - 1) =
                coeffs.g(b, d - a + b) - m[static_cast<size_t>(a - 1)] * L.at(a - 1, b - 1);
        }
    }
    // Forced rows: the deepest band entry of the previous row is the
    // pivot divisor.
    for (int a = d + 1; a <= n; ++a) {
        const int k = a - d;
        const Rational pivot = L.at(a - 1, k - 1);
        if (pivot.is_zero()) {
            throw Breakdown("ul: band entry at (" + std::to_string(a - 1) + "," +
                            std::to_string(k - 1) + ") is zero, pivot " + std::to_string(a) +
                            " undefined");
        }
        m[static_cast<size_t>(a - 1)] = coeffs.g(k, 0) / pivot;
        for (int b = k + 1; b <= a - 1; ++b) {
            row_entry(a, b - 1) =
                coeffs.g(b, b - k) - m[static_cast<size_t>(a - 1)] * L.at(a - 1, b - 1);
        }
        row_entry(a, a - 1) = coeffs.b(a - 1) - m[static_cast<size_t>(a - 1)];
    }

    return Factors{std::move(L), UpperBands{std::move(m)}};
}

RecCoeffs swapped_product_coeffs(const Factors& f, int d, int horizon) {
    // (upper*lower)[a][b] = m_a * L[a][b] + L[a+1][b].
    RecCoeffs out;
    out.d = d;
    out.beta.resize(static_cast<size_t>(horizon));
    out.gamma.assign(static_cast<size_t>(d), std::vector<Rational>(static_cast<size_t>(horizon)));
    for (int k = 0; k < horizon; ++k) {
        out.beta[static_cast<size_t>(k)] = f.upper.at(k, k) + f.lower.at(k + 1, k);
        for (int r = 1; r <= d; ++r) {
            out.gamma[static_cast<size_t>(d - r)][static_cast<size_t>(k)] =
                f.upper.at(k + r, k + r) * f.lower.at(k + r, k) + f.lower.at(k + r + 1, k);
        }
    }
    return out;
}

RecCoeffs straight_product_coeffs(const Factors& f, int d, int horizon) {
    // (lower*upper)[a][b] = L[a][b] * m_b + L[a][b-1].
    RecCoeffs out;
    out.d = d;
    out.beta.resize(static_cast<size_t>(horizon));
    out.gamma.assign(static_cast<size_t>(d), std::vector<Rational>(static_cast<size_t>(horizon)));
    for (int k = 0; k < horizon; ++k) {
        out.beta[static_cast<size_t>(k)] = f.upper.at(k, k) + f.lower.at(k, k - 1);
        for (int r = 1; r <= d; ++r) {
            out.gamma[static_cast<size_t>(d - r)][static_cast<size_t>(k)] =
                f.lower.at(k + r, k) * f.upper.at(k, k) + f.lower.at(k + r, k - 1);
        }
    }
    return out;
}

RecCoeffs ul_value_family(const RecCoeffs& coeffs, const Factors& f) {
    const int d = coeffs.d;
    RecCoeffs pert = coeffs;
    for (int j = 1; j <= d; ++j) {
        pert.beta[static_cast<size_t>(j - 1)] = f.lower.at(j, j - 1);
        for (int i = 1; i <= j - 1; ++i) {
            pert.gamma[static_cast<size_t>(d - j + i)][static_cast<size_t>(i - 1)] =
                f.lower.at(j, i - 1);
        }
    }
    return pert;
}

std::vector<Rational> ul_value_residuals(const RecCoeffs& coeffs, const Factors& f) {
    const int d = coeffs.d;
    const RecCoeffs pert = ul_value_family(coeffs, f);
    std::vector<Rational> out;
    for (int a = 1; a <= d; ++a) {
        for (int k = 1; k <= a; ++k) {
            const PolySeq q = generate_associated(pert, a - k, k);
            Rational acc = f.lower.at(a, a - k) + q[k].eval(Rational(0));
            for (int j = 1; j <= k - 1; ++j) {
                acc += f.lower.at(a, a - j) * q[k - j].eval(Rational(0));
            }
            out.push_back(acc);
        }
    }
    return out;
}

KernelResult kernel(const RecCoeffs& coeffs, int n) {
    if (n < 1) throw BadParameter("kernel: need at least degree one");
    const int d = coeffs.d;

    KernelResult res;
    res.factors = lu(coeffs, n + d);
    res.coeffs = swapped_product_coeffs(res.factors, d, n);
    res.members = generate(res.coeffs, n);
    const PolySeq p = generate(coeffs, n + 1);

    for (int m = 0; m <= n; ++m) {
        Poly defect = p[m] - res.members[m];
        for (int j = 1; j <= std::min(m, d); ++j) {
            defect -= res.factors.lower.at(m, m - j) * res.members[m - j];
        }
        res.expansion_defects.push_back(defect);
    }
    for (int m = 0; m <= n; ++m) {
        const Rational ratio = p[m + 1].eval(Rational(0)) / p[m].eval(Rational(0));
        res.step_defects.push_back(res.members[m].shift_up(1) - p[m + 1] + ratio * p[m]);
    }
    return res;
}

Rational BidiagSplit::at(int factor, int row, int col) const {
    if (row == col) return Rational(1);
    if (row != col + 1) return Rational(0);
    const auto& s = sub[static_cast<size_t>(factor)];
    if (col < 0 || col >= static_cast<int>(s.size())) return Rational(0);
    return s[static_cast<size_t>(col)];
}

BidiagSplit bidiag_factor(const LowerBands& L, bool require_positive) {
    const int d = L.d;
    const int rows = L.row_count();
    BidiagSplit out;
    out.d = d;

    auto note = [&out, require_positive](const Rational& value, const std::string& name) {
        if (value > Rational(0)) return;
        if (require_positive) {
            throw FactorizationFailed("bidiagonal split: " + name + " = " + value.str() +
                                      " is not strictly positive");
        }
        if (out.positive) {
            out.positive = false;
            out.first_violation = name;
        }
    };

    // work[a-1][o-1]: entry o below the diagonal of row a of the factor
    // still waiting to be split.
    Mat work(static_cast<size_t>(rows));
    for (int a = 1; a <= rows; ++a) {
        work[static_cast<size_t>(a - 1)].assign(static_cast<size_t>(std::min(a, d)), Rational(0));
        for (int o = 1; o <= std::min(a, d); ++o) {
            work[static_cast<size_t>(a - 1)][static_cast<size_t>(o - 1)] = L.at(a, a - o);
        }
    }
    auto cell = [](Mat& w, int row, int col) -> Rational& {
        return w[static_cast<size_t>(row - 1)][static_cast<size_t>(row - col - 1)];
    };
    auto read = [](const Mat& w, int q, int row, int col) -> Rational {
        if (row == col) return Rational(1);
        if (row < col || row - col > q || col < 0) return Rational(0);
        return w[static_cast<size_t>(row - 1)][static_cast<size_t>(row - col - 1)];
    };

    // Peel bidiagonal factors off the right end until one band is left;
    // peeled[0] came off first and so stands rightmost in the product.
    std::vector<std::vector<Rational>> peeled;
    for (int q = d; q >= 2; --q) {
        const int level = d - q + 1;
        std::vector<Rational> bid(static_cast<size_t>(rows));
        Mat next(static_cast<size_t>(rows));
        for (int a = 1; a <= rows; ++a) {
            next[static_cast<size_t>(a - 1)].assign(
                static_cast<size_t>(std::min(a, q - 1)), Rational(0));
        }
        for (int a = 1; a <= rows; ++a) {
            if (a < q) {
                // One free choice per row: halve the first-subdiagonal
                // entry, then settle the rest of the row downward.
                const Rational half = cell(work, a, a - 1) / Rational(2);
                bid[static_cast<size_t>(a - 1)] = half;
                note(half, l_name(a, level));
                cell(next, a, a - 1) = half;
                note(half, t_name(a, a));
                for (int b = a - 2; b >= 0; --b) {
                    const Rational t = cell(work, a, b) -
                                       read(next, q - 1, a, b + 1) * bid[static_cast<size_t>(b)];
                    cell(next, a, b) = t;
                    note(t, t_name(a, b + 1));
                }
            } else {
                // Forced row: the deepest entry fixes one factor value,
                // the sweep climbs back to the diagonal.
                const Rational divisor = bid[static_cast<size_t>(a - q)];
                if (divisor.is_zero()) {
                    throw FactorizationFailed("bidiagonal split: divisor " +
                                              l_name(a - q + 1, level) + " is zero at row " +
                                              std::to_string(a));
                }
                Rational t = cell(work, a, a - q) / divisor;
                cell(next, a, a - q + 1) = t;
                note(t, t_name(a, a - q + 2));
                for (int b = a - q + 1; b <= a - 2; ++b) {
                    if (bid[static_cast<size_t>(b)].is_zero()) {
                        throw FactorizationFailed("bidiagonal split: divisor " +
                                                  l_name(b + 1, level) + " is zero at row " +
                                                  std::to_string(a));
                    }
                    t = (cell(work, a, b) - read(next, q - 1, a, b)) / bid[static_cast<size_t>(b)];
                    cell(next, a, b + 1) = t;
                    note(t, t_name(a, b + 2));
                }
                const Rational last = cell(work, a, a - 1) - read(next, q - 1, a, a - 1);
                bid[static_cast<size_t>(a - 1)] = last;
                note(last, l_name(a, level));
            }
        }
        peeled.push_back(std::move(bid));
        work = std::move(next);
    }
    // The remaining single band is the leftmost factor; for d >= 2 its
    // values were already vetted as the last peel's t entries.
    std::vector<Rational> leftmost(static_cast<size_t>(rows));
    for (int a = 1; a <= rows; ++a) {
        leftmost[static_cast<size_t>(a - 1)] = read(work, 1, a, a - 1);
        if (d == 1) note(leftmost[static_cast<size_t>(a - 1)], l_name(a, d));
    }
    peeled.push_back(std::move(leftmost));

    out.sub.assign(peeled.rbegin(), peeled.rend());
    return out;
}

namespace {

std::vector<ChainLink> chain_stations(const Factors& f, int d, int n, int m,
                                      const std::vector<std::vector<Rational>>& sub) {
    std::vector<Mat> factor_mats;
    for (int i = 0; i < d; ++i) {
        const auto& band = sub[static_cast<size_t>(i)];
        Mat b = zeros(m, m);
        for (int r = 0; r < m; ++r) {
            b[static_cast<size_t>(r)][static_cast<size_t>(r)] = Rational(1);
            if (r >= 1) {
                b[static_cast<size_t>(r)][static_cast<size_t>(r - 1)] =
                    band[static_cast<size_t>(r - 1)];
            }
        }
        factor_mats.push_back(std::move(b));
    }
    const Mat u = dense_upper(f.upper, m);

    std::vector<ChainLink> links;
    for (int station = 0; station <= d; ++station) {
        Mat prod;
        bool started = false;
        auto absorb = [&prod, &started](const Mat& x) {
            prod = started ? mat_mul(prod, x) : x;
            started = true;
        };
        for (int i = station; i < d; ++i) absorb(factor_mats[static_cast<size_t>(i)]);
        absorb(u);
        for (int i = 0; i < station; ++i) absorb(factor_mats[static_cast<size_t>(i)]);

        RecCoeffs c;
        c.d = d;
        c.beta.resize(static_cast<size_t>(n));
        c.gamma.assign(static_cast<size_t>(d), std::vector<Rational>(static_cast<size_t>(n)));
        for (int k = 0; k < n; ++k) {
            if (!(prod[static_cast<size_t>(k)][static_cast<size_t>(k + 1)] == Rational(1))) {
                throw FactorizationFailed("darboux_chain: station " + std::to_string(station) +
                                          " lost the unit superdiagonal");
            }
            for (int j = k + 2; j < n + d; ++j) {
                if (!prod[static_cast<size_t>(k)][static_cast<size_t>(j)].is_zero()) {
                    throw FactorizationFailed("darboux_chain: station " + std::to_string(station) +
                                              " is not banded Hessenberg");
                }
            }
            c.beta[static_cast<size_t>(k)] = prod[static_cast<size_t>(k)][static_cast<size_t>(k)];
            for (int r = 1; r <= d; ++r) {
                c.gamma[static_cast<size_t>(d - r)][static_cast<size_t>(k)] =
                    prod[static_cast<size_t>(k + r)][static_cast<size_t>(k)];
            }
        }
        links.push_back(ChainLink{c, generate(c, n)});
    }
    return links;
}

}  // namespace

std::vector<ChainLink> darboux_chain(const RecCoeffs& coeffs, int n) {
    const int d = coeffs.d;
    const int m = n + 2 * d + 2;
    coeffs.require(m);
    const Factors f = lu(coeffs, m);
    const BidiagSplit split = bidiag_factor(f.lower, /*require_positive=*/false);
    return chain_stations(f, d, n, m, split.sub);
}

std::vector<ChainLink> darboux_chain(const RecCoeffs& coeffs, int n,
                                     const std::vector<std::vector<Rational>>& sub) {
    const int d = coeffs.d;
    const int m = n + 2 * d + 2;
    coeffs.require(m);
    const Factors f = lu(coeffs, m);

    if (static_cast<int>(sub.size()) != d) {
        throw FactorizationFailed("darboux_chain: expected " + std::to_string(d) +
                                  " bidiagonal bands, got " + std::to_string(sub.size()));
    }
    for (const auto& band : sub) {
        if (static_cast<int>(band.size()) < m - 1) {
            throw FactorizationFailed("darboux_chain: a provided band is shorter than " +
                                      std::to_string(m - 1) + " entries");
        }
    }
    // The provided bands must rebuild the lower factor exactly; any
    // valid split yields a chain, but only this check ties the stations
    // to the factorization of the input.
    for (int row = 1; row < m; ++row) {
        for (int col = std::max(0, row - d); col < row; ++col) {
            Rational acc(0);
            // Entry (row, col) of the product of d unit bidiagonals is a
            // sum over strictly decreasing index paths, one step down per
            // factor that leaves the diagonal.
            const int steps = row - col;
            std::vector<int> pick(static_cast<size_t>(steps));
            for (int s = 0; s < steps; ++s) pick[static_cast<size_t>(s)] = s;
            while (true) {
                Rational term(1);
                int at = row;
                for (int s = 0; s < steps; ++s) {
                    term *= sub[static_cast<size_t>(pick[static_cast<size_t>(s)])]
                               [static_cast<size_t>(at - 1)];
                    --at;
                }
                acc += term;
                int s = steps - 1;
                while (s >= 0 && pick[static_cast<size_t>(s)] == d - steps + s) --s;
                if (s < 0) break;
                ++pick[static_cast<size_t>(s)];
                for (int t = s + 1; t < steps; ++t) {
                    pick[static_cast<size_t>(t)] = pick[static_cast<size_t>(t - 1)] + 1;
                }
            }
            if (!(acc == f.lower.at(row, col))) {
                throw FactorizationFailed("darboux_chain: provided bands do not rebuild the "
                                          "lower factor at (" +
                                          std::to_string(row) + "," + std::to_string(col) + ")");
            }
        }
    }
    return chain_stations(f, d, n, m, sub);
}

KernelDual kernel_dual_matrix(const RecCoeffs& coeffs) {
    const int d = coeffs.d;
    const Factors f = lu(coeffs, 2 * d - 1);

    KernelDual kd;
    kd.d = d;
    kd.a.assign(static_cast<size_t>(d), {});
    kd.b.assign(static_cast<size_t>(d), std::vector<Rational>(static_cast<size_t>(d)));

    for (int r = 0; r < d; ++r) {
        auto& a = kd.a[static_cast<size_t>(r)];
        a.assign(static_cast<size_t>(r + 1), Rational(0));
        for (int i = r; i >= 0; --i) {
            Rational rhs = f.lower.at(d + i, r);
            for (int t = i + 1; t <= r; ++t) {
                rhs -= a[static_cast<size_t>(t)] * coeffs.g(t + 1, t - i);
            }
            const Rational lead = coeffs.g(i + 1, 0);
            if (lead.is_zero()) {
                throw SingularSystem("kernel_dual_matrix: deepest band entry " +
                                     std::to_string(i + 1) + " is zero");
            }
            a[static_cast<size_t>(i)] = rhs / lead;
        }
        // <u_i, x P_m> assembled from the recurrence row of degree m.
        for (int m = 0; m < d; ++m) {
            Rational acc(0);
            for (int i = 0; i <= r; ++i) {
                if (i == m + 1) acc += a[static_cast<size_t>(i)];
                if (i == m) acc += a[static_cast<size_t>(i)] * coeffs.b(m);
                if (i < m) acc += a[static_cast<size_t>(i)] * coeffs.g(i + 1, d - m + i);
            }
            if (m == r) acc -= Rational(1);
            if (m > r) acc -= f.lower.at(m, r);
            kd.b[static_cast<size_t>(r)][static_cast<size_t>(m)] = acc;
        }
    }
    return kd;
}

Rational kernel_dual_bracket(const RecCoeffs& coeffs, const KernelDual& kd, int r, const Poly& q) {
    const int d = coeffs.d;
    if (r < 0 || r >= d) throw BadParameter("kernel_dual_bracket: row out of range");
    const int top = std::max(q.degree() + 1, 1);
    const PolySeq basis = generate(coeffs, top);
    const std::vector<Rational> plain = expand_in_basis(q, basis);
    const std::vector<Rational> lifted = expand_in_basis(q.shift_up(1), basis);
    auto coef = [](const std::vector<Rational>& v, int i) {
        return i < static_cast<int>(v.size()) ? v[static_cast<size_t>(i)] : Rational(0);
    };
    Rational acc(0);
    for (int i = 0; i <= r; ++i) {
        acc += kd.a[static_cast<size_t>(r)][static_cast<size_t>(i)] * coef(lifted, i);
    }
    for (int i = 0; i < d; ++i) {
        acc -= kd.b[static_cast<size_t>(r)][static_cast<size_t>(i)] * coef(plain, i);
    }
    return acc;
}

std::vector<std::vector<Rational>> dense_jacobi(const RecCoeffs& coeffs, int m) {
    coeffs.require(0);
    Mat out = zeros(m, m);
    for (int i = 0; i < m; ++i) {
        out[static_cast<size_t>(i)][static_cast<size_t>(i)] = coeffs.b(i);
        if (i + 1 < m) out[static_cast<size_t>(i)][static_cast<size_t>(i + 1)] = Rational(1);
        for (int r = 1; r <= coeffs.d; ++r) {
            if (i + r < m) {
                out[static_cast<size_t>(i + r)][static_cast<size_t>(i)] = coeffs.g(i + 1, coeffs.d - r);
            }
        }
    }
    return out;
}

std::vector<std::vector<Rational>> dense_lower(const LowerBands& L, int m) {
    Mat out = zeros(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = std::max(0, i - L.d); j <= i; ++j) {
            out[static_cast<size_t>(i)][static_cast<size_t>(j)] = L.at(i, j);
        }
    }
    return out;
}

std::vector<std::vector<Rational>> dense_upper(const UpperBands& U, int m) {
    Mat out = zeros(m, m);
    for (int i = 0; i < m; ++i) {
        out[static_cast<size_t>(i)][static_cast<size_t>(i)] = U.at(i, i);
        if (i + 1 < m) out[static_cast<size_t>(i)][static_cast<size_t>(i + 1)] = Rational(1);
    }
    return out;
}

std::vector<std::vector<Rational>> mat_mul(const std::vector<std::vector<Rational>>& a,
                                           const std::vector<std::vector<Rational>>& b) {
    const int n = static_cast<int>(a.size());
    const int k = static_cast<int>(b.size());
    const int p = k > 0 ? static_cast<int>(b[0].size()) : 0;
    Mat out = zeros(n, p);
    for (int i = 0; i < n; ++i) {
        for (int t = 0; t < k && t < static_cast<int>(a[static_cast<size_t>(i)].size()); ++t) {
            const Rational& av = a[static_cast<size_t>(i)][static_cast<size_t>(t)];
            if (av.is_zero()) continue;
            for (int j = 0; j < p; ++j) {
                out[static_cast<size_t>(i)][static_cast<size_t>(j)] +=
                    av * b[static_cast<size_t>(t)][static_cast<size_t>(j)];
            }
        }
    }
    return out;
}

}  // namespace dops
