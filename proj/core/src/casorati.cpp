#include "dops/casorati.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "dops/errors.hpp"
#include "dops/ops.hpp"

namespace dops {

namespace {

int parity_sign(long e) { return (e % 2 == 0) ? 1 : -1; }

Rational factorial_product(int d) {
    Rational prod(1);
    Rational kfac(1);
    for (int k = 1; k <= d; ++k) {
        kfac *= Rational(k);
        prod *= kfac;
    }
    return prod;
}

}  // namespace

PolyMatrix::PolyMatrix(int dim) : dim_(dim), cells_(static_cast<size_t>(dim) * static_cast<size_t>(dim)) {
    if (dim <= 0) throw BadParameter("PolyMatrix: dimension must be positive");
}

Poly& PolyMatrix::at(int i, int j) {
    if (i < 0 || i >= dim_ || j < 0 || j >= dim_) {
        throw BadParameter("PolyMatrix: index (" + std::to_string(i) + "," + std::to_string(j) +
                           ") outside dimension " + std::to_string(dim_));
    }
    return cells_[static_cast<size_t>(i) * static_cast<size_t>(dim_) + static_cast<size_t>(j)];
}

const Poly& PolyMatrix::at(int i, int j) const {
    return const_cast<PolyMatrix*>(this)->at(i, j);
}

Poly PolyMatrix::det() const {
    std::vector<Poly> m = cells_;
    auto cell = [&](int i, int j) -> Poly& {
        return m[static_cast<size_t>(i) * static_cast<size_t>(dim_) + static_cast<size_t>(j)];
    };
    int sign = 1;
    Poly prev = Poly::one();
    for (int k = 0; k + 1 < dim_; ++k) {
        if (cell(k, k).is_zero()) {
            int swap_row = -1;
            for (int i = k + 1; i < dim_; ++i) {
                if (!cell(i, k).is_zero()) {
                    swap_row = i;
                    break;
                }
            }
            if (swap_row < 0) return Poly::zero();
            for (int j = 0; j < dim_; ++j) std::swap(cell(k, j), cell(swap_row, j));
            sign = -sign;
        }
        for (int i = k + 1; i < dim_; ++i) {
            for (int j = k + 1; j < dim_; ++j) {
                cell(i, j) = Poly::exact_div(cell(k, k) * cell(i, j) - cell(i, k) * cell(k, j), prev);
            }
        }
        prev = cell(k, k);
    }
    Poly result = cell(dim_ - 1, dim_ - 1);
    return sign < 0 ? -result : result;
}

SeqCache::SeqCache(RecCoeffs coeffs) : coeffs_(std::move(coeffs)) {}

const Poly& SeqCache::at(int degree, int level) {
    if (level < 0) throw BadParameter("SeqCache: association level must be nonnegative");
    if (degree < 0) return zero_;
    auto it = levels_.find(level);
    if (it == levels_.end() || it->second.max_degree() < degree) {
        // Regenerate with slack so window sweeps do not regenerate per call.
        int target = std::max(degree + 4, coeffs_.d + 2);
        it = levels_.insert_or_assign(it == levels_.end() ? levels_.begin() : it, level,
                                      generate_associated(coeffs_, level, target));
    }
    return it->second[degree];
}

Poly window_det(SeqCache& cache, int n, int r) {
    if (n < 0 || r < 0) throw BadParameter("window_det: need n >= 0 and r >= 0");
    PolyMatrix M(cache.d() + 1);
    for (int j = 0; j <= cache.d(); ++j) {
        for (int i = 0; i <= cache.d(); ++i) M.at(j, i) = cache.at(n + j - i, r + i);
    }
    return M.det();
}

Rational window_value(const RecCoeffs& coeffs, int n, int r) {
    if (n < 0 || r < 0) throw BadParameter("window_value: need n >= 0 and r >= 0");
    Rational v(1);
    for (int i = 1; i <= n; ++i) v *= coeffs.g(i + r, 0);
    if (parity_sign(static_cast<long>(coeffs.d + 1) * n) < 0) v = -v;
    return v;
}

Poly window_det_by_steps(SeqCache& cache, int n, int r) {
    if (n < 0 || r < 0) throw BadParameter("window_det_by_steps: need n >= 0 and r >= 0");
    const RecCoeffs& c = cache.coeffs();
    const int d = c.d;
    PolyMatrix base(d + 1);
    for (int a = 0; a <= d; ++a) {
        for (int v = 0; v <= d; ++v) base.at(a, v) = cache.at(a - v, r + v);
    }
    Poly result = base.det();
    for (int k = 1; k <= n; ++k) {
        PolyMatrix step(d + 1);
        for (int i = 0; i < d; ++i) step.at(i, i + 1) = Poly::one();
        for (int col = 0; col < d; ++col) step.at(d, col) = Poly(-c.g(k + r + col, col));
        step.at(d, d) = Poly::x() - Poly(c.b(k - 1 + d + r));
        result *= step.det();
    }
    return result;
}

Poly short_window_det(SeqCache& cache, int n, int r) {
    if (n < 0 || r < 0) throw BadParameter("short_window_det: need n >= 0 and r >= 0");
    PolyMatrix M(cache.d());
    for (int j = 0; j < cache.d(); ++j) {
        for (int i = 0; i < cache.d(); ++i) M.at(j, i) = cache.at(n + j - i, r + i);
    }
    return M.det();
}

Poly spread_window_det(SeqCache& cache, int r, const std::vector<int>& rows) {
    if (r < 0) throw BadParameter("spread_window_det: need r >= 0");
    if (static_cast<int>(rows.size()) != cache.d() + 1) {
        throw BadOffsets("spread_window_det: need exactly d+1 degree rows");
    }
    PolyMatrix M(cache.d() + 1);
    for (int t = 0; t <= cache.d(); ++t) {
        for (int i = 0; i <= cache.d(); ++i) M.at(t, i) = cache.at(rows[static_cast<size_t>(t)] - i, r + i);
    }
    return M.det();
}

Poly extended_window_det(SeqCache& cache, int n, int r) {
    if (n < 0 || r < 0) throw BadParameter("extended_window_det: need n >= 0 and r >= 0");
    PolyMatrix M(cache.d() + 2);
    for (int a = 0; a <= cache.d() + 1; ++a) {
        for (int v = 0; v <= cache.d() + 1; ++v) M.at(a, v) = cache.at(n + a - v, r + v);
    }
    return M.det();
}

Poly verify_delta(const RecCoeffs& coeffs, int n, int r) {
    SeqCache cache(coeffs);
    Poly direct = window_det(cache, n, r);
    Poly closed(window_value(coeffs, n, r));
    Poly stepped = window_det_by_steps(cache, n, r);
    return (direct - closed) + (stepped - direct);
}

Poly verify_B_recurrence(const RecCoeffs& coeffs, int n, int r) {
    const int d = coeffs.d;
    if (r < 0) throw BadParameter("verify_B_recurrence: need r >= 0");
    if (n < d + 1) throw BadParameter("verify_B_recurrence: the recurrence starts at n = d+1");
    SeqCache cache(coeffs);
    Poly lhs = short_window_det(cache, n, r);
    Poly rhs;
    Rational band_prod(1);  // product of the deepest-band entries r+1 .. r+j-1
    for (int j = 1; j <= d - 1; ++j) {
        int sign = (j == 1) ? parity_sign(d) : -parity_sign(static_cast<long>(j) * (d - j + 1));
        Rational coef = band_prod * coeffs.g(r + j, j);
        if (sign < 0) coef = -coef;
        rhs += coef * short_window_det(cache, n - j, r + j);
        band_prod *= coeffs.g(r + j, 0);
    }
    rhs += (Poly::x() - Poly(coeffs.b(r + d - 1))) * (band_prod * short_window_det(cache, n - d, r + d));
    band_prod *= coeffs.g(r + d, 0);
    if (parity_sign(d) < 0) band_prod = -band_prod;
    rhs += band_prod * short_window_det(cache, n - d - 1, r + d + 1);
    return lhs - rhs;
}

Poly verify_F(const RecCoeffs& coeffs, int n, int r, const std::vector<int>& m) {
    const int d = coeffs.d;
    if (n < 0 || r < 0) throw BadParameter("verify_F: need n >= 0 and r >= 0");
    if (static_cast<int>(m.size()) != d) throw BadOffsets("verify_F: need exactly d spread rows");
    for (int mi : m) {
        if (mi <= n) throw BadOffsets("verify_F: every spread row must exceed the anchor degree");
    }
    SeqCache cache(coeffs);
    std::vector<int> rows;
    rows.reserve(static_cast<size_t>(d) + 1);
    rows.push_back(n);
    rows.insert(rows.end(), m.begin(), m.end());
    Poly lhs = spread_window_det(cache, r, rows);
    PolyMatrix tail(d);
    for (int i = 0; i < d; ++i) {
        for (int c = 0; c < d; ++c) tail.at(i, c) = cache.at(m[static_cast<size_t>(i)] - n - 1 - c, r + n + 1 + c);
    }
    return lhs - window_value(coeffs, n, r) * tail.det();
}

Poly verify_nabla(const RecCoeffs& coeffs, const Perturbation& pert, int n, int r, NablaKind kind,
                  const std::vector<int>& offsets) {
    const int d = coeffs.d;
    if (n < 0) throw BadParameter("verify_nabla: need n >= 0");
    SeqCache cache(coeffs);

    if (kind == NablaKind::shifted) {
        if (static_cast<int>(offsets.size()) != d + 1) {
            throw BadOffsets("verify_nabla: the shifted window needs d+1 column levels");
        }
        if (n < 1) throw BadParameter("verify_nabla: the shifted ratio starts at degree 1");
        for (int s : offsets) {
            if (s < 0 || s > n + d - 1) {
                throw BadOffsets("verify_nabla: column levels must lie in [0, n+d-1]");
            }
        }
        auto shifted_window = [&](int deg) {
            PolyMatrix M(d + 1);
            for (int a = 0; a <= d; ++a) {
                for (int v = 0; v <= d; ++v) {
                    int lvl = offsets[static_cast<size_t>(v)];
                    M.at(a, v) = cache.at(deg - lvl + a, lvl);
                }
            }
            return M.det();
        };
        Rational ratio = coeffs.g(n, 0);
        if (parity_sign(d + 1) < 0) ratio = -ratio;
        return shifted_window(n) - ratio * shifted_window(n - 1);
    }

    if (pert.k != 0) throw BadParameter("verify_nabla: the perturbation must sit at level 0");
    if (r < 0 || r > n + 1) throw BadParameter("verify_nabla: need 0 <= r <= n+1");
    pert.validate(d);

    const bool spread = kind == NablaKind::corecursive_spread || kind == NablaKind::comodified_spread;
    const bool modified = kind == NablaKind::comodified || kind == NablaKind::comodified_spread;
    if (spread) {
        if (static_cast<int>(offsets.size()) != d) {
            throw BadOffsets("verify_nabla: the spread window needs d extra degree rows");
        }
        for (int mi : offsets) {
            if (mi <= n) throw BadOffsets("verify_nabla: spread rows must exceed the anchor degree");
        }
    } else if (!offsets.empty()) {
        throw BadOffsets("verify_nabla: offsets apply to the spread and shifted kinds only");
    }

    int top = n + d;
    for (int mi : offsets) top = std::max(top, mi);
    PolySeq q = modified ? generate(co_modified(coeffs, pert).coeffs, top)
                         : generate(co_recursive(coeffs, pert), top);

    PolyMatrix M(d + 1);
    if (spread) {
        for (int j = 0; j <= d; ++j) {
            int kj = (j == 0) ? n : offsets[static_cast<size_t>(j - 1)];
            M.at(0, j) = q[kj];
            for (int i = 0; i < d; ++i) M.at(1 + i, j) = cache.at(kj - r - i, r + i);
        }
    } else {
        for (int a = 0; a <= d; ++a) {
            M.at(a, 0) = q[n + a];
            for (int j = 0; j < d; ++j) M.at(a, j + 1) = cache.at(n - r - j + a, r + j);
        }
    }
    Poly lhs = M.det();

    // The matching unperturbed window: the full-window constant, or the
    // spread window with every degree row shifted alongside the anchor.
    auto anchored = [&](int nn, int rr) -> Poly {
        if (!spread) return Poly(window_value(coeffs, nn, rr));
        std::vector<int> rows;
        rows.reserve(static_cast<size_t>(d) + 1);
        rows.push_back(nn);
        for (int mi : offsets) rows.push_back(mi - (n - nn));
        return spread_window_det(cache, rr, rows);
    };

    Poly expected;
    if (!modified) {
        if (r == 0) {
            ClosedForm cf = co_recursive_closed_form(coeffs, pert, d);
            expected = cf.A[static_cast<size_t>(d - 1)] * anchored(n, 0);
            if (parity_sign(d + 1) < 0) expected = -expected;
        } else {
            expected = q[r - 1] * anchored(n - r + 1, r - 1);
        }
    } else {
        Rational lbar = Rational(1) - pert.lambda;
        if (r == 0) {
            ClosedForm cf = co_recursive_closed_form(coeffs, pert, d);
            const Poly& ad = cf.A[static_cast<size_t>(d - 1)];
            if (d == 1) {
                // The band above the diagonal does not exist at d = 1;
                // the dilation surfaces through the diagonal step instead.
                expected = (ad - lbar * (Poly::x() - Poly(coeffs.b(0)))) * anchored(n, 0);
            } else {
                expected = (ad + Poly(lbar * coeffs.g(1, 1))) * anchored(n, 0);
                if (parity_sign(d + 1) < 0) expected = -expected;
            }
        } else if (r == 1) {
            expected = pert.lambda * anchored(n, 0);
        } else {
            expected = q[r - 1] * anchored(n - r + 1, r - 1);
        }
    }
    return lhs - expected;
}

TransferResult transfer_Tp(const RecCoeffs& coeffs, int n, int p) {
    const int d = coeffs.d;
    if (n < d) throw BadParameter("transfer_Tp: need n >= d");
    if (p < 0) throw BadParameter("transfer_Tp: need p >= 0");

    // table[q + d][i] = cofactor of degree n-i after q forward steps.
    const int qmax = p + d;
    std::vector<std::vector<Poly>> table(static_cast<size_t>(qmax + d + 1),
                                         std::vector<Poly>(static_cast<size_t>(d + 1)));
    for (int q = -d; q <= 0; ++q) table[static_cast<size_t>(q + d)][static_cast<size_t>(-q)] = Poly::one();
    for (int q = 0; q < qmax; ++q) {
        for (int i = 0; i <= d; ++i) {
            Poly next = (Poly::x() - Poly(coeffs.b(n + q))) * table[static_cast<size_t>(q + d)][static_cast<size_t>(i)];
            for (int v = 0; v < d; ++v) {
                next -= coeffs.g(n + q - v, d - 1 - v) * table[static_cast<size_t>(q - 1 - v + d)][static_cast<size_t>(i)];
            }
            table[static_cast<size_t>(q + 1 + d)][static_cast<size_t>(i)] = std::move(next);
        }
    }

    PolyMatrix M(d + 1);
    for (int a = 0; a <= d; ++a) {
        for (int i = 0; i <= d; ++i) M.at(a, i) = table[static_cast<size_t>(p + a + d)][static_cast<size_t>(i)];
    }
    Rational base = window_value(coeffs, n - d, 0);
    if (parity_sign(static_cast<long>(d) * (d + 1) / 2) < 0) base = -base;
    Poly residual = base * M.det() - Poly(window_value(coeffs, n + p, 0));

    SeqCache cache(coeffs);
    for (int nu = 0; nu <= d; ++nu) {
        Poly defect = cache.at(n + p - nu, nu);
        for (int i = 0; i <= d; ++i) {
            defect -= table[static_cast<size_t>(p + d)][static_cast<size_t>(i)] * cache.at(n - i - nu, nu);
        }
        residual += defect;
    }

    TransferResult out;
    out.T = table[static_cast<size_t>(p + d)];
    out.residual = std::move(residual);
    return out;
}

Poly verify_cd(const RecCoeffs& coeffs, CdKind kind, const CdParams& params) {
    const int d = coeffs.d;
    const int n = params.n;
    const int m = params.m;
    const int k = params.k;
    const int r = params.r;
    if (n < 0 || r < 0) throw BadParameter("verify_cd: need n >= 0 and r >= 0");
    SeqCache cache(coeffs);

    if (kind == CdKind::product || kind == CdKind::sum) {
        if (d != 2) throw UnsupportedD("verify_cd: the split and telescoped forms exist for d = 2 only");
        if (!(n < m && m < k)) throw BadOffsets("verify_cd: need n < m < k");
        // Tail window crossing the anchor at an intermediate degree v.
        auto cross = [&](int v) {
            PolyMatrix C(2);
            C.at(0, 0) = cache.at(v - n - 1, r + n + 1);
            C.at(0, 1) = cache.at(v - n - 2, r + n + 2);
            C.at(1, 0) = cache.at(v - n, r + n + 1);
            C.at(1, 1) = cache.at(v - n - 1, r + n + 2);
            return C.det();
        };
        Rational delta_n = window_value(coeffs, n, r);
        if (kind == CdKind::product) {
            Poly lhs = spread_window_det(cache, r, {n, m, k});
            PolyMatrix B(2);
            B.at(0, 0) = cache.at(m - n - 2, r + n + 1);
            B.at(0, 1) = cache.at(m - n - 3, r + n + 2);
            B.at(1, 0) = cache.at(m - n - 1, r + n + 1);
            B.at(1, 1) = cache.at(m - n - 2, r + n + 2);
            Poly expected = cache.at(k - m - 1, m + r + 1) * cross(m) +
                            coeffs.g(m + r, 0) * (cache.at(k - m - 2, m + r + 2) * B.det());
            return lhs - delta_n * expected;
        }
        Poly lhs;
        Poly rhs;
        Rational signed_prod(1);  // (-1)^v times the deepest-band product up to v
        for (int l = 1; l <= n; ++l) signed_prod *= coeffs.g(l + r, 0);
        if (parity_sign(n) < 0) signed_prod = -signed_prod;
        Poly j_prev = signed_prod.inverse() * cross(n);  // vanishes: the crossing window at v = n
        for (int v = n + 1; v <= m; ++v) {
            signed_prod *= coeffs.g(v + r, 0);
            signed_prod = -signed_prod;
            Rational w = signed_prod.inverse();
            lhs += w * spread_window_det(cache, r, {n, v, k});
            Poly j_cur = w * cross(v);
            rhs += cache.at(k - v - 1, v + r + 1) * j_cur - cache.at(k - v - 2, v + r + 2) * j_prev;
            j_prev = j_cur;
        }
        return lhs - delta_n * rhs;
    }

    if (kind == CdKind::multipoint) {
        std::vector<Rational> pts = params.points;
        if (pts.empty()) {
            for (int j = 0; j <= d; ++j) pts.emplace_back(2 * j + 3, 2);
        }
        if (static_cast<int>(pts.size()) != d + 1) throw BadOffsets("verify_cd: multipoint needs d+1 points");
        if (params.symbolic_var < -1 || params.symbolic_var > d) {
            throw BadParameter("verify_cd: symbolic column outside [-1, d]");
        }
        auto entry = [&](const Poly& poly, int col) -> Poly {
            if (col == params.symbolic_var) return poly;
            return Poly(poly.eval(pts[static_cast<size_t>(col)]));
        };
        auto top_window = [&](int deg) {
            PolyMatrix M(d + 1);
            for (int a = 0; a <= d; ++a) {
                for (int j = 0; j <= d; ++j) M.at(a, j) = entry(cache.at(deg - j + a, r + j), j);
            }
            return M.det();
        };
        auto bordered = [&](int v) {
            PolyMatrix M(d + 1);
            for (int j = 0; j <= d; ++j) {
                for (int a = 0; a < d; ++a) M.at(a, j) = entry(cache.at(v - j + a, r + j), j);
                M.at(d, j) = entry(cache.at(v + d - 1 - j, r + j).shift_up(1), j);
            }
            return M.det();
        };
        Rational delta_n = window_value(coeffs, n, r);
        Poly sum;
        for (int v = 1; v <= n; ++v) sum += (delta_n / window_value(coeffs, v, r)) * bordered(v);
        return sum - top_window(n) + Poly(delta_n);
    }

    if (kind == CdKind::confluent || kind == CdKind::confluent_assoc) {
        const bool stepped = kind == CdKind::confluent_assoc;
        auto member = [&](int deg, int j) -> const Poly& {
            return cache.at(deg, stepped ? r + j : r);
        };
        auto top_window = [&](int deg) {
            PolyMatrix M(d + 1);
            for (int a = 0; a <= d; ++a) {
                for (int j = 0; j <= d; ++j) {
                    M.at(a, j) = member(stepped ? deg - j + a : deg + a, j).derivative(j);
                }
            }
            return M.det();
        };
        auto bordered = [&](int v) {
            PolyMatrix M(d + 1);
            for (int j = 0; j <= d; ++j) {
                for (int a = 0; a < d; ++a) M.at(a, j) = member(stepped ? v - j + a : v + a, j).derivative(j);
                if (j == 0) continue;  // the j = 0 border entry drops out entirely
                M.at(d, j) = Rational(j) * member(stepped ? v + d - 1 - j : v + d - 1, j).derivative(j - 1);
            }
            return M.det();
        };
        Rational delta_n = window_value(coeffs, n, r);
        Poly sum;
        for (int v = 1; v <= n; ++v) sum += (delta_n / window_value(coeffs, v, r)) * bordered(v);
        Poly residual = sum - top_window(n);
        if (!stepped) residual += factorial_product(d) * Poly(delta_n);
        return residual;
    }

    throw BadSelector("verify_cd: unknown kind");
}

}  // namespace dops
