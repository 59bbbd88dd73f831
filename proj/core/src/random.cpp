#include "dops/random.hpp"

namespace dops {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw Error("Rng::below: empty range");
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v;
    do {
        v = eng_();
    } while (v >= limit);
    return v % n;
}

long Rng::range(long lo, long hi) {
    if (hi < lo) throw Error("Rng::range: empty range");
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

Rational random_rational(Rng& rng) {
    return Rational(rng.range(-20, 20), rng.range(1, 5));
}

Rational random_nonzero_rational(Rng& rng) {
    Rational r = random_rational(rng);
    while (r.is_zero()) r = random_rational(rng);
    return r;
}

Perturbation random_perturbation(int d, int k, Rng& rng) {
    Perturbation p;
    p.k = k;
    for (int j = 0; j < d; ++j) p.mu.push_back(random_rational(rng));
    for (int t = 1; t <= d - 1; ++t) {
        const auto [lo, hi] = eta_window(d, k, t);
        std::vector<Rational> row;
        for (int s = lo; s <= hi; ++s) row.push_back(random_rational(rng));
        p.eta.push_back(std::move(row));
    }
    p.lambda = random_nonzero_rational(rng);
    return p;
}

RecCoeffs random_reccoeffs(int d, int N, Rng& rng) {
    if (d < 1) throw Error("random_reccoeffs: d must be >= 1");
    RecCoeffs c;
    c.d = d;
    c.beta.reserve(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) c.beta.push_back(random_rational(rng));
    c.gamma.assign(static_cast<size_t>(d), {});
    for (int nu = 0; nu < d; ++nu) {
        auto& row = c.gamma[static_cast<size_t>(nu)];
        row.reserve(static_cast<size_t>(N));
        for (int i = 0; i < N; ++i) {
            row.push_back(nu == 0 ? random_nonzero_rational(rng) : random_rational(rng));
        }
    }
    return c;
}

}  // namespace dops
