#pragma once

#include <cstdint>
#include <random>

#include "dops/copoly.hpp"
#include "dops/reccoeffs.hpp"

namespace dops {

// Deterministic random source. All draws go through explicit rejection
// sampling so streams are identical across standard libraries; the same
// seed always yields the same instances.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n);

    // Uniform in [lo, hi] inclusive.
    long range(long lo, long hi);

private:
    std::mt19937_64 eng_;
};

// Test-scale rational: numerator in [-20, 20], denominator in [1, 5].
Rational random_rational(Rng& rng);
Rational random_nonzero_rational(Rng& rng);

// Random descriptor with N stored levels per band; deepest-band entries
// are resampled until nonzero so the recurrence stays regular.
RecCoeffs random_reccoeffs(int d, int N, Rng& rng);

// Random level-k perturbation with a full mu window, a full eta window,
// and a nonzero lambda.
Perturbation random_perturbation(int d, int k, Rng& rng);

}  // namespace dops
