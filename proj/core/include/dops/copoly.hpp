#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dops/ops.hpp"
#include "dops/poly.hpp"
#include "dops/reccoeffs.hpp"

namespace dops {

// Window of band subscripts that a level-k perturbation may touch on the
// superscript-t band (1 <= t <= d-1): s in [max(1, t+k+1-d), t+k].
// Exactly these entries feed the recurrence steps k+1 .. k+d.
std::pair<int, int> eta_window(int d, int k, int t);

// Finite perturbation at level k.
//   mu[j]      shifts the diagonal entry beta[k+j],   j = 0..d-1.
//   eta[t-1]   shifts band t inside eta_window(d,k,t); entry j belongs to
//              subscript eta_window(d,k,t).first + j. Missing rows and
//              missing trailing entries mean zero. The deepest band
//              (superscript 0) is never shifted: dilation handles it.
//   lambda     scales one deepest-band entry; must stay nonzero so the
//              recurrence stays regular.
struct Perturbation {
    int k = 0;
    std::vector<Rational> mu;
    std::vector<std::vector<Rational>> eta;
    Rational lambda = Rational(1);

    Rational mu_at(int j) const {
        if (j < 0 || j >= static_cast<int>(mu.size())) return Rational(0);
        return mu[static_cast<size_t>(j)];
    }
    // Value added to band t at subscript s; zero when unset.
    Rational eta_at(int d, int t, int s) const;
    // Shape checks against an order-d recurrence.
    void validate(int d) const;
};

// Descriptor of the co-recursive sequence: diagonal window shifted by mu,
// bands 1..d-1 shifted by eta inside the level-k window, deepest band
// untouched. lambda is ignored.
RecCoeffs co_recursive(const RecCoeffs& coeffs, const Perturbation& p);

// Cofactors of the closed-form connection
//   Q_n = P_n - sum_{i=1}^{d} A_i(x) P_{n-k-i}^{(k+i)},   Q_n = P_n for n <= k,
// solved inductively from the first d perturbed steps, plus the exact
// residual of the connection over all n <= N (zero when the closed form
// holds; the first failing degree is returned otherwise).
struct ClosedForm {
    std::vector<Poly> A;
    Poly residual;
};
ClosedForm co_recursive_closed_form(const RecCoeffs& coeffs, const Perturbation& p, int N);

// Descriptor with the deepest-band entry at subscript k scaled by lambda
// (k >= 1). The sequence it generates satisfies
//   R_n = P_n + g(k,0) * (1-lambda) * P_{k-1} * P_{n-(d+k)}^{(d+k)}.
RecCoeffs co_dilated(const RecCoeffs& coeffs, int k, const Rational& lambda);

// Combined perturbation: co-recursive window at level k plus dilation of
// the deepest-band entry at subscript k+1. residual is the exact defect
// of the combined closed form
//   C_n = P_n - sum A_i P_{n-k-i}^{(k+i)} + g(k+1,0)*(1-lambda)*P_k*P_{n-(d+k+1)}^{(d+k+1)}
// over every n the data supports.
struct CoModified {
    RecCoeffs coeffs;
    Poly residual;
};
CoModified co_modified(const RecCoeffs& coeffs, const Perturbation& p);

// Perturbation serialization:
//   {"k": int, "mu": ["p/q", ...], "eta": [[...], ...], "lambda": "p/q"}
std::string to_json(const Perturbation& p);
Perturbation perturbation_from_json(const std::string& text);

}  // namespace dops
