#include "dops/reccoeffs.hpp"

#include <algorithm>

namespace dops {

void RecCoeffs::require(int N) const {
    if (d < 1) throw Error("RecCoeffs: d must be >= 1");
    if (static_cast<int>(gamma.size()) != d) {
        throw MissingCoefficient("RecCoeffs: expected " + std::to_string(d) +
                                 " band rows, found " + std::to_string(gamma.size()));
    }
    if (static_cast<int>(beta.size()) < N) {
        throw MissingCoefficient("RecCoeffs: beta holds " + std::to_string(beta.size()) +
                                 " entries, need " + std::to_string(N));
    }
    // Band row nu is consumed up to subscript N-d+nu while producing P_N.
    for (int nu = 0; nu < d; ++nu) {
        const int need = std::max(0, N - d + nu);
        if (static_cast<int>(gamma[static_cast<size_t>(nu)].size()) < need) {
            throw MissingCoefficient("RecCoeffs: band row " + std::to_string(nu) + " holds " +
                                     std::to_string(gamma[static_cast<size_t>(nu)].size()) +
                                     " entries, need " + std::to_string(need));
        }
    }
    const int deepest = std::max(0, N - d);
    for (int m = 1; m <= deepest; ++m) {
        if (g(m, 0).is_zero()) {
            throw RegularityViolation("RecCoeffs: deepest band vanishes at subscript " +
                                      std::to_string(m));
        }
    }
}

bool RecCoeffs::agrees_with(const RecCoeffs& o) const {
    if (d != o.d) return false;
    const size_t nb = std::min(beta.size(), o.beta.size());
    for (size_t i = 0; i < nb; ++i) {
        if (beta[i] != o.beta[i]) return false;
    }
    if (gamma.size() != o.gamma.size()) return false;
    for (size_t nu = 0; nu < gamma.size(); ++nu) {
        const size_t ng = std::min(gamma[nu].size(), o.gamma[nu].size());
        for (size_t i = 0; i < ng; ++i) {
            if (gamma[nu][i] != o.gamma[nu][i]) return false;
        }
    }
    return true;
}

}  // namespace dops
