#pragma once

#include <stdexcept>
#include <string>

namespace dops {

// Base class for every failure raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A recurrence table was asked for an index beyond the data it holds.
struct MissingCoefficient : Error {
    using Error::Error;
};

// A lowest-band coefficient is zero, so the recurrence degenerates.
struct RegularityViolation : Error {
    using Error::Error;
};

// A sequence claimed to be graded monic is not.
struct NotGradedMonic : Error {
    using Error::Error;
};

// A dilation parameter must be nonzero.
struct ZeroLambda : Error {
    using Error::Error;
};

// Offsets handed to a determinant identity do not satisfy its preconditions.
struct BadOffsets : Error {
    using Error::Error;
};

// Unknown selector string.
struct BadSelector : Error {
    using Error::Error;
};

// The requested identity is only available for specific recurrence orders.
struct UnsupportedD : Error {
    using Error::Error;
};

// LU factorization requires every P_n(0) to be nonzero.
struct ZeroAtOrigin : Error {
    using Error::Error;
};

// UL factorization hit a zero pivot for the chosen free parameters.
struct Breakdown : Error {
    using Error::Error;
};

// A linear system that the theory predicts to be solvable was singular
// for this input.
struct SingularSystem : Error {
    using Error::Error;
};

// The bidiagonal split of the lower factor could not be completed with
// the deterministic positive schedule.
struct FactorizationFailed : Error {
    using Error::Error;
};

// The input sequence fails the symmetry pattern required for decomposition.
struct NotDSymmetric : Error {
    using Error::Error;
};

// A symmetric-family descriptor was asked beyond its stored data.
struct MissingRho : Error {
    using Error::Error;
};

// A component or selector index lies outside its admissible range.
struct IndexOutOfRange : Error {
    using Error::Error;
};

// Truncated series division needs a unit constant term.
struct SeriesDivisionByZero : Error {
    using Error::Error;
};

// quasi_detect found no finite quasi-orthogonality order.
struct NotQuasi : Error {
    using Error::Error;
};

// A spectral-transform denominator vanished at the chosen parameters.
struct DenominatorVanishes : Error {
    using Error::Error;
};

// The eigenvalue iteration did not converge within its iteration cap.
struct QRNoConvergence : Error {
    using Error::Error;
};

// Interlacing is only defined for real spectra.
struct NonRealRoots : Error {
    using Error::Error;
};

// A fixture or CLI argument is outside its admissible range.
struct BadParameter : Error {
    using Error::Error;
};

}  // namespace dops
