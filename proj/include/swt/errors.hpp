#pragma once

#include <stdexcept>
#include <string>

namespace swt {

// Base for everything this library throws on contract violations.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input fails a documented precondition (bad magnitudes, malformed ranges, ...).
struct precondition_error : error {
    using error::error;
};

// A matrix handed in does not have the structure the operation requires
// (wrong symmetry class, trace not removed, ...).
struct malformed_matrix_error : error {
    using error::error;
};

// Two inputs that must describe the same object disagree beyond tolerance
// (e.g. coefficients vs. the matrix they allegedly came from).
struct input_mismatch_error : error {
    using error::error;
};

// An iteration failed to converge or a residual gate was not met.
struct numerical_failure_error : error {
    using error::error;
};

// The requested eigenvector gauge is undefined at this configuration.
struct gauge_unavailable_error : error {
    using error::error;
};

// Local inversion ran out of iterations without meeting the residual target.
struct no_inverse_error : error {
    using error::error;
};

// The map's Jacobian is singular at the converged point; the local inverse
// does not exist there.
struct singular_map_error : error {
    using error::error;
};

// Eigenvalue continuation hit a point where two strands are closer than the
// resolvable gap: the loop touches (or passes too near) a degeneracy.
struct degeneracy_error : error {
    using error::error;
};

// A discrete decision (strand matching, crossing order) is a near-tie and
// cannot be made reliably at this resolution.
struct ambiguity_error : error {
    using error::error;
};

}  // namespace swt
