#pragma once

#include <cmath>
#include <numbers>

#include "swt/errors.hpp"
#include "swt/mat4.hpp"

namespace swt {

// Two-mode parameter set: decay rates, beam-splitter coupling, single-mode
// squeezing drives, two-mode squeezing drive, and detunings. Magnitudes are
// non-negative by convention; orientation lives in the phases.
struct ModelParams {
    double gamma_1 = 0.0;
    double gamma_2 = 0.0;
    double g = 0.0;
    double phi_g = 0.0;
    double xi_1 = 0.0;
    double phi_1 = 0.0;
    double xi_2 = 0.0;
    double phi_2 = 0.0;
    double chi = 0.0;
    double phi_chi = 0.0;
    double delta_omega_1 = 0.0;
    double delta_omega_2 = 0.0;

    double gamma_plus() const { return gamma_1 + gamma_2; }
    double gamma_minus() const { return gamma_1 - gamma_2; }
    // u > 0: the first mode's squeezing dominates its detuning.
    double u() const { return xi_1 * xi_1 - delta_omega_1 * delta_omega_1; }
    bool simple() const { return chi == 0.0 && xi_2 == 0.0; }
};

// Wraps an angle into (-pi, pi].
inline double wrap_phase(double phi) {
    constexpr double pi = std::numbers::pi;
    if (!std::isfinite(phi)) throw precondition_error("phase is not finite");
    double w = std::remainder(phi, 2.0 * pi);  // [-pi, pi]
    if (w <= -pi) w = pi;
    return w;
}

inline void validate(const ModelParams& p) {
    auto chk = [](double v, const char* what) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw precondition_error(std::string(what) + " must be finite and >= 0");
    };
    chk(p.gamma_1, "gamma_1");
    chk(p.gamma_2, "gamma_2");
    chk(p.g, "g");
    chk(p.xi_1, "xi_1");
    chk(p.xi_2, "xi_2");
    chk(p.chi, "chi");
    if (!std::isfinite(p.delta_omega_1) || !std::isfinite(p.delta_omega_2))
        throw precondition_error("detunings must be finite");
}

inline ModelParams normalized(ModelParams p) {
    validate(p);
    p.phi_g = wrap_phase(p.phi_g);
    p.phi_1 = wrap_phase(p.phi_1);
    p.phi_2 = wrap_phase(p.phi_2);
    p.phi_chi = wrap_phase(p.phi_chi);
    return p;
}

inline Mat4 tau_x() {
    Mat4 t;
    t(0, 2) = t(1, 3) = t(2, 0) = t(3, 1) = 1.0;
    return t;
}

inline Mat4 tau_z() {
    Mat4 t;
    t(0, 0) = t(1, 1) = 1.0;
    t(2, 2) = t(3, 3) = -1.0;
    return t;
}

// Drift matrix of the linearized Langevin system in the basis
// (a1, a2, a1^dag, a2^dag). Trace is -(gamma_1 + gamma_2), always real.
inline Mat4 build_dynamical_matrix(const ModelParams& raw) {
    const ModelParams p = normalized(raw);
    const cplx I(0.0, 1.0);
    const cplx eg = std::polar(p.g, p.phi_g);
    const cplx e1 = std::polar(p.xi_1, p.phi_1);
    const cplx e2 = std::polar(p.xi_2, p.phi_2);
    const cplx ec = std::polar(p.chi, p.phi_chi);

    Mat4 m;
    m(0, 0) = -0.5 * p.gamma_1 - I * p.delta_omega_1;
    m(0, 1) = std::conj(eg);
    m(0, 2) = std::conj(e1);
    m(0, 3) = std::conj(ec);

    m(1, 0) = -eg;
    m(1, 1) = -0.5 * p.gamma_2 - I * p.delta_omega_2;
    m(1, 2) = std::conj(ec);
    m(1, 3) = std::conj(e2);

    m(2, 0) = e1;
    m(2, 1) = ec;
    m(2, 2) = -0.5 * p.gamma_1 + I * p.delta_omega_1;
    m(2, 3) = eg;

    m(3, 0) = ec;
    m(3, 1) = e2;
    m(3, 2) = -std::conj(eg);
    m(3, 3) = -0.5 * p.gamma_2 + I * p.delta_omega_2;
    return m;
}

// Removes the uniform damping part: E = M - (tr M / 4) I.
// The trace must be real; a complex trace means M is not a valid drift matrix.
inline Mat4 tracelessize(const Mat4& m) {
    const cplx tr = m.trace();
    const double nm = m.fro_norm();
    if (std::abs(tr.imag()) > 1e-12 * std::max(1.0, nm))
        throw malformed_matrix_error("trace has a non-real part; not a drift matrix");
    Mat4 e = m;
    const cplx shift = tr / 4.0;
    for (int i = 0; i < 4; ++i) e(i, i) -= shift;
    return e;
}

// Traceless generator whose spectrum carries all degeneracy structure.
inline Mat4 traceless_dynamical_matrix(const ModelParams& p) {
    return tracelessize(build_dynamical_matrix(p));
}

// Noise-input coupling: K = diag(sqrt(gamma_1), sqrt(gamma_2)) ⊗-interleaved
// over the doubled basis.
inline Mat4 input_coupling_matrix(const ModelParams& raw) {
    const ModelParams p = normalized(raw);
    Mat4 k;
    k(0, 0) = k(2, 2) = std::sqrt(p.gamma_1);
    k(1, 1) = k(3, 3) = std::sqrt(p.gamma_2);
    return k;
}

// || M - tau_x conj(M) tau_x ||_F: zero for every physical drift matrix,
// independent of parameters. Nonzero input means the matrix was not built
// from a doubled-basis Langevin system.
inline double particle_hole_residual(const Mat4& m) {
    const Mat4 tx = tau_x();
    return (m - tx * m.conj() * tx).fro_norm();
}

// || M^dag + tau_z M tau_z ||_F: zero exactly when the traceless generator is
// pseudo-anti-Hermitian, i.e. equal decay rates (gamma_1 == gamma_2).
inline double pseudo_hermiticity_residual(const Mat4& m) {
    const Mat4 tz = tau_z();
    return (m.adjoint() + tz * m * tz).fro_norm();
}

}  // namespace swt
