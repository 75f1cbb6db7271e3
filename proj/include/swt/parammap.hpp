#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "swt/catastrophe.hpp"
#include "swt/errors.hpp"
#include "swt/model.hpp"
#include "swt/quartic.hpp"

namespace swt {

// (q, r, s) from the parameters in closed form -- no matrix is built. Agrees
// with the trace route to roundoff; the closed form is what makes Jacobians
// and crossing conditions tractable.
inline Quartic forward_map(const ModelParams& raw) {
    const ModelParams p = normalized(raw);
    const double gm = p.gamma_minus();
    const double g2 = p.g * p.g, x1 = p.xi_1 * p.xi_1, x2 = p.xi_2 * p.xi_2;
    const double c2 = p.chi * p.chi;
    const double d1 = p.delta_omega_1, d2 = p.delta_omega_2;

    Quartic c;
    c.q = -gm * gm / 8.0 + 2.0 * g2 - x1 - x2 - 2.0 * c2 + d1 * d1 + d2 * d2;
    c.r = 0.5 * gm * (x1 - x2 - d1 * d1 + d2 * d2);
    c.s = (gm * gm / 16.0) * (2.0 * c2 + d1 * d1 + d2 * d2 - x1 - x2) +
          gm * gm * gm * gm / 256.0 + g2 * g2 -
          (g2 / 8.0) * (gm * gm + 16.0 * (c2 + d1 * d2)) +
          4.0 * p.g * p.chi *
              (p.xi_2 * d1 * std::sin(p.phi_g - p.phi_chi + p.phi_2) -
               p.xi_1 * d2 * std::sin(-p.phi_g - p.phi_chi + p.phi_1)) +
          (x2 - d2 * d2) * (x1 - d1 * d1) +
          2.0 * p.xi_1 * p.xi_2 *
              (g2 * std::cos(-2.0 * p.phi_g + p.phi_1 - p.phi_2) -
               c2 * std::cos(-2.0 * p.phi_chi + p.phi_1 + p.phi_2)) +
          c2 * c2 - 2.0 * c2 * d1 * d2;
    return c;
}

namespace detail {

// Restricted-model map in the signed coordinates x = (gamma_minus, xi_1, g)
// with detunings fixed. Everything is even in xi_1 and g, so sign excursions
// during Newton iteration are harmless.
inline Quartic restricted_map(double gm, double xi1, double g, double d1, double d2) {
    const double u = xi1 * xi1 - d1 * d1;
    const double gg = g * g - gm * gm / 16.0;
    Quartic c;
    c.q = 2.0 * gg - u + d2 * d2;
    c.r = 0.5 * gm * (u + d2 * d2);
    c.s = gg * gg - (gm * gm / 16.0) * (u - d2 * d2) - 2.0 * g * g * d1 * d2 - u * d2 * d2;
    return c;
}

}  // namespace detail

struct Jacobian {
    // rows d(q, r, s) / d(gamma_minus, xi_1, g), detunings held fixed
    std::array<std::array<double, 3>, 3> m{};
    double det = 0.0;  // closed form, not the numerical determinant of m
};

// Derivatives of the restricted map. The closed-form determinant
//   det J = g xi_1 { 4 g^2 (u + d2^2)
//                    - d2 [ gm^2 (d2 - d1) + 4 (d1 + d2)(u + d2^2) ] }
// collapses to 4 g^3 xi_1 u at d2 = 0: the map folds exactly on g = 0,
// xi_1 = 0, and u = 0.
inline Jacobian jacobian(const ModelParams& raw) {
    const ModelParams p = normalized(raw);
    if (!p.simple())
        throw precondition_error("jacobian requires the restricted model (chi = xi_2 = 0)");
    const double gm = p.gamma_minus(), x = p.xi_1, g = p.g;
    const double d1 = p.delta_omega_1, d2 = p.delta_omega_2;
    const double u = x * x - d1 * d1;

    Jacobian j;
    j.m[0] = {-gm / 4.0, -2.0 * x, 4.0 * g};
    j.m[1] = {(u + d2 * d2) / 2.0, gm * x, 0.0};
    j.m[2] = {gm * (gm * gm - 16.0 * g * g + 8.0 * (d1 * d1 + d2 * d2 - x * x)) / 64.0,
              -x * (gm * gm + 16.0 * d2 * d2) / 8.0,
              4.0 * g * g * g - (g / 4.0) * (gm * gm + 16.0 * d1 * d2)};
    j.det = g * x *
            (4.0 * g * g * (u + d2 * d2) -
             d2 * (gm * gm * (d2 - d1) + 4.0 * (d1 + d2) * (u + d2 * d2)));
    return j;
}

namespace detail {

inline Jacobian jacobian_signed(double gm, double x, double g, double d1, double d2) {
    ModelParams p;
    p.gamma_1 = gm >= 0.0 ? gm : 0.0;
    p.gamma_2 = gm >= 0.0 ? 0.0 : -gm;
    p.xi_1 = std::abs(x);
    p.g = std::abs(g);
    p.delta_omega_1 = d1;
    p.delta_omega_2 = d2;
    Jacobian j = jacobian(p);
    // restore odd covariance lost to the magnitude folding
    if (x < 0.0)
        for (int i = 0; i < 3; ++i) j.m[i][1] = -j.m[i][1];
    if (g < 0.0)
        for (int i = 0; i < 3; ++i) j.m[i][2] = -j.m[i][2];
    j.det = g * x *
            (4.0 * g * g * (x * x - d1 * d1 + d2 * d2) -
             d2 * (gm * gm * (d2 - d1) + 4.0 * (d1 + d2) * (x * x - d1 * d1 + d2 * d2)));
    return j;
}

}  // namespace detail

// Newton inversion of the restricted map at delta_omega_2 = 0: finds
// (gamma_minus, xi_1, g) with forward_map = target, starting from seed.
// Converges to *a* preimage -- the map is many-to-one, so which one depends
// on the seed. Throws no_inverse_error if the iteration stalls and
// singular_map_error if it converges onto a fold (|det J| < 1e-10).
inline std::array<double, 3> invert_local(const Quartic& target, double delta_omega_1,
                                          const std::array<double, 3>& seed) {
    if (!std::isfinite(target.q) || !std::isfinite(target.r) || !std::isfinite(target.s) ||
        !std::isfinite(delta_omega_1))
        throw precondition_error("invert_local: inputs must be finite");

    const double ls = lambda_scale(target);
    const double w2 = ls * ls, w3 = w2 * ls, w4 = w3 * ls;
    auto resid = [&](const std::array<double, 3>& x, std::array<double, 3>& f) {
        const Quartic c = detail::restricted_map(x[0], x[1], x[2], delta_omega_1, 0.0);
        f = {c.q - target.q, c.r - target.r, c.s - target.s};
        return std::max({std::abs(f[0]) / w2, std::abs(f[1]) / w3, std::abs(f[2]) / w4});
    };

    std::array<double, 3> x = seed, f{};
    double res = resid(x, f);
    bool converged = res <= 1e-12;
    for (int it = 0; it < 100 && !converged; ++it) {
        const Jacobian j = detail::jacobian_signed(x[0], x[1], x[2], delta_omega_1, 0.0);
        // solve J dx = -f, partial pivoting
        std::array<std::array<double, 4>, 3> a{};
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < 3; ++k) a[i][k] = j.m[i][k];
            a[i][3] = -f[i];
        }
        for (int k = 0; k < 3; ++k) {
            int piv = k;
            for (int i = k + 1; i < 3; ++i)
                if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
            std::swap(a[k], a[piv]);
            if (a[k][k] == 0.0) throw singular_map_error("Jacobian is exactly singular");
            for (int i = k + 1; i < 3; ++i) {
                const double fac = a[i][k] / a[k][k];
                for (int c = k; c < 4; ++c) a[i][c] -= fac * a[k][c];
            }
        }
        std::array<double, 3> dx{};
        for (int i = 2; i >= 0; --i) {
            double ssum = a[i][3];
            for (int c = i + 1; c < 3; ++c) ssum -= a[i][c] * dx[c];
            dx[i] = ssum / a[i][i];
        }
        double step = 1.0;
        std::array<double, 3> xn{}, fn{};
        double res_n = res;
        for (int bt = 0; bt < 12; ++bt) {
            xn = {x[0] + step * dx[0], x[1] + step * dx[1], x[2] + step * dx[2]};
            res_n = resid(xn, fn);
            if (res_n < res) break;
            step /= 2.0;
        }
        if (!(res_n < res)) throw no_inverse_error("Newton iteration stalled");
        x = xn;
        f = fn;
        res = res_n;
        converged = res <= 1e-12;
    }
    if (!converged) throw no_inverse_error("Newton iteration did not converge");
    if (std::abs(detail::jacobian_signed(x[0], x[1], x[2], delta_omega_1, 0.0).det) < 1e-10)
        throw singular_map_error("converged onto a fold of the map");
    return {x[0], std::abs(x[1]), std::abs(x[2])};
}

// s on the r = 0 crossing loci of the restricted model, in closed form.
// Two branches cover the locus: gamma_minus = 0 and u = 0; the offset
// s - q^2/4 decides on which side of the double-pair parabola the crossing
// happens, which is what loop feasibility needs.
inline double php_crossing_s(const ModelParams& raw) {
    const ModelParams p = normalized(raw);
    if (!p.simple())
        throw precondition_error("crossing forms require the restricted model");
    const double gm = p.gamma_minus(), g = p.g, u = p.u();
    const double d1 = p.delta_omega_1, d2 = p.delta_omega_2;
    const double sc = std::max({1.0, std::abs(gm), p.xi_1, p.g, std::abs(d1), std::abs(d2)});
    const double q = forward_map(p).q;

    if (std::abs(gm) <= 1e-9 * sc) {
        const double w = u + d2 * d2;
        return q * q / 4.0 - 2.0 * g * g * d1 * d2 + g * g * (u - d2 * d2) - w * w / 4.0;
    }
    if (std::abs(u) <= 1e-9 * sc * sc) {
        return q * q / 4.0 + gm * gm * d2 * d2 / 8.0 - 2.0 * g * g * d1 * d2 -
               g * g * d2 * d2 - d2 * d2 * d2 * d2 / 4.0;
    }
    throw precondition_error("parameters lie on neither crossing branch");
}

// Closed parameter loop: cosine/sine modulations around a base point, with
// the decay asymmetry free to change sign (that is where the braiding comes
// from).
struct LoopSpec {
    double a_xi = 0.0, m_xi = 0.0;
    double a_g = 0.0, m_g = 0.0;
    double a_gamma = 0.0, m_gamma = 0.0;
    double delta_omega_1 = 0.0, delta_omega_2 = 0.0;
    int n_samples = 1024;
};

inline ModelParams loop_point(const LoopSpec& spec, double phi) {
    const double xi = spec.a_xi * (1.0 + spec.m_xi * std::cos(phi));
    const double g = spec.a_g * (1.0 + spec.m_g * std::sin(phi));
    const double gm = spec.a_gamma * (1.0 + spec.m_gamma * std::cos(phi));
    if (xi < 0.0 || g < 0.0)
        throw precondition_error("loop leaves the nonnegative-magnitude domain");
    ModelParams p;
    p.xi_1 = xi;
    p.g = g;
    p.gamma_1 = gm >= 0.0 ? gm : 0.0;
    p.gamma_2 = gm >= 0.0 ? 0.0 : -gm;
    p.delta_omega_1 = spec.delta_omega_1;
    p.delta_omega_2 = spec.delta_omega_2;
    return p;
}

inline void validate_loop(const LoopSpec& spec) {
    for (double v : {spec.a_xi, spec.m_xi, spec.a_g, spec.m_g, spec.a_gamma, spec.m_gamma,
                     spec.delta_omega_1, spec.delta_omega_2})
        if (!std::isfinite(v)) throw precondition_error("loop spec must be finite");
    if (spec.a_xi < 0.0 || spec.a_g < 0.0)
        throw precondition_error("base magnitudes must be nonnegative");
    if (spec.n_samples < 64) throw precondition_error("n_samples must be at least 64");
    for (int k = 0; k <= spec.n_samples; ++k)
        loop_point(spec, 2.0 * std::numbers::pi * k / spec.n_samples);  // throws if signed
}

struct PhpCrossing {
    double phi = 0.0;
    double q = 0.0, s = 0.0;
    double offset = 0.0;  // s - q^2/4
};

struct FeasibilityReport {
    std::vector<PhpCrossing> crossings;
    bool encloses_elplus = false;
    bool encloses_elminus = false;
    double min_abs_discriminant = 0.0;
    double min_abs_discriminant_phi = 0.0;
};

// Braiding needs the loop to straddle the double-pair parabola: crossings of
// r = 0 on opposite sides of s = q^2/4, with the connecting segment passing
// the parabola at q > 0 (ELplus) or q < 0 (ELminus). This samples the loop,
// bisects each r sign change, and reports the verdict plus how close the
// loop comes to the degenerate set.
inline FeasibilityReport loop_feasibility(const LoopSpec& spec) {
    validate_loop(spec);
    const int n = spec.n_samples;
    const double step = 2.0 * std::numbers::pi / n;

    FeasibilityReport rep;
    rep.min_abs_discriminant = std::numeric_limits<double>::infinity();
    auto r_at = [&](double phi) { return forward_map(loop_point(spec, phi)).r; };

    double r_prev = r_at(0.0);
    for (int k = 0; k <= n; ++k) {
        const double phi = k * step;
        const Quartic c = forward_map(loop_point(spec, phi));
        const double d = std::abs(discriminant(c));
        if (d < rep.min_abs_discriminant) {
            rep.min_abs_discriminant = d;
            rep.min_abs_discriminant_phi = phi;
        }
        if (k == 0) continue;
        const double r_cur = c.r;
        const bool crossed =
            (r_prev < 0.0) != (r_cur < 0.0) && !(r_prev == 0.0 && r_cur == 0.0);
        if (crossed) {
            double lo = (k - 1) * step, hi = phi, rlo = r_prev;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double rm = r_at(mid);
                if (rm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((rm < 0.0) == (rlo < 0.0)) {
                    lo = mid;
                    rlo = rm;
                } else {
                    hi = mid;
                }
            }
            const double phic = 0.5 * (lo + hi);
            const Quartic cc = forward_map(loop_point(spec, phic));
            rep.crossings.push_back(
                {phic, cc.q, cc.s, cc.s - cc.q * cc.q / 4.0});
        }
        r_prev = r_cur;
    }

    if (rep.crossings.size() == 2) {
        const PhpCrossing& c1 = rep.crossings[0];
        const PhpCrossing& c2 = rep.crossings[1];
        if ((c1.offset < 0.0) != (c2.offset < 0.0) && c1.offset != 0.0 && c2.offset != 0.0) {
            const double t = c1.offset / (c1.offset - c2.offset);
            const double qstar = c1.q + t * (c2.q - c1.q);
            rep.encloses_elplus = qstar > 0.0;
            rep.encloses_elminus = qstar < 0.0;
        }
    }
    return rep;
}

}  // namespace swt
