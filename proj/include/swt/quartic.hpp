#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "swt/errors.hpp"
#include "swt/mat4.hpp"

namespace swt {

// Depressed quartic p(l) = l^4 + q l^2 + r l + s with real coefficients.
// Particle-hole symmetry kills the cubic term, so three numbers carry the
// whole spectrum.
struct Quartic {
    double q = 0.0;
    double r = 0.0;
    double s = 0.0;
};

// Monic quartic over C, c[k] multiplies l^k, c[4] == 1. Used where the
// coefficients come from a matrix and are only real up to roundoff.
using PolyCoeffs = std::array<cplx, 5>;

inline PolyCoeffs to_coeffs(const Quartic& c) {
    return {cplx(c.s), cplx(c.r), cplx(c.q), cplx(0.0), cplx(1.0)};
}

inline cplx poly_eval(const PolyCoeffs& c, cplx z) {
    cplx acc = c[4];
    for (int k = 3; k >= 0; --k) acc = acc * z + c[k];
    return acc;
}

// d/dz as a padded coefficient array; degree drops by one each call.
inline PolyCoeffs poly_derivative(const PolyCoeffs& c) {
    PolyCoeffs d{};
    for (int k = 1; k <= 4; ++k) d[k - 1] = double(k) * c[k];
    return d;
}

// Natural magnitude of a root, from quasi-homogeneous weights of (q, r, s).
inline double lambda_scale(const Quartic& c) {
    return std::max({1.0, std::sqrt(std::abs(c.q)), std::cbrt(std::abs(c.r)),
                     std::pow(std::abs(c.s), 0.25)});
}

// Residual gate for accepted roots: |p(l)| against the coefficient scale.
inline double residual_tolerance(const Quartic& c) {
    return 1e-10 * std::max({1.0, c.q * c.q, std::pow(std::abs(c.r), 4.0 / 3.0),
                             std::abs(c.s)});
}

inline void sort_roots(std::array<cplx, 4>& roots) {
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

// All real roots of y^3 + a y^2 + b y + c (with multiplicity collapsed).
inline std::vector<double> solve_cubic_real(double a, double b, double c) {
    // depress: y = t - a/3
    const double sh = a / 3.0;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

    std::vector<double> roots;
    const double coeff_scale = std::max({1.0, std::abs(p), std::abs(q)});
    if (std::abs(p) < 1e-300 * coeff_scale && std::abs(q) < 1e-300 * coeff_scale) {
        roots = {0.0};
    } else {
        const double disc = -4.0 * p * p * p - 27.0 * q * q;
        if (disc > 0.0) {
            // three real roots; p < 0 is implied
            const double m = 2.0 * std::sqrt(-p / 3.0);
            double arg = 3.0 * q / (p * m);
            arg = std::clamp(arg, -1.0, 1.0);
            const double th = std::acos(arg) / 3.0;
            for (int k = 0; k < 3; ++k)
                roots.push_back(m * std::cos(th - 2.0 * std::acos(-1.0) * k / 3.0));
        } else {
            // one real root; Cardano with the cancellation-free branch
            const double w = std::sqrt(std::max(0.0, q * q / 4.0 + p * p * p / 27.0));
            const double u = std::cbrt(-q / 2.0 - std::copysign(w, q));
            roots.push_back(u == 0.0 ? 0.0 : u - p / (3.0 * u));
        }
    }
    for (double& t : roots) {
        double y = t - sh;
        // two Newton steps on the undepressed cubic tighten roundoff; at a
        // double root the derivative is pure noise and the step shoots off,
        // so a step is kept only if it actually lowers |f|
        double best = y;
        double best_f = std::abs(((y + a) * y + b) * y + c);
        for (int it = 0; it < 2; ++it) {
            const double f = ((y + a) * y + b) * y + c;
            const double df = (3.0 * y + 2.0 * a) * y + b;
            if (df == 0.0) break;
            const double yn = y - f / df;
            if (!std::isfinite(yn)) break;
            y = yn;
            const double fn = std::abs(((y + a) * y + b) * y + c);
            if (fn < best_f) {
                best_f = fn;
                best = y;
            } else {
                break;
            }
        }
        t = best;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace detail {

// Roots of l^2 + b l + c, real b,c; conjugate or real pair, exactly closed.
inline std::array<cplx, 2> solve_quadratic_real(double b, double c) {
    const double disc = b * b - 4.0 * c;
    if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        const double big = -(b + std::copysign(sq, b)) / 2.0;
        if (big == 0.0) return {cplx(0.0), cplx(-b)};
        return {cplx(big), cplx(c / big)};
    }
    const double im = std::sqrt(-disc) / 2.0;
    return {cplx(-b / 2.0, im), cplx(-b / 2.0, -im)};
}

inline void newton_polish(cplx& z, const PolyCoeffs& p, const PolyCoeffs& dp) {
    cplx best = z;
    double best_res = std::abs(poly_eval(p, z));
    cplx cur = z;
    for (int it = 0; it < 6; ++it) {
        const cplx d = poly_eval(dp, cur);
        const double zmag = std::max(1.0, std::abs(cur));
        if (std::abs(d) < 1e-12 * zmag * zmag * zmag) break;  // near-multiple: leave to snapping
        cur = cur - poly_eval(p, cur) / d;
        const double res = std::abs(poly_eval(p, cur));
        if (res < best_res) {
            best = cur;
            best_res = res;
        } else {
            break;
        }
    }
    z = best;
}

}  // namespace detail

// Collapses numerically multiple roots onto a single polished value.
//
// QR-style root finders scatter an m-fold root over a radius ~ eps^(1/m)
// relative to the *source* scale -- the coefficient scale for a closed-form
// solve, the matrix norm for a Schur sweep -- which the root magnitudes alone
// cannot reveal (a defective eigenvalue at 0 scatters at matrix scale). The
// caller passes that scale. Each merge of the single-linkage hierarchy is
// tested as a multiplicity hypothesis: a candidate m-fold root is polished as
// a *simple* root of p^(m-1) and accepted only if every lower derivative also
// vanishes at it, gated against the scale. Larger accepted hypotheses
// supersede smaller ones. Finally, if the polynomial is real, clusters are
// closed under conjugation so symmetric inputs give bitwise-symmetric
// outputs.
inline void refine_multiple_roots(std::array<cplx, 4>& roots, const PolyCoeffs& coeffs,
                                  double scale) {
    double s = scale;
    for (const cplx& z : roots) s = std::max(s, std::abs(z));
    if (s == 0.0) return;  // quadruple root at the origin, already exact

    std::array<PolyCoeffs, 4> derivs{coeffs, poly_derivative(coeffs),
                                     poly_derivative(poly_derivative(coeffs)), PolyCoeffs{}};
    derivs[3] = poly_derivative(derivs[2]);

    // single-linkage merge sequence over the four roots
    struct Node {
        std::vector<int> members;
        double radius;
    };
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < 4; ++i) clusters.push_back({i});
    std::vector<Node> merges;
    while (clusters.size() > 1) {
        double best = std::numeric_limits<double>::infinity();
        size_t bi = 0, bj = 1;
        for (size_t i = 0; i < clusters.size(); ++i)
            for (size_t j = i + 1; j < clusters.size(); ++j) {
                double d = std::numeric_limits<double>::infinity();
                for (int a : clusters[i])
                    for (int b : clusters[j]) d = std::min(d, std::abs(roots[a] - roots[b]));
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        std::vector<int> merged = clusters[bi];
        merged.insert(merged.end(), clusters[bj].begin(), clusters[bj].end());
        merges.push_back({merged, best});
        clusters[bi] = merged;
        clusters.erase(clusters.begin() + bj);
    }

    struct Snap {
        cplx value;
        std::vector<int> members;
    };
    std::vector<Snap> accepted;

    for (const Node& node : merges) {  // bottom-up: increasing merge radius
        // roundoff scatters an m-fold root at most ~eps^(1/m)*s; anything
        // spread wider is genuinely distinct and must stay untouched
        if (node.radius > 1e-3 * s) continue;
        const int m = int(node.members.size());
        cplx mean = 0.0;
        for (int i : node.members) mean += roots[i];
        mean /= double(m);
        const double window = std::max(1e-3 * s, 10.0 * node.radius);

        // polish as a simple root of p^(m-1), confined to the cluster
        cplx mu = mean;
        const PolyCoeffs& pm1 = derivs[m - 1];
        const PolyCoeffs pm = poly_derivative(pm1);
        bool ok = true;
        for (int it = 0; it < 40; ++it) {
            const cplx d = poly_eval(pm, mu);
            if (std::abs(d) == 0.0) break;
            const cplx step = poly_eval(pm1, mu) / d;
            mu -= step;
            if (std::abs(mu - mean) > window) {
                ok = false;  // Newton escaped toward some other root
                break;
            }
            if (std::abs(step) < 1e-15 * s) break;
        }
        for (int k = 0; ok && k < m; ++k) {
            const double gate = 1e-10 * std::pow(s, 4 - k);
            if (std::abs(poly_eval(derivs[k], mu)) > gate) ok = false;
        }
        if (!ok) continue;

        // supersede any accepted cluster contained in this one
        std::erase_if(accepted, [&](const Snap& sn) {
            for (int i : sn.members)
                if (std::find(node.members.begin(), node.members.end(), i) ==
                    node.members.end())
                    return false;
            return true;
        });
        accepted.push_back({mu, node.members});
    }

    double imax = 0.0;
    for (const cplx& c : coeffs) imax = std::max(imax, std::abs(c.imag()));
    double cmax = 1.0;
    for (const cplx& c : coeffs) cmax = std::max(cmax, std::abs(c));
    const bool real_poly = imax <= 1e-12 * cmax;

    if (real_poly) {
        // conjugate closure of snapped values
        for (size_t i = 0; i < accepted.size(); ++i) {
            if (std::abs(accepted[i].value.imag()) <= 1e-8 * s) {
                accepted[i].value = cplx(accepted[i].value.real(), 0.0);
                continue;
            }
            for (size_t j = i + 1; j < accepted.size(); ++j) {
                if (accepted[j].members.size() != accepted[i].members.size()) continue;
                if (std::abs(accepted[j].value - std::conj(accepted[i].value)) <= 1e-6 * s) {
                    const cplx avg =
                        (accepted[i].value + std::conj(accepted[j].value)) / 2.0;
                    accepted[i].value = avg;
                    accepted[j].value = std::conj(avg);
                }
            }
        }
    }

    for (const Snap& sn : accepted)
        for (int i : sn.members) roots[i] = sn.value;
}

// Closed-form roots of the depressed quartic (Ferrari), Newton-polished, with
// multiple roots snapped. Returned sorted by (Re, Im).
//
// The factorization goes through the largest real root of the resolvent
// cubic, which is positive whenever r != 0; the two quadratic factors have
// real coefficients, so conjugation closure is exact by construction.
inline std::array<cplx, 4> solve_depressed_quartic(const Quartic& c) {
    if (!std::isfinite(c.q) || !std::isfinite(c.r) || !std::isfinite(c.s))
        throw precondition_error("quartic coefficients must be finite");

    const double sig = lambda_scale(c);
    const double qn = c.q / (sig * sig);
    const double rn = c.r / (sig * sig * sig);
    const double sn = c.s / (sig * sig * sig * sig);

    std::array<cplx, 4> roots;
    double alpha2 = 0.0;
    if (rn != 0.0) {
        const std::vector<double> ys =
            solve_cubic_real(2.0 * qn, qn * qn - 4.0 * sn, -rn * rn);
        alpha2 = ys.back();
    }
    if (rn != 0.0 && alpha2 > 0.0) {
        const double alpha = std::sqrt(alpha2);
        const double beta2 = (qn + alpha2 + rn / alpha) / 2.0;
        const double beta1 = (qn + alpha2 - rn / alpha) / 2.0;
        const auto r1 = detail::solve_quadratic_real(alpha, beta1);
        const auto r2 = detail::solve_quadratic_real(-alpha, beta2);
        roots = {r1[0], r1[1], r2[0], r2[1]};
    } else {
        // r == 0 (or the resolvent collapsed): biquadratic in l^2
        const auto zs = detail::solve_quadratic_real(qn, sn);
        const cplx w0 = std::sqrt(zs[0]);
        const cplx w1 = std::sqrt(zs[1]);
        roots = {w0, -w0, w1, -w1};
    }
    for (cplx& z : roots) z *= sig;

    const PolyCoeffs coeffs = to_coeffs(c);
    const PolyCoeffs dcoeffs = poly_derivative(coeffs);
    for (cplx& z : roots) detail::newton_polish(z, coeffs, dcoeffs);
    // unfloored coefficient scale: cluster radii must track the roots even
    // when the whole spectrum is far below 1
    const double sig0 = std::max({std::sqrt(std::abs(c.q)), std::cbrt(std::abs(c.r)),
                                  std::pow(std::abs(c.s), 0.25)});
    refine_multiple_roots(roots, coeffs, sig0);
    sort_roots(roots);

    const double tol = residual_tolerance(c);
    for (const cplx& z : roots)
        if (std::abs(poly_eval(coeffs, z)) > tol)
            throw numerical_failure_error("quartic root residual exceeds tolerance");
    return roots;
}

}  // namespace swt
