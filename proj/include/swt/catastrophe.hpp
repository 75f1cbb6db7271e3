#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "swt/eig4.hpp"
#include "swt/errors.hpp"
#include "swt/model.hpp"
#include "swt/parallel.hpp"
#include "swt/quartic.hpp"
#include "swt/spectrum.hpp"

namespace swt {

// Discriminant of l^4 + q l^2 + r l + s, Horner-grouped in s so that dyadic
// fixtures evaluate exactly:
//   D = 256 s^3 - 128 q^2 s^2 + (16 q^4 + 144 q r^2) s - 4 q^3 r^2 - 27 r^4.
// D = 0 exactly on root collisions; weight 12 in root units.
inline double discriminant(const Quartic& c) {
    const double q = c.q, r = c.r, s = c.s;
    return ((256.0 * s - 128.0 * q * q) * s + (16.0 * q * q * q * q + 144.0 * q * r * r)) * s -
           4.0 * q * q * q * r * r - 27.0 * r * r * r * r;
}

inline double discriminant_ds(const Quartic& c) {
    const double q = c.q, r = c.r, s = c.s;
    return (768.0 * s - 256.0 * q * q) * s + 16.0 * q * q * q * q + 144.0 * q * r * r;
}

// Fold function L = -2q^3 - 9r^2 + 8qs: vanishes on the swallowtail's
// self-intersection line, the triple-root line, and the quadruple point;
// separates the two generic sheets of D = 0. Weight 6 in root units.
inline double cubic_resolvent(const Quartic& c) {
    return -2.0 * c.q * c.q * c.q - 9.0 * c.r * c.r + 8.0 * c.q * c.s;
}

enum class Kind { Regular, S1, S2, ELminus, ELplus, DL3, EP4 };

inline const char* to_string(Kind k) {
    switch (k) {
        case Kind::Regular: return "Regular";
        case Kind::S1: return "S1";
        case Kind::S2: return "S2";
        case Kind::ELminus: return "ELminus";
        case Kind::ELplus: return "ELplus";
        case Kind::DL3: return "DL3";
        case Kind::EP4: return "EP4";
    }
    return "Regular";
}

struct DegeneracyClass {
    Kind kind = Kind::Regular;
    Defectiveness defectiveness = Defectiveness::Unknown;
    double discriminant = 0.0;
    double resolvent = 0.0;
    bool boundary = false;  // some decision quantity within 10x of its threshold
};

// Stratifies (q, r, s) by its place on the swallowtail:
//   |D| above threshold                   -> Regular (4 distinct roots)
//   D ~ 0, |L| above threshold            -> S1 / S2 sheets (one double root;
//                                            S1: the other two real, S2: complex)
//   D ~ L ~ 0, q ~ 0                      -> EP4 (quadruple root at 0)
//   D ~ L ~ 0, r ~ 0, q < 0               -> ELminus (two real double roots)
//   D ~ L ~ 0, r ~ 0, q > 0               -> ELplus  (conjugate double pair)
//   D ~ L ~ 0, |r| large, q < 0           -> DL3 (triple root line)
// Thresholds scale with the quasi-homogeneous weight of each quantity.
// When E is supplied, its coefficients are cross-checked against c and the
// eigenstructure fills in the defectiveness verdict.
inline DegeneracyClass classify(const Quartic& c, const Mat4* e = nullptr,
                                double tol_scale = 1.0) {
    if (!(tol_scale > 0.0))
        throw precondition_error("tol_scale must be positive");
    const double ls = lambda_scale(c);
    const double eps_d = 1e-10 * std::pow(ls, 12) * tol_scale;
    const double eps_l = 1e-10 * std::pow(ls, 6) * tol_scale;
    const double eps_q = 1e-10 * ls * ls * tol_scale;
    const double eps_r = 1e-10 * ls * ls * ls * tol_scale;

    DegeneracyClass out;
    out.discriminant = discriminant(c);
    out.resolvent = cubic_resolvent(c);

    bool boundary = false;
    auto decide = [&boundary](double value, double eps) {
        const double a = std::abs(value);
        if (a > eps / 10.0 && a < eps * 10.0) boundary = true;
        return a > eps;
    };

    if (decide(out.discriminant, eps_d)) {
        out.kind = Kind::Regular;
    } else if (decide(out.resolvent, eps_l)) {
        // one double root; count real roots to pick the sheet
        const std::array<cplx, 4> roots = solve_depressed_quartic(c);
        int real_count = 0;
        for (const cplx& z : roots)
            if (std::abs(z.imag()) <= 1e-8 * ls) ++real_count;
        out.kind = (real_count == 4) ? Kind::S1 : Kind::S2;
    } else if (!decide(c.q, eps_q)) {
        out.kind = Kind::EP4;
    } else if (!decide(c.r, eps_r)) {
        out.kind = (c.q < 0.0) ? Kind::ELminus : Kind::ELplus;
    } else if (c.q < 0.0) {
        out.kind = Kind::DL3;
    } else {
        // q > 0 with r != 0 has no exact stratum; nearest is the ELplus sheet
        out.kind = Kind::ELplus;
        boundary = true;
    }
    out.boundary = boundary;

    if (e != nullptr) {
        const Quartic cm = char_poly_coeffs(*e);
        if (std::abs(cm.q - c.q) > 1e-8 * ls * ls ||
            std::abs(cm.r - c.r) > 1e-8 * ls * ls * ls ||
            std::abs(cm.s - c.s) > 1e-8 * ls * ls * ls * ls)
            throw input_mismatch_error("matrix does not reproduce the given coefficients");
    }
    if (out.kind == Kind::Regular) {
        out.defectiveness = Defectiveness::NotApplicable;
    } else if (e == nullptr) {
        out.defectiveness = Defectiveness::Unknown;
    } else {
        // a single irresolvable eigensystem downgrades to Unknown rather than
        // aborting a whole surface sweep
        try {
            out.defectiveness = eigenstructure_defectiveness(eig4(*e).spectrum);
        } catch (const numerical_failure_error&) {
            out.defectiveness = Defectiveness::Unknown;
        }
    }
    return out;
}

enum class SurfaceMode { DoubleReal, DoubleComplex, GZeroDiabolical, GOffsetExceptional };

inline const char* to_string(SurfaceMode m) {
    switch (m) {
        case SurfaceMode::DoubleReal: return "double-real";
        case SurfaceMode::DoubleComplex: return "double-complex";
        case SurfaceMode::GZeroDiabolical: return "g-zero-diabolical";
        case SurfaceMode::GOffsetExceptional: return "g-offset-exceptional";
    }
    return "double-real";
}

struct AxisRange {
    double lo = 0.0;
    double hi = 1.0;
};

struct SurfaceSample {
    double a = 0.0, b = 0.0;  // parameters that produced the point
    Quartic coeffs;
    DegeneracyClass cls;
};

struct SurfaceMesh {
    std::string provenance;  // sampling mode, for serialization
    std::vector<SurfaceSample> samples;
};

namespace detail {

inline Quartic from_roots4(cplx l1, cplx l2, cplx l3, cplx l4) {
    const cplx e2 = l1 * l2 + l1 * l3 + l1 * l4 + l2 * l3 + l2 * l4 + l3 * l4;
    const cplx e3 = l1 * l2 * l3 + l1 * l2 * l4 + l1 * l3 * l4 + l2 * l3 * l4;
    const cplx e4 = l1 * l2 * l3 * l4;
    return {e2.real(), -e3.real(), e4.real()};
}

inline void check_range(const AxisRange& r, int n, const char* what) {
    if (!(r.hi >= r.lo) || !std::isfinite(r.lo) || !std::isfinite(r.hi))
        throw precondition_error(std::string(what) + ": malformed range");
    if (n < 1) throw precondition_error(std::string(what) + ": resolution must be >= 1");
}

inline double grid_at(const AxisRange& r, int n, int i) {
    return (n == 1) ? 0.5 * (r.lo + r.hi) : r.lo + (r.hi - r.lo) * double(i) / double(n - 1);
}

}  // namespace detail

// Degenerate-spectrum surfaces swept in closed form. The first two modes walk
// root space directly; the last two walk the restricted model's parameters:
//   GZeroDiabolical:     g = 0, parameters (u, gamma_minus); the double root
//                        gamma_minus/4 keeps a full eigenbasis.
//   GOffsetExceptional:  g = sqrt(u)/2 + gamma_minus/4 (both sqrt branches,
//                        two samples per grid point); the double pair is
//                        defective. Requires u >= 0.
inline SurfaceMesh sample_surface_parametric(SurfaceMode mode, const AxisRange& ra,
                                             const AxisRange& rb, int na, int nb,
                                             int threads = 1, double tol_scale = 1.0) {
    detail::check_range(ra, na, "first axis");
    detail::check_range(rb, nb, "second axis");
    if (mode == SurfaceMode::GOffsetExceptional && (ra.lo < 0.0 || ra.hi < 0.0))
        throw precondition_error("g-offset surface requires u >= 0");

    const int ncells = na * nb;
    std::vector<std::vector<SurfaceSample>> cells(ncells);
    parallel_for(ncells, threads, [&](int cell) {
        const int i = cell / nb, j = cell % nb;
        const double a = detail::grid_at(ra, na, i);
        const double b = detail::grid_at(rb, nb, j);
        std::vector<SurfaceSample>& out = cells[cell];
        auto add_coeffs = [&](const Quartic& c) {
            out.push_back({a, b, c, classify(c, nullptr, tol_scale)});
        };
        auto add_params = [&](const ModelParams& p) {
            // matrix in hand: classification carries the eigenstructure
            const Mat4 e = traceless_dynamical_matrix(p);
            const Quartic c = char_poly_coeffs(e);
            out.push_back({a, b, c, classify(c, &e, tol_scale)});
        };
        switch (mode) {
            case SurfaceMode::DoubleReal:
                // roots a, a, b, -2a-b
                add_coeffs(detail::from_roots4(a, a, b, -2.0 * a - b));
                break;
            case SurfaceMode::DoubleComplex:
                // roots a, a, -a+ib, -a-ib
                add_coeffs(detail::from_roots4(a, a, cplx(-a, b), cplx(-a, -b)));
                break;
            case SurfaceMode::GZeroDiabolical: {
                const double u = a, gm = b;
                ModelParams p;
                p.gamma_1 = gm >= 0.0 ? gm : 0.0;
                p.gamma_2 = gm >= 0.0 ? 0.0 : -gm;
                p.xi_1 = u > 0.0 ? std::sqrt(u) : 0.0;
                p.delta_omega_1 = u > 0.0 ? 0.0 : std::sqrt(-u);
                add_params(p);
                break;
            }
            case SurfaceMode::GOffsetExceptional: {
                const double u = a, gm = b;
                for (int branch = +1; branch >= -1; branch -= 2) {
                    ModelParams p;
                    p.gamma_1 = gm >= 0.0 ? gm : 0.0;
                    p.gamma_2 = gm >= 0.0 ? 0.0 : -gm;
                    p.xi_1 = std::sqrt(u);
                    p.g = std::abs(branch * std::sqrt(u) / 2.0 + gm / 4.0);
                    add_params(p);
                }
                break;
            }
        }
    });

    SurfaceMesh mesh;
    mesh.provenance = to_string(mode);
    for (std::vector<SurfaceSample>& v : cells)
        mesh.samples.insert(mesh.samples.end(), v.begin(), v.end());
    return mesh;
}

struct SurfaceBox {
    AxisRange q, r, s;
};

// Scans s for roots of D on a (q, r) grid: sign changes are bisected, and
// local minima of |D| are refined through dD/ds so tangential (even) contacts
// like two merging sheets are not missed. Accepted points satisfy
// |D| <= 1e-8 * scale^12.
inline SurfaceMesh sample_surface_implicit(const SurfaceBox& box, int nq, int nr, int ns,
                                           int threads = 1, double tol_scale = 1.0) {
    detail::check_range(box.q, nq, "q axis");
    detail::check_range(box.r, nr, "r axis");
    detail::check_range(box.s, ns, "s axis");
    if (ns < 3) throw precondition_error("s axis needs at least 3 samples");

    const int ncells = nq * nr;
    std::vector<std::vector<SurfaceSample>> cells(ncells);
    parallel_for(ncells, threads, [&](int cell) {
        const int i = cell / nr, j = cell % nr;
        const double q = detail::grid_at(box.q, nq, i);
        const double r = detail::grid_at(box.r, nr, j);
        std::vector<SurfaceSample>& out = cells[cell];
        std::vector<double> found;
        auto dval = [&](double s) { return discriminant({q, r, s}); };
        auto record = [&](double s) {
            const Quartic c{q, r, s};
            const double tol = 1e-8 * std::pow(lambda_scale(c), 12);
            if (std::abs(dval(s)) > tol) return;
            for (double prev : found)
                if (std::abs(prev - s) <= 1e-9 * std::max(1.0, box.s.hi - box.s.lo)) return;
            found.push_back(s);
            out.push_back({q, r, c, classify(c, nullptr, tol_scale)});
        };

        double s_prev = detail::grid_at(box.s, ns, 0);
        double d_prev = dval(s_prev);
        for (int k = 1; k < ns; ++k) {
            const double s_cur = detail::grid_at(box.s, ns, k);
            const double d_cur = dval(s_cur);
            if (d_prev == 0.0) record(s_prev);
            if ((d_prev < 0.0) != (d_cur < 0.0) && d_prev != 0.0 && d_cur != 0.0) {
                double lo = s_prev, hi = s_cur, dlo = d_prev;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double dm = dval(mid);
                    if (dm == 0.0) {
                        lo = hi = mid;
                        break;
                    }
                    if ((dm < 0.0) == (dlo < 0.0)) {
                        lo = mid;
                        dlo = dm;
                    } else {
                        hi = mid;
                    }
                }
                record(0.5 * (lo + hi));
            }
            s_prev = s_cur;
            d_prev = d_cur;
        }
        if (d_prev == 0.0) record(s_prev);

        // tangential contacts: bisect dD/ds where |D| has an interior local
        // minimum without a sign change
        for (int k = 1; k + 1 < ns; ++k) {
            const double s0 = detail::grid_at(box.s, ns, k - 1);
            const double s1 = detail::grid_at(box.s, ns, k);
            const double s2 = detail::grid_at(box.s, ns, k + 1);
            if (!(std::abs(dval(s1)) <= std::abs(dval(s0)) &&
                  std::abs(dval(s1)) <= std::abs(dval(s2))))
                continue;
            double lo = s0, hi = s2;
            double glo = discriminant_ds({q, r, lo});
            const double ghi = discriminant_ds({q, r, hi});
            if ((glo < 0.0) == (ghi < 0.0)) continue;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double gm = discriminant_ds({q, r, mid});
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((gm < 0.0) == (glo < 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            record(0.5 * (lo + hi));
        }
    });

    SurfaceMesh mesh;
    mesh.provenance = "implicit";
    for (std::vector<SurfaceSample>& v : cells)
        mesh.samples.insert(mesh.samples.end(), v.begin(), v.end());
    return mesh;
}

}  // namespace swt
