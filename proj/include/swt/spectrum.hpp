#pragma once

#include <algorithm>
#include <vector>

#include "swt/errors.hpp"
#include "swt/mat4.hpp"
#include "swt/quartic.hpp"

namespace swt {

// Characteristic polynomial of a traceless, particle-hole-symmetric 4x4:
// l^4 + q l^2 + r l + s with q = -tr(E^2)/2, r = -tr(E^3)/3, s = det E.
// Symmetry forces the coefficients real; a matrix that produces genuinely
// complex ones does not belong to the symmetry class.
inline Quartic char_poly_coeffs(const Mat4& e) {
    const double nrm = std::max(1.0, e.fro_norm());
    if (std::abs(e.trace()) > 1e-10 * nrm)
        throw malformed_matrix_error("matrix is not traceless");
    const Mat4 e2 = e * e;
    const cplx q = -0.5 * e2.trace();
    const cplx r = -(e2 * e).trace() / 3.0;
    const cplx s = det4(e);
    if (std::abs(q.imag()) > 1e-10 * nrm * nrm ||
        std::abs(r.imag()) > 1e-10 * nrm * nrm * nrm ||
        std::abs(s.imag()) > 1e-10 * nrm * nrm * nrm * nrm)
        throw malformed_matrix_error(
            "complex characteristic coefficients; matrix lacks particle-hole symmetry");
    return {q.real(), r.real(), s.real()};
}

// Characteristic polynomial of an arbitrary complex 4x4 via Newton's
// identities on power traces; no symmetry gates, and roundoff-sized imaginary
// parts are kept (root polishing needs them). Reduces to the traceless form
// {det, -tr(E^3)/3, -tr(E^2)/2, 0, 1} when tr E = 0.
inline PolyCoeffs complex_char_poly(const Mat4& e) {
    const Mat4 e2 = e * e;
    const cplx p1 = e.trace();
    const cplx p2 = e2.trace();
    const cplx p3 = (e2 * e).trace();
    const cplx c3 = -p1;
    const cplx c2 = 0.5 * (p1 * p1 - p2);
    const cplx c1 = -(p1 * p1 * p1 - 3.0 * p1 * p2 + 2.0 * p3) / 6.0;
    return {det4(e), c1, c2, c3, cplx(1.0)};
}

struct RootCluster {
    cplx value;                // representative (mean of members, or snapped root)
    std::vector<int> members;  // indices into the sorted root array
    int algebraic = 0;
    int geometric = -1;  // -1 until a matrix-based computation fills it in
    bool defective() const { return geometric >= 1 && geometric < algebraic; }
};

struct Spectrum {
    std::array<cplx, 4> roots{};         // sorted by (Re, Im)
    std::vector<RootCluster> clusters;   // sorted: algebraic desc, Re desc, Im desc
};

// Groups roots lying within 1e-6 * max(1, |l|_max) of each other
// (transitively). The radius sits far above root scatter at snapped multiple
// roots and far below any separation the rest of the library treats as
// resolved.
inline std::vector<RootCluster> cluster_roots(const std::array<cplx, 4>& roots) {
    double s = 1.0;
    for (const cplx& z : roots) s = std::max(s, std::abs(z));
    const double radius = 1e-6 * s;

    std::array<int, 4> parent{0, 1, 2, 3};
    auto find = [&](int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (std::abs(roots[i] - roots[j]) <= radius) parent[find(i)] = find(j);

    std::vector<RootCluster> out;
    for (int rep = 0; rep < 4; ++rep) {
        if (find(rep) != rep) continue;
        RootCluster c;
        cplx mean = 0.0;
        for (int i = 0; i < 4; ++i)
            if (find(i) == rep) {
                c.members.push_back(i);
                mean += roots[i];
            }
        c.algebraic = int(c.members.size());
        c.value = mean / double(c.algebraic);
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
        if (a.algebraic != b.algebraic) return a.algebraic > b.algebraic;
        if (a.value.real() != b.value.real()) return a.value.real() > b.value.real();
        return a.value.imag() > b.value.imag();
    });
    return out;
}

inline Spectrum spectrum_from_roots(std::array<cplx, 4> roots) {
    sort_roots(roots);
    Spectrum sp;
    sp.roots = roots;
    sp.clusters = cluster_roots(roots);
    return sp;
}

// How the degenerate part of a spectrum sits in the matrix: full eigenbasis
// (diabolical), maximally collapsed (exceptional), or in between.
enum class Defectiveness { NotApplicable, Diabolical, Exceptional, Mixed, Unknown };

inline Defectiveness eigenstructure_defectiveness(const Spectrum& sp) {
    bool any = false, all_full = true, all_one = true, unknown = false;
    for (const RootCluster& c : sp.clusters) {
        if (c.algebraic < 2) continue;
        any = true;
        if (c.geometric < 0) unknown = true;
        if (c.geometric != c.algebraic) all_full = false;
        if (c.geometric != 1) all_one = false;
    }
    if (!any) return Defectiveness::NotApplicable;
    if (unknown) return Defectiveness::Unknown;
    if (all_full) return Defectiveness::Diabolical;
    if (all_one) return Defectiveness::Exceptional;
    return Defectiveness::Mixed;
}

inline const char* to_string(Defectiveness d) {
    switch (d) {
        case Defectiveness::NotApplicable: return "NotApplicable";
        case Defectiveness::Diabolical: return "Diabolical";
        case Defectiveness::Exceptional: return "Exceptional";
        case Defectiveness::Mixed: return "Mixed";
        case Defectiveness::Unknown: return "Unknown";
    }
    return "Unknown";
}

}  // namespace swt
