#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "swt/errors.hpp"
#include "swt/mat4.hpp"
#include "swt/model.hpp"
#include "swt/quartic.hpp"
#include "swt/spectrum.hpp"

namespace swt {

namespace detail {

// c real, |c|^2 + |s|^2 = 1, G * (f, g)^T = (r, 0)^T for G = [[c, s], [-conj(s), c]].
struct Givens {
    double c;
    cplx s;
};

inline Givens make_givens(cplx f, cplx g) {
    if (g == cplx(0.0)) return {1.0, 0.0};
    if (f == cplx(0.0)) return {0.0, 1.0};
    const double d = std::hypot(std::abs(f), std::abs(g));
    const cplx sf = f / std::abs(f);
    return {std::abs(f) / d, sf * std::conj(g) / d};
}

// rows k, k+1 of H, columns j0..3
inline void apply_givens_rows(Mat4& h, int k, const Givens& g, int j0) {
    for (int j = j0; j < 4; ++j) {
        const cplx a = h(k, j), b = h(k + 1, j);
        h(k, j) = g.c * a + g.s * b;
        h(k + 1, j) = -std::conj(g.s) * a + g.c * b;
    }
}

// columns k, k+1 of H (i.e. H <- H G^dag), rows 0..i1
inline void apply_givens_cols(Mat4& h, int k, const Givens& g, int i1) {
    for (int i = 0; i <= i1; ++i) {
        const cplx a = h(i, k), b = h(i, k + 1);
        h(i, k) = g.c * a + std::conj(g.s) * b;
        h(i, k + 1) = -g.s * a + g.c * b;
    }
}

// Unitary reduction to upper Hessenberg, accumulating Q (A = Q H Q^dag).
inline void hessenberg(Mat4& a, Mat4& q) {
    q = Mat4::identity();
    for (int k = 0; k < 2; ++k) {
        double nx = 0.0;
        for (int i = k + 2; i < 4; ++i) nx += std::norm(a(i, k));
        if (nx == 0.0) continue;
        const cplx x0 = a(k + 1, k);
        const double xn = std::sqrt(std::norm(x0) + nx);
        const cplx phase = (x0 == cplx(0.0)) ? cplx(1.0) : x0 / std::abs(x0);
        Vec4 v{};
        v[k + 1] = x0 + phase * xn;
        for (int i = k + 2; i < 4; ++i) v[i] = a(i, k);
        double vn = 0.0;
        for (const cplx& z : v) vn += std::norm(z);
        if (vn == 0.0) continue;
        // A <- (I - 2 v v^dag / v^dag v) A (...same from the right), Q <- Q (...)
        for (int j = 0; j < 4; ++j) {  // left
            cplx w = 0.0;
            for (int i = 0; i < 4; ++i) w += std::conj(v[i]) * a(i, j);
            w *= 2.0 / vn;
            for (int i = 0; i < 4; ++i) a(i, j) -= v[i] * w;
        }
        for (int i = 0; i < 4; ++i) {  // right
            cplx w = 0.0;
            for (int j = 0; j < 4; ++j) w += a(i, j) * v[j];
            w *= 2.0 / vn;
            for (int j = 0; j < 4; ++j) a(i, j) -= w * std::conj(v[j]);
        }
        for (int i = 0; i < 4; ++i) {
            cplx w = 0.0;
            for (int j = 0; j < 4; ++j) w += q(i, j) * v[j];
            w *= 2.0 / vn;
            for (int j = 0; j < 4; ++j) q(i, j) -= w * std::conj(v[j]);
        }
    }
}

inline cplx wilkinson_shift(const Mat4& h, int hi) {
    const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
    const cplx c = h(hi, hi - 1), d = h(hi, hi);
    const cplx tr2 = (a + d) / 2.0;
    const cplx disc = std::sqrt(tr2 * tr2 - (a * d - b * c));
    const cplx m1 = tr2 + disc, m2 = tr2 - disc;
    return (std::abs(m1 - d) < std::abs(m2 - d)) ? m1 : m2;
}

// One explicit shifted QR sweep on the active block [lo, hi]; Q accumulates
// the rotations so A = Q H Q^dag stays exact.
inline void qr_step(Mat4& h, Mat4& q, int lo, int hi, cplx mu) {
    for (int i = lo; i <= hi; ++i) h(i, i) -= mu;
    std::array<Givens, 3> gs;
    for (int k = lo; k < hi; ++k) {
        gs[k - lo] = make_givens(h(k, k), h(k + 1, k));
        apply_givens_rows(h, k, gs[k - lo], k);
        h(k + 1, k) = 0.0;
    }
    for (int k = lo; k < hi; ++k) {
        apply_givens_cols(h, k, gs[k - lo], std::min(k + 2, hi));
        for (int i = 0; i < 4; ++i) {  // Q <- Q G^dag
            const cplx a = q(i, k), b = q(i, k + 1);
            q(i, k) = gs[k - lo].c * a + std::conj(gs[k - lo].s) * b;
            q(i, k + 1) = -gs[k - lo].s * a + gs[k - lo].c * b;
        }
    }
    for (int i = lo; i <= hi; ++i) h(i, i) += mu;
}

// Schur decomposition A = Q T Q^dag of the scaled matrix; throws on
// non-convergence (200 sweeps is orders beyond anything a 4x4 needs).
inline void schur4(Mat4& h, Mat4& q) {
    hessenberg(h, q);
    const double eps = std::numeric_limits<double>::epsilon();
    const double hnrm = h.fro_norm();
    int hi = 3, stalled = 0, total = 0;
    while (hi > 0) {
        for (int k = 0; k < hi; ++k) {
            // ulp-level deflation against the local diagonal; the norm floor
            // catches subdiagonals next to diagonal entries that are ~0
            const double local = std::abs(h(k, k)) + std::abs(h(k + 1, k + 1));
            if (std::abs(h(k + 1, k)) <= eps * (local > 0.0 ? local : hnrm))
                h(k + 1, k) = 0.0;
        }
        if (h(hi, hi - 1) == cplx(0.0)) {
            --hi;
            stalled = 0;
            continue;
        }
        int lo = hi;
        while (lo > 0 && h(lo, lo - 1) != cplx(0.0)) --lo;
        cplx mu = wilkinson_shift(h, hi);
        if (++stalled % 12 == 0)  // break limit cycles
            mu = h(hi, hi) + 0.7562 * std::abs(h(hi, hi - 1));
        qr_step(h, q, lo, hi, mu);
        if (++total > 200) throw numerical_failure_error("QR iteration did not converge");
    }
}

// Solve (T - lambda I) y = 0 by back-substitution from Schur position k.
inline Vec4 schur_vector(const Mat4& t, cplx lambda, int k, double scale) {
    Vec4 y{};
    y[k] = 1.0;
    for (int i = k - 1; i >= 0; --i) {
        cplx rhs = 0.0;
        for (int j = i + 1; j <= k; ++j) rhs += t(i, j) * y[j];
        cplx d = t(i, i) - lambda;
        if (std::abs(d) < 1e-14 * scale) d = 1e-14 * scale;
        y[i] = -rhs / d;
    }
    return y;
}

struct Lu4 {
    Mat4 lu;
    std::array<int, 4> pr{}, pc{};
};

// Full-pivot LU with tiny pivots floored, for inverse iteration near
// singular shifts.
inline Lu4 lu_full_pivot(Mat4 m, double floor_piv) {
    Lu4 f;
    for (int i = 0; i < 4; ++i) f.pr[i] = f.pc[i] = i;
    for (int k = 0; k < 4; ++k) {
        double best = -1.0;
        int bi = k, bj = k;
        for (int i = k; i < 4; ++i)
            for (int j = k; j < 4; ++j)
                if (std::abs(m(i, j)) > best) {
                    best = std::abs(m(i, j));
                    bi = i;
                    bj = j;
                }
        if (bi != k) {
            for (int j = 0; j < 4; ++j) std::swap(m.a[4 * k + j], m.a[4 * bi + j]);
            std::swap(f.pr[k], f.pr[bi]);
        }
        if (bj != k) {
            for (int i = 0; i < 4; ++i) std::swap(m.a[4 * i + k], m.a[4 * i + bj]);
            std::swap(f.pc[k], f.pc[bj]);
        }
        if (std::abs(m(k, k)) < floor_piv) m(k, k) = floor_piv;
        for (int i = k + 1; i < 4; ++i) {
            m(i, k) /= m(k, k);
            for (int j = k + 1; j < 4; ++j) m(i, j) -= m(i, k) * m(k, j);
        }
    }
    f.lu = m;
    return f;
}

inline Vec4 lu_solve(const Lu4& f, const Vec4& b) {
    Vec4 y{};
    for (int i = 0; i < 4; ++i) {
        cplx s = b[f.pr[i]];
        for (int j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s;
    }
    Vec4 x{};
    for (int i = 3; i >= 0; --i) {
        cplx s = y[i];
        for (int j = i + 1; j < 4; ++j) s -= f.lu(i, j) * x[j];
        x[i] = s / f.lu(i, i);
    }
    Vec4 out{};
    for (int i = 0; i < 4; ++i) out[f.pc[i]] = x[i];
    return out;
}

}  // namespace detail

struct EigenSystem {
    std::array<cplx, 4> values{};   // sorted by (Re, Im)
    std::array<Vec4, 4> vectors{};  // unit norm, vectors[i] pairs with values[i]
    Spectrum spectrum;              // clusters carry geometric multiplicities
};

// Rank of (E - lambda I) with pivot threshold 1e-8 * ||E||_F; the geometric
// multiplicity of lambda is 4 - rank.
inline int geometric_multiplicity(const Mat4& e, cplx lambda) {
    const double thresh = 1e-8 * std::max(1e-300, e.fro_norm());
    Mat4 m = e;
    for (int i = 0; i < 4; ++i) m(i, i) -= lambda;
    int rank = 0;
    std::array<bool, 4> rdone{}, cdone{};
    for (int step = 0; step < 4; ++step) {
        double best = -1.0;
        int bi = -1, bj = -1;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (!rdone[i] && !cdone[j] && std::abs(m(i, j)) > best) {
                    best = std::abs(m(i, j));
                    bi = i;
                    bj = j;
                }
        if (best <= thresh) break;
        ++rank;
        rdone[bi] = cdone[bj] = true;
        for (int i = 0; i < 4; ++i) {
            if (rdone[i] || i == bi) continue;
            const cplx f = m(i, bj) / m(bi, bj);
            for (int j = 0; j < 4; ++j) m(i, j) -= f * m(bi, j);
        }
    }
    return 4 - rank;
}

// Basis of ker(E - lambda I) under the same pivot threshold. Vectors are not
// normalized; canonical_null_basis fixes the gauge.
inline std::vector<Vec4> null_space_basis(const Mat4& e, cplx lambda) {
    const double thresh = 1e-8 * std::max(1e-300, e.fro_norm());
    Mat4 m = e;
    for (int i = 0; i < 4; ++i) m(i, i) -= lambda;

    std::array<int, 4> col{0, 1, 2, 3};
    int rank = 0;
    for (int k = 0; k < 4; ++k) {
        double best = -1.0;
        int bi = k, bj = k;
        for (int i = k; i < 4; ++i)
            for (int j = k; j < 4; ++j)
                if (std::abs(m(i, j)) > best) {
                    best = std::abs(m(i, j));
                    bi = i;
                    bj = j;
                }
        if (best <= thresh) break;
        if (bi != k)
            for (int j = 0; j < 4; ++j) std::swap(m.a[4 * k + j], m.a[4 * bi + j]);
        if (bj != k) {
            for (int i = 0; i < 4; ++i) std::swap(m.a[4 * i + k], m.a[4 * i + bj]);
            std::swap(col[k], col[bj]);
        }
        for (int i = k + 1; i < 4; ++i) {
            const cplx f = m(i, k) / m(k, k);
            for (int j = k; j < 4; ++j) m(i, j) -= f * m(k, j);
        }
        ++rank;
    }

    std::vector<Vec4> basis;
    for (int f = rank; f < 4; ++f) {
        std::array<cplx, 4> x{};  // in permuted coordinates
        x[f] = 1.0;
        for (int i = rank - 1; i >= 0; --i) {
            cplx s = m(i, f);
            for (int j = i + 1; j < rank; ++j) s += m(i, j) * x[j];
            x[i] = -s / m(i, i);
        }
        Vec4 v{};
        for (int j = 0; j < 4; ++j) v[col[j]] = x[j];
        basis.push_back(v);
    }
    return basis;
}

// Bottom-up reduced echelon form of a null-space basis: scanning components
// 3..0, each picks at most one pivot vector, which is scaled to pivot 1 and
// eliminated from the others. The result depends only on the subspace, not
// on the basis handed in, so determinants built from it are gauge-fixed.
inline std::vector<Vec4> canonical_null_basis(std::vector<Vec4> b) {
    for (Vec4& v : b) {
        const double n = norm2(v);
        if (n == 0.0) throw precondition_error("zero vector in null-space basis");
        for (cplx& z : v) z /= n;
    }
    std::vector<int> pivot(b.size(), -1);
    for (int p = 3; p >= 0; --p) {
        int sel = -1;
        double best = 1e-8;
        for (size_t i = 0; i < b.size(); ++i)
            if (pivot[i] < 0 && std::abs(b[i][p]) > best) {
                best = std::abs(b[i][p]);
                sel = int(i);
            }
        if (sel < 0) continue;
        pivot[sel] = p;
        const cplx inv = 1.0 / b[sel][p];
        for (cplx& z : b[sel]) z *= inv;
        b[sel][p] = 1.0;
        for (size_t i = 0; i < b.size(); ++i) {
            if (int(i) == sel) continue;
            const cplx f = b[i][p];
            if (f == cplx(0.0)) continue;
            for (int j = 0; j < 4; ++j) b[i][j] -= f * b[sel][j];
            b[i][p] = 0.0;
        }
    }
    std::vector<std::pair<int, Vec4>> tagged;
    for (size_t i = 0; i < b.size(); ++i) {
        if (pivot[i] < 0) throw numerical_failure_error("null-space basis is degenerate");
        tagged.emplace_back(pivot[i], b[i]);
    }
    std::sort(tagged.begin(), tagged.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<Vec4> out;
    for (auto& [p, v] : tagged) out.push_back(v);
    return out;
}

// Full eigensystem: Schur form for values and starting vectors, multiple-root
// snapping shared with the closed-form route, rank-revealing kernels for
// multiple eigenvalues, inverse iteration for the rest.
inline EigenSystem eig4(const Mat4& e) {
    EigenSystem out;
    const double nrm = e.fro_norm();
    if (nrm == 0.0) {
        for (int i = 0; i < 4; ++i) out.vectors[i][i] = 1.0;
        out.spectrum = spectrum_from_roots(out.values);
        for (RootCluster& c : out.spectrum.clusters) c.geometric = c.algebraic;
        return out;
    }

    Mat4 t = e * cplx(1.0 / nrm), q;
    detail::schur4(t, q);

    std::array<cplx, 4> vals;
    for (int i = 0; i < 4; ++i) vals[i] = t(i, i) * nrm;

    // Schur values are backward stable as they stand; polishing them against
    // the characteristic polynomial trades that for root-condition noise near
    // a multiple root. Snapping is still wanted -- QR scatters a defective
    // m-fold value over an eps^(1/m) disc -- and refine polishes the snapped
    // center itself, as a simple root of p^(m-1).
    const std::array<cplx, 4> raw = vals;
    const PolyCoeffs poly = complex_char_poly(e);
    refine_multiple_roots(vals, poly, nrm);  // QR scatter lives at matrix scale

    // sort values, remembering which Schur position each came from
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        if (vals[i].real() != vals[j].real()) return vals[i].real() < vals[j].real();
        return vals[i].imag() < vals[j].imag();
    });
    for (int i = 0; i < 4; ++i) out.values[i] = vals[order[i]];

    out.spectrum = spectrum_from_roots(out.values);
    for (RootCluster& c : out.spectrum.clusters)
        c.geometric = (c.algebraic == 1) ? 1 : geometric_multiplicity(e, c.value);

    // A snapped cluster is believed only if the matrix agrees. Refine glues
    // roots on polynomial evidence alone, and near-multiples of genuinely
    // separated eigenvalues can pass its derivative gates even though the
    // shared center serves no eigenvector. An empty kernel at the cluster
    // value unwinds the merge: members fall back to their raw Schur values.
    bool reverted = false;
    for (const RootCluster& cl : out.spectrum.clusters) {
        if (cl.algebraic < 2) continue;
        if (!null_space_basis(e, cl.value).empty()) continue;
        for (int idx : cl.members) vals[order[idx]] = raw[order[idx]];
        reverted = true;
    }
    if (reverted) {
        std::sort(order.begin(), order.end(), [&](int i, int j) {
            if (vals[i].real() != vals[j].real()) return vals[i].real() < vals[j].real();
            return vals[i].imag() < vals[j].imag();
        });
        for (int i = 0; i < 4; ++i) out.values[i] = vals[order[i]];
        out.spectrum = spectrum_from_roots(out.values);
        for (RootCluster& c : out.spectrum.clusters)
            c.geometric = (c.algebraic == 1) ? 1 : geometric_multiplicity(e, c.value);
    }

    // Multiple eigenvalues take their vectors straight from the rank-revealing
    // kernel of (E - lambda I): at a defective value the kernel direction is
    // orthogonal to the one inverse iteration amplifies, so iterating cannot
    // reach it. Defective clusters repeat their last kernel vector.
    std::array<bool, 4> have{};
    for (const RootCluster& cl : out.spectrum.clusters) {
        if (cl.algebraic < 2) continue;
        std::vector<Vec4> basis = null_space_basis(e, cl.value);
        for (Vec4& b : basis) {
            const double n = norm2(b);
            if (n > 0.0)
                for (cplx& z : b) z /= n;
        }
        if (basis.empty()) continue;  // kernel unresolved at this threshold; iterate below
        for (size_t j = 0; j < cl.members.size(); ++j) {
            const int idx = cl.members[j];
            const Vec4& b = basis[std::min(j, basis.size() - 1)];
            Vec4 res = e * b;
            for (int d = 0; d < 4; ++d) res[d] -= out.values[idx] * b[d];
            if (norm2(res) > 1e-9 * nrm)
                throw numerical_failure_error("eigenvector residual exceeds tolerance");
            out.vectors[idx] = b;
            have[idx] = true;
        }
    }

    for (int i = 0; i < 4; ++i) {
        if (have[i]) continue;
        const cplx lambda = out.values[i];
        const Vec4 y = detail::schur_vector(t, lambda / nrm, order[i], 1.0);
        Vec4 v = q * y;
        const double vn0 = norm2(v);
        if (vn0 > 0.0)
            for (cplx& z : v) z /= vn0;
        Mat4 m = e;
        for (int d = 0; d < 4; ++d) m(d, d) -= lambda;
        const detail::Lu4 f = detail::lu_full_pivot(m, 1e-15 * nrm);
        // keep the best iterate: a solve past convergence drifts off the kernel,
        // so the residual must gate every step, not just the last
        auto residual_of = [&](const Vec4& w) {
            Vec4 res = e * w;
            for (int d = 0; d < 4; ++d) res[d] -= lambda * w[d];
            return norm2(res);
        };
        Vec4 best = v;
        double best_res = residual_of(v);
        for (int it = 0; it < 3; ++it) {
            Vec4 w = detail::lu_solve(f, v);
            const double wn = norm2(w);
            if (!(wn > 0.0) || !std::isfinite(wn)) break;
            for (cplx& z : w) z /= wn;
            v = w;
            const double res = residual_of(v);
            if (res < best_res) {
                best_res = res;
                best = v;
            } else {
                break;
            }
        }
        if (best_res > 1e-9 * nrm) {
            // iteration stalls when nearby eigenvalues leave the LU-exposed
            // kernel inaccurate; the rank-revealing elimination is sharper
            for (Vec4 b : null_space_basis(e, lambda)) {
                const double n = norm2(b);
                if (!(n > 0.0)) continue;
                for (cplx& z : b) z /= n;
                const double res = residual_of(b);
                if (res < best_res) {
                    best_res = res;
                    best = b;
                }
            }
        }
        if (best_res > 1e-9 * nrm)
            throw numerical_failure_error("eigenvector residual exceeds tolerance");
        out.vectors[i] = best;
    }
    return out;
}

enum class VectorGauge { Canonical };

// det of the eigenvector matrix U in the canonical gauge: per degenerate
// cluster, columns are the echelon-canonical kernel basis of (E - lambda I);
// defective clusters (geometric < algebraic) repeat their last kernel vector,
// so the determinant vanishes exactly on exceptional loci. Cluster order:
// algebraic multiplicity desc, then Re desc, then Im desc.
inline cplx eigenvector_matrix_det(const Mat4& e, VectorGauge gauge = VectorGauge::Canonical) {
    if (gauge != VectorGauge::Canonical)
        throw gauge_unavailable_error("unknown eigenvector gauge");
    const EigenSystem es = eig4(e);
    Mat4 u;
    int col = 0;
    for (const RootCluster& c : es.spectrum.clusters) {
        std::vector<Vec4> basis = null_space_basis(e, c.value);
        if (basis.empty()) {
            // borderline cluster: the joint kernel at the mean is empty, but
            // each member root still carries its own direction
            for (int idx : c.members) {
                std::vector<Vec4> one = null_space_basis(e, es.values[idx]);
                if (one.empty())
                    throw numerical_failure_error("no kernel vector at eigenvalue");
                basis.push_back(one.front());
            }
        }
        basis = canonical_null_basis(basis);
        for (int k = 0; k < c.algebraic; ++k) {
            const Vec4& v = basis[std::min<size_t>(k, basis.size() - 1)];
            for (int i = 0; i < 4; ++i) u(i, col) = v[i];
            ++col;
        }
    }
    return det4(u);
}

enum class SpecialLocus { EL, EP4, DL3 };

struct SpecialVectors {
    // one (eigenvalue, eigenvector) entry per distinct eigendirection
    std::vector<std::pair<cplx, Vec4>> pairs;
};

// Closed-form eigenvectors on the degenerate loci of the restricted model
// (chi = xi_2 = 0, delta_omega_2 = 0). Residual-checked against the matrix
// built from the same parameters.
inline SpecialVectors special_eigenvectors(SpecialLocus locus, const ModelParams& raw) {
    const ModelParams p = normalized(raw);
    if (!p.simple() || p.delta_omega_2 != 0.0)
        throw precondition_error("closed-form vectors require the restricted model");
    const double gm = p.gamma_minus();
    const double u = p.u();
    const double sc = std::max({1.0, p.g, p.xi_1, std::abs(gm), std::abs(p.delta_omega_1)});
    const cplx I(0.0, 1.0);

    SpecialVectors out;
    switch (locus) {
        case SpecialLocus::EL: {
            if (std::abs(u) > 1e-9 * sc * sc)
                throw precondition_error("EL vectors require u = 0");
            if (p.g <= 0.0)
                throw precondition_error("EL vectors require g > 0");
            const double q = 2.0 * (p.g * p.g - gm * gm / 16.0);
            const cplx w = std::sqrt(cplx(16.0 * p.g * p.g - gm * gm));
            for (int sign = +1; sign >= -1; sign -= 2) {
                const cplx ws = double(sign) * w;
                Vec4 v;
                v[0] = -std::polar(1.0, p.phi_g - p.phi_1) * (I * gm + ws) / (4.0 * p.g);
                v[1] = -I * std::polar(1.0, 2.0 * p.phi_g - p.phi_1);
                v[2] = std::polar(1.0, p.phi_g) * (gm - I * ws) / (4.0 * p.g);
                v[3] = 1.0;
                const cplx lambda = double(sign) * I * std::sqrt(cplx(q / 2.0));
                out.pairs.emplace_back(lambda, v);
            }
            break;
        }
        case SpecialLocus::EP4: {
            if (std::abs(u) > 1e-9 * sc * sc)
                throw precondition_error("EP4 vectors require u = 0");
            if (p.g == 0.0 && gm == 0.0) {
                // fully diabolical corner: three independent directions
                Vec4 a{}, b{}, c{};
                a[3] = 1.0;
                b[0] = -I * std::polar(1.0, -p.phi_1);
                b[2] = 1.0;
                c[1] = 1.0;
                out.pairs.emplace_back(0.0, a);
                out.pairs.emplace_back(0.0, b);
                out.pairs.emplace_back(0.0, c);
                break;
            }
            if (std::abs(std::abs(gm) - 4.0 * p.g) > 1e-9 * sc)
                throw precondition_error("EP4 vectors require gamma_minus = +-4g");
            const double sign = (gm > 0.0) ? 1.0 : -1.0;
            Vec4 v;
            v[0] = -sign * I * std::polar(1.0, p.phi_g - p.phi_1);
            v[1] = -I * std::polar(1.0, 2.0 * p.phi_g - p.phi_1);
            v[2] = sign * std::polar(1.0, p.phi_g);
            v[3] = 1.0;
            out.pairs.emplace_back(0.0, v);
            break;
        }
        case SpecialLocus::DL3: {
            if (p.g != 0.0)
                throw precondition_error("DL3 vectors require g = 0");
            if (std::abs(u - gm * gm / 4.0) > 1e-9 * sc * sc)
                throw precondition_error("DL3 vectors require u = gamma_minus^2/4");
            if (p.xi_1 <= 0.0)
                throw precondition_error("DL3 vectors require xi_1 > 0");
            const cplx w = std::sqrt(cplx(4.0 * p.xi_1 * p.xi_1 - gm * gm));
            const cplx e1 = std::polar(1.0, -p.phi_1);
            Vec4 r1{}, r2{}, r3{}, r4{};
            r1[3] = 1.0;
            r2[0] = e1 * (gm - I * w) / (2.0 * p.xi_1);
            r2[2] = 1.0;
            r3[1] = 1.0;
            r4[0] = -e1 * (gm + I * w) / (2.0 * p.xi_1);
            r4[2] = 1.0;
            out.pairs.emplace_back(gm / 4.0, r1);
            out.pairs.emplace_back(gm / 4.0, r2);
            out.pairs.emplace_back(gm / 4.0, r3);
            out.pairs.emplace_back(-0.75 * gm, r4);
            break;
        }
    }

    const Mat4 e = traceless_dynamical_matrix(p);
    const double nrm = std::max(1.0, e.fro_norm());
    for (const auto& [lambda, v] : out.pairs) {
        Vec4 res = e * v;
        for (int d = 0; d < 4; ++d) res[d] -= lambda * v[d];
        if (norm2(res) > 1e-9 * nrm * norm2(v))
            throw numerical_failure_error("closed-form eigenvector fails residual check");
    }
    return out;
}

}  // namespace swt
