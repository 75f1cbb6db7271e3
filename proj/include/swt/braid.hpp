#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "swt/errors.hpp"
#include "swt/parammap.hpp"
#include "swt/quartic.hpp"

namespace swt {

struct TrackedStrands {
    std::vector<double> phis;                 // n_samples + 1 values, 0 .. 2pi
    std::vector<std::array<cplx, 4>> strands; // strands[k][i]: strand i at phis[k]
    double min_gap = 0.0;                     // smallest pairwise root gap seen
};

namespace detail {

inline const std::array<std::array<int, 4>, 24>& all_perms4() {
    static const std::array<std::array<int, 4>, 24> perms = [] {
        std::array<std::array<int, 4>, 24> out{};
        std::array<int, 4> p{0, 1, 2, 3};
        int k = 0;
        do {
            out[k++] = p;
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return perms;
}

// best assignment b[p[i]] ~ a[i]; returns (perm, max single jump)
inline std::pair<std::array<int, 4>, double> match_sets(const std::array<cplx, 4>& a,
                                                        const std::array<cplx, 4>& b) {
    double best = std::numeric_limits<double>::infinity();
    std::array<int, 4> bp{0, 1, 2, 3};
    for (const auto& p : all_perms4()) {
        double cost = 0.0;
        for (int i = 0; i < 4; ++i) cost += std::abs(a[i] - b[p[i]]);
        if (cost < best) {
            best = cost;
            bp = p;
        }
    }
    double jump = 0.0;
    for (int i = 0; i < 4; ++i) jump = std::max(jump, std::abs(a[i] - b[bp[i]]));
    return {bp, jump};
}

inline double min_pair_gap(const std::array<cplx, 4>& v) {
    double g = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) g = std::min(g, std::abs(v[i] - v[j]));
    return g;
}

struct LoopSampler {
    const LoopSpec& spec;
    double min_gap = std::numeric_limits<double>::infinity();

    std::array<cplx, 4> operator()(double phi) {
        const Quartic c = forward_map(loop_point(spec, phi));
        const std::array<cplx, 4> roots = solve_depressed_quartic(c);
        const double gap = min_pair_gap(roots);
        min_gap = std::min(min_gap, gap);
        if (gap < 1e-7 * lambda_scale(c)) {
            char msg[128];
            std::snprintf(msg, sizeof msg,
                          "loop passes through (or too near) a degeneracy: "
                          "min root gap %.3g at phi=%.6g",
                          gap, phi);
            throw degeneracy_error(msg);
        }
        return roots;
    }
};

// Permutation carrying set(phi0) to set(phi1), refining the interval when a
// jump is large against the local gap; (phi0, a) and (phi1, b) are already
// sampled.
inline std::array<int, 4> continue_strands(LoopSampler& sample, double phi0,
                                           const std::array<cplx, 4>& a, double phi1,
                                           const std::array<cplx, 4>& b, int depth) {
    const auto [p, jump] = match_sets(a, b);
    const double gap = std::min(min_pair_gap(a), min_pair_gap(b));
    if (jump <= gap / 4.0) return p;
    if (depth >= 12)
        throw ambiguity_error("strand matching is ambiguous at maximum refinement");
    const double mid = 0.5 * (phi0 + phi1);
    const std::array<cplx, 4> m = sample(mid);
    const std::array<int, 4> p1 = continue_strands(sample, phi0, a, mid, m, depth + 1);
    const std::array<int, 4> p2 = continue_strands(sample, mid, m, phi1, b, depth + 1);
    std::array<int, 4> comp{};
    for (int i = 0; i < 4; ++i) comp[i] = p2[p1[i]];
    return comp;
}

}  // namespace detail

// Follows the four eigenvalues continuously around the loop. Matching between
// neighboring samples is by minimal total displacement, with automatic
// interval refinement whenever a jump is not small against the local root
// gap, so the stored strands are globally continuous at the base resolution.
inline TrackedStrands track_eigenvalues(const LoopSpec& spec) {
    validate_loop(spec);
    const int n = spec.n_samples;
    const double step = 2.0 * std::numbers::pi / n;

    detail::LoopSampler sample{spec};
    TrackedStrands out;
    out.phis.reserve(n + 1);
    out.strands.reserve(n + 1);

    std::array<cplx, 4> prev = sample(0.0);
    out.phis.push_back(0.0);
    out.strands.push_back(prev);  // solve output is (Re, Im)-sorted: fixed start order

    for (int k = 1; k <= n; ++k) {
        const double phi0 = (k - 1) * step, phi1 = k * step;
        const std::array<cplx, 4> cur = sample(phi1);
        const std::array<int, 4> p =
            detail::continue_strands(sample, phi0, prev, phi1, cur, 0);
        std::array<cplx, 4> ordered{};
        for (int i = 0; i < 4; ++i) ordered[i] = cur[p[i]];
        out.phis.push_back(phi1);
        out.strands.push_back(ordered);
        prev = ordered;
    }
    out.min_gap = sample.min_gap;
    return out;
}

// Monodromy by endpoint value matching: strand i ends where strand p[i]
// started. The loop is closed, so the optimal assignment has near-zero cost;
// a sloppy one means the tracking broke.
inline std::array<int, 4> extract_permutation(const TrackedStrands& t) {
    if (t.strands.size() < 2) throw precondition_error("need a full tracked loop");
    const std::array<cplx, 4>& start = t.strands.front();
    const std::array<cplx, 4>& end = t.strands.back();
    double scale = 1.0;
    for (const cplx& z : start) scale = std::max(scale, std::abs(z));

    double best = std::numeric_limits<double>::infinity(), second = best;
    std::array<int, 4> bp{0, 1, 2, 3};
    for (const auto& p : detail::all_perms4()) {
        double cost = 0.0;
        for (int i = 0; i < 4; ++i) cost += std::abs(end[i] - start[p[i]]);
        if (cost < best) {
            second = best;
            best = cost;
            bp = p;
        } else
            second = std::min(second, cost);
    }
    if (best > 1e-6 * scale)
        throw numerical_failure_error("loop endpoints do not close");
    if (second - best < 1e-9 * scale)
        throw ambiguity_error("endpoint matching is degenerate");
    return bp;
}

namespace detail {

// strand ids ordered by (Im, Re): the strand diagram's vertical order
inline std::array<int, 4> rank_order(const std::array<cplx, 4>& v) {
    std::array<int, 4> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) {
        if (v[i].imag() != v[j].imag()) return v[i].imag() < v[j].imag();
        return v[i].real() < v[j].real();
    });
    return idx;
}

}  // namespace detail

// Braid word in Artin generators from the Im-ordered strand diagram, freely
// reduced. Letter +/-k swaps vertical slots k-1 and k (1-based generators);
// the sign is positive when the strand moving up in Im has the smaller Re at
// the crossing -- Re is the depth axis of the diagram.
inline std::vector<int> extract_braid_word(const TrackedStrands& t) {
    if (t.strands.size() < 2) throw precondition_error("need a full tracked loop");
    std::vector<int> word;

    std::array<int, 4> cur = detail::rank_order(t.strands.front());
    for (size_t k = 0; k + 1 < t.strands.size(); ++k) {
        const std::array<int, 4> next = detail::rank_order(t.strands[k + 1]);
        if (next == cur) continue;
        std::array<int, 4> pos_next{};
        for (int slot = 0; slot < 4; ++slot) pos_next[next[slot]] = slot;

        double scale = 1.0;
        for (const cplx& z : t.strands[k]) scale = std::max(scale, std::abs(z));

        while (cur != next) {
            bool swapped = false;
            for (int i = 0; i < 3; ++i) {
                if (pos_next[cur[i]] <= pos_next[cur[i + 1]]) continue;
                const int up = cur[i], down = cur[i + 1];
                const double re_up =
                    0.5 * (t.strands[k][up].real() + t.strands[k + 1][up].real());
                const double re_down =
                    0.5 * (t.strands[k][down].real() + t.strands[k + 1][down].real());
                if (std::abs(re_up - re_down) <= 1e-12 * scale)
                    throw ambiguity_error("crossing depth is unresolved");
                const int letter = (re_up < re_down) ? (i + 1) : -(i + 1);
                word.push_back(letter);
                std::swap(cur[i], cur[i + 1]);
                swapped = true;
            }
            if (!swapped)
                throw numerical_failure_error("rank transition failed to decompose");
        }
    }

    std::vector<int> reduced;
    for (int letter : word) {
        if (!reduced.empty() && reduced.back() == -letter)
            reduced.pop_back();
        else
            reduced.push_back(letter);
    }
    return reduced;
}

struct BraidInvariants {
    std::array<int, 4> slot_permutation{};  // start slot -> end slot, from the word
    std::vector<int> cycle_type;            // lengths, descending
    int exponent_sum = 0;
    int n_positive = 0;
    int n_negative = 0;
};

inline BraidInvariants braid_invariants(const std::vector<int>& word) {
    BraidInvariants inv;
    std::array<int, 4> content{0, 1, 2, 3};  // content[slot] = starting slot
    for (int letter : word) {
        const int k = std::abs(letter);
        if (k < 1 || k > 3) throw precondition_error("letter out of range for 4 strands");
        std::swap(content[k - 1], content[k]);
        inv.exponent_sum += (letter > 0) ? 1 : -1;
        (letter > 0 ? inv.n_positive : inv.n_negative)++;
    }
    for (int slot = 0; slot < 4; ++slot) inv.slot_permutation[content[slot]] = slot;

    std::array<bool, 4> seen{};
    for (int i = 0; i < 4; ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = inv.slot_permutation[j];
            ++len;
        }
        inv.cycle_type.push_back(len);
    }
    std::sort(inv.cycle_type.rbegin(), inv.cycle_type.rend());
    return inv;
}

struct BraidResult {
    TrackedStrands tracked;
    std::array<int, 4> strand_permutation{};  // endpoint value matching
    std::vector<int> word;
    BraidInvariants invariants;
};

// Full pipeline with a cross-check: the word's slot permutation, conjugated
// by the starting rank order, must reproduce the value-matched monodromy.
inline BraidResult run_braid(const LoopSpec& spec) {
    BraidResult res;
    res.tracked = track_eigenvalues(spec);
    res.strand_permutation = extract_permutation(res.tracked);
    res.word = extract_braid_word(res.tracked);
    res.invariants = braid_invariants(res.word);

    const std::array<int, 4> pos0 = detail::rank_order(res.tracked.strands.front());
    for (int slot = 0; slot < 4; ++slot) {
        const int strand = pos0[slot];
        const int end_slot = res.invariants.slot_permutation[slot];
        if (res.strand_permutation[strand] != pos0[end_slot])
            throw numerical_failure_error("braid word disagrees with the monodromy");
    }
    return res;
}

}  // namespace swt
