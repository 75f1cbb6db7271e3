#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "swt/swallowtail.hpp"

using swt::cplx;

namespace {

swt::LoopSpec straddling_loop() {
    swt::LoopSpec spec;
    spec.a_xi = 1.5;
    spec.m_xi = 0.1;
    spec.a_g = 1.4;
    spec.m_g = 0.1;
    spec.a_gamma = 0.1;
    spec.m_gamma = 2.0;
    spec.delta_omega_2 = 0.92;
    return spec;
}

swt::LoopSpec trivial_loop() {
    swt::LoopSpec spec;
    spec.a_xi = 1.5;
    spec.m_xi = 0.01;
    spec.a_g = 1.5;
    spec.m_g = 0.01;
    spec.a_gamma = 1.0;
    spec.m_gamma = 0.1;
    return spec;
}

// conjugation involution on the starting values: c(i) = j with v[j] ~ conj(v[i])
std::array<int, 4> conj_involution(const std::array<cplx, 4>& v, double tol) {
    std::array<int, 4> c{-1, -1, -1, -1};
    for (int i = 0; i < 4; ++i) {
        double best = tol;
        for (int j = 0; j < 4; ++j)
            if (std::abs(v[j] - std::conj(v[i])) <= best) {
                best = std::abs(v[j] - std::conj(v[i]));
                c[i] = j;
            }
    }
    return c;
}

}  // namespace

TEST_CASE("straddling loop braids two conjugate pairs") {
    const swt::BraidResult res = swt::run_braid(straddling_loop());

    REQUIRE(res.word.size() == 2);
    CHECK(res.word[0] == -1);
    CHECK(res.word[1] == 3);
    CHECK(res.invariants.exponent_sum == 0);
    CHECK(res.invariants.n_positive == 1);
    CHECK(res.invariants.n_negative == 1);
    REQUIRE(res.invariants.cycle_type.size() == 2);
    CHECK(res.invariants.cycle_type[0] == 2);
    CHECK(res.invariants.cycle_type[1] == 2);
    CHECK(res.strand_permutation == std::array<int, 4>{2, 3, 0, 1});
    CHECK(std::abs(res.tracked.min_gap - 0.301633700515544) < 1e-9);
    CHECK(res.tracked.strands.size() == size_t(res.tracked.phis.size()));
    CHECK(res.tracked.phis.size() == 1025);
}

TEST_CASE("strand sets stay closed under conjugation") {
    const swt::BraidResult res = swt::run_braid(straddling_loop());
    double scale = 1.0;
    for (const auto& snap : res.tracked.strands)
        for (const cplx& z : snap) scale = std::max(scale, std::abs(z));

    for (const auto& snap : res.tracked.strands) {
        for (const cplx& z : snap) {
            double best = 1e300;
            for (const cplx& w : snap) best = std::min(best, std::abs(w - std::conj(z)));
            CHECK(best <= 1e-9 * scale);
        }
    }

    // the monodromy must commute with the conjugation involution on the fiber
    const std::array<cplx, 4>& start = res.tracked.strands.front();
    const std::array<int, 4> c = conj_involution(start, 1e-9 * scale);
    for (int i = 0; i < 4; ++i) REQUIRE(c[i] >= 0);
    for (int i = 0; i < 4; ++i) CHECK(c[c[i]] == i);
    for (int i = 0; i < 4; ++i)
        CHECK(res.strand_permutation[c[i]] == c[res.strand_permutation[i]]);
}

TEST_CASE("braid output is resolution independent") {
    swt::LoopSpec spec = straddling_loop();
    spec.n_samples = 256;
    const swt::BraidResult lo = swt::run_braid(spec);
    spec.n_samples = 512;
    const swt::BraidResult hi = swt::run_braid(spec);
    CHECK(lo.word == hi.word);
    CHECK(lo.strand_permutation == hi.strand_permutation);
    CHECK(lo.invariants.cycle_type == hi.invariants.cycle_type);
}

TEST_CASE("trivial loop carries the identity braid") {
    const swt::BraidResult res = swt::run_braid(trivial_loop());
    CHECK(res.word.empty());
    CHECK(res.strand_permutation == std::array<int, 4>{0, 1, 2, 3});
    CHECK(res.invariants.exponent_sum == 0);
    CHECK(res.invariants.cycle_type == std::vector<int>{1, 1, 1, 1});
    CHECK(res.tracked.min_gap > 1.5);
}

TEST_CASE("loops touching a degeneracy are rejected with context") {
    swt::LoopSpec spec;
    spec.a_xi = 2.0;
    spec.m_xi = 0.3;
    spec.a_g = 1.0;
    spec.m_g = 0.0;  // xi_1 = 2g exactly at phi = pi/2: two real double roots
    try {
        swt::run_braid(spec);
        FAIL("expected a degeneracy rejection");
    } catch (const swt::degeneracy_error& e) {
        CHECK(std::string(e.what()).find("min root gap") != std::string::npos);
    }
}

TEST_CASE("braid word invariants in isolation") {
    const swt::BraidInvariants ab = swt::braid_invariants({-1, 3});
    CHECK(ab.slot_permutation == std::array<int, 4>{1, 0, 3, 2});
    CHECK(ab.cycle_type == std::vector<int>{2, 2});
    CHECK(ab.exponent_sum == 0);

    const swt::BraidInvariants id = swt::braid_invariants({});
    CHECK(id.slot_permutation == std::array<int, 4>{0, 1, 2, 3});
    CHECK(id.cycle_type == std::vector<int>{1, 1, 1, 1});

    const swt::BraidInvariants sq = swt::braid_invariants({1, 1});
    CHECK(sq.slot_permutation == std::array<int, 4>{0, 1, 2, 3});
    CHECK(sq.exponent_sum == 2);
    CHECK(sq.n_positive == 2);
    CHECK(sq.n_negative == 0);

    CHECK_THROWS_AS(swt::braid_invariants({4}), swt::precondition_error);
    CHECK_THROWS_AS(swt::braid_invariants({0}), swt::precondition_error);
}

TEST_CASE("tracking rejects unusable inputs") {
    swt::TrackedStrands t;
    t.phis = {0.0};
    t.strands = {{cplx(1.0), cplx(2.0), cplx(3.0), cplx(4.0)}};
    CHECK_THROWS_AS(swt::extract_permutation(t), swt::precondition_error);
    CHECK_THROWS_AS(swt::extract_braid_word(t), swt::precondition_error);
}
