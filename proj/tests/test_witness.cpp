#include <doctest.h>

#include "locclab/witness.hpp"

using namespace locclab;

namespace {

Vec basis_vec(int d, int j) {
    Vec v(static_cast<size_t>(d));
    v[static_cast<size_t>(j)] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("check_nd_bound: true iff N exceeds Bob's dimension") {
    std::vector<WeylIndex> idx = {{0, 0, 2}, {0, 1, 2}};
    CHECK_FALSE(check_nd_bound(weyl_state_set(idx)));
    idx.push_back({1, 0, 2});
    CHECK(check_nd_bound(weyl_state_set(idx)));
}

TEST_CASE("objective: computational basis vector against a pure shift") {
    // <e0| U_{0,1} |e0> = 0, so the single residual vanishes.
    const auto ss = weyl_state_set({{0, 0, 2}, {0, 1, 2}});
    const auto val = objective(basis_vec(2, 0), ss);
    CHECK(val.f == 0.0);
    CHECK(std::abs(val.residuals.at({0, 1})) == 0.0);
}

TEST_CASE("objective: diagonal pair leaves residual 1 on a basis vector") {
    // <e0| U_{1,0} |e0> = w^0 = 1.
    const auto ss = weyl_state_set({{0, 0, 2}, {1, 0, 2}});
    const auto val = objective(basis_vec(2, 0), ss);
    CHECK(val.f == doctest::Approx(1.0));
    CHECK(std::abs(val.residuals.at({0, 1}) - 1.0) < 1e-15);
}

TEST_CASE("objective: uniform vector against a pure shift gives |1/d * d * (1/d)| terms") {
    // phi = (1,1)/sqrt(2): <phi|U_{0,1}|phi> = 1, so f = 1.
    const auto ss = weyl_state_set({{0, 0, 2}, {0, 1, 2}});
    Vec phi = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    CHECK(objective(phi, ss).f == doctest::Approx(1.0));
}

TEST_CASE("objective: invariant under a common left unitary and global phase") {
    std::mt19937_64 rng(3);
    for (int d = 2; d <= 4; ++d) {
        StateSet ss;
        ss.dA = ss.dB = d;
        ss.base = phi_plus(d);
        ss.unitaries = {make_weyl({0, 0, d}), make_weyl({1, 1, d})};
        const Mat v = random_unitary(d, rng);
        StateSet rotated = ss;
        for (auto& u : rotated.unitaries) u = matmul(v, u);

        const Vec phi = random_unit_vector(d, rng);
        Vec phased = phi;
        for (auto& x : phased) x *= std::polar(1.0, 0.7);

        const double f0 = objective(phi, ss).f;
        CHECK(objective(phi, rotated).f == doctest::Approx(f0).epsilon(1e-10));
        CHECK(objective(phased, ss).f == doctest::Approx(f0).epsilon(1e-10));
    }
}

TEST_CASE("gradient: matches central finite differences in real coordinates") {
    // For real f and Wirtinger gradient g = df/dphi*:
    //   df/dRe(phi_i) = 2 Re(g_i),  df/dIm(phi_i) = 2 Im(g_i).
    std::mt19937_64 rng(17);
    for (int d : {3, 5}) {
        const auto ss = weyl_state_set({{0, 0, d}, {1, 1, d}, {2, 1, d}});
        const detail::PairProducts prods(ss);
        const Vec phi = random_unit_vector(d, rng);
        const Vec g = gradient(phi, ss);
        const double h = 1e-6;
        for (int i = 0; i < d; ++i) {
            Vec plus = phi, minus = phi;
            plus[static_cast<size_t>(i)] += h;
            minus[static_cast<size_t>(i)] -= h;
            const double dRe = (prods.value(plus) - prods.value(minus)) / (2 * h);
            plus = phi;
            minus = phi;
            plus[static_cast<size_t>(i)] += cxd{0, h};
            minus[static_cast<size_t>(i)] -= cxd{0, h};
            const double dIm = (prods.value(plus) - prods.value(minus)) / (2 * h);
            CHECK(dRe == doctest::Approx(2.0 * g[static_cast<size_t>(i)].real()).epsilon(1e-5));
            CHECK(dIm == doctest::Approx(2.0 * g[static_cast<size_t>(i)].imag()).epsilon(1e-5));
        }
    }
}

TEST_CASE("solve_witness: pure shift pair in d=2 has a basis-vector witness") {
    const auto ss = weyl_state_set({{0, 0, 2}, {0, 1, 2}});
    const auto rep = solve_witness(ss, {.restarts = 20, .maxIters = 500, .seed = 1});
    CHECK(rep.verdict == WitnessVerdict::WITNESS_FOUND);
    CHECK(rep.bestF <= kEpsFeas);
    CHECK(std::abs(norm(rep.bestPhi) - 1.0) < 1e-12);
    CHECK(objective(rep.bestPhi, ss).f <= kEpsFeas);
}

TEST_CASE("solve_witness: full shift family in d=4 is witnessed") {
    const auto ss = weyl_state_set({{0, 0, 4}, {0, 1, 4}, {0, 2, 4}, {0, 3, 4}});
    const auto rep = solve_witness(ss, {.restarts = 30, .maxIters = 1000, .seed = 1});
    CHECK(rep.verdict == WitnessVerdict::WITNESS_FOUND);
    CHECK(objective(rep.bestPhi, ss).f <= kEpsFeas);
}

TEST_CASE("solve_witness: known infeasible 4-state set in d=4 finds no witness") {
    const auto ss = weyl_state_set({{0, 0, 4}, {1, 1, 4}, {3, 2, 4}, {3, 1, 4}});
    const auto rep = solve_witness(ss, {.restarts = 60, .maxIters = 2000, .seed = 1});
    CHECK(rep.verdict == WitnessVerdict::NO_WITNESS_FOUND);
    CHECK(rep.bestF > kEpsFeas);
}

TEST_CASE("solve_witness: deterministic for a fixed seed") {
    const auto ss = weyl_state_set({{0, 0, 3}, {1, 1, 3}, {2, 2, 3}});
    const SolveOptions opt{.restarts = 10, .maxIters = 300, .seed = 42};
    const auto a = solve_witness(ss, opt);
    const auto b = solve_witness(ss, opt);
    CHECK(a.bestF == b.bestF);
    CHECK(a.perRestartBestF == b.perRestartBestF);
    REQUIRE(a.bestPhi.size() == b.bestPhi.size());
    for (size_t i = 0; i < a.bestPhi.size(); ++i) CHECK(a.bestPhi[i] == b.bestPhi[i]);
}

TEST_CASE("solve_witness: gauge fixing leaves the largest component real nonnegative") {
    const auto ss = weyl_state_set({{0, 0, 3}, {0, 1, 3}});
    const auto rep = solve_witness(ss, {.restarts = 10, .maxIters = 500, .seed = 5});
    REQUIRE(rep.verdict == WitnessVerdict::WITNESS_FOUND);
    double bm = -1.0;
    size_t best = 0;
    for (size_t i = 0; i < rep.bestPhi.size(); ++i)
        if (std::abs(rep.bestPhi[i]) > bm) {
            bm = std::abs(rep.bestPhi[i]);
            best = i;
        }
    CHECK(rep.bestPhi[best].real() >= 0.0);
    CHECK(std::abs(rep.bestPhi[best].imag()) < 1e-9);
}

TEST_CASE("solve_witness rejects bad options") {
    const auto ss = weyl_state_set({{0, 0, 2}, {0, 1, 2}});
    CHECK_THROWS_AS(solve_witness(ss, {.restarts = 0}), std::invalid_argument);
    CHECK_THROWS_AS(solve_witness(ss, {.restarts = 1, .maxIters = 0}), std::invalid_argument);
}

TEST_CASE("find_witness_basis: pure shifts admit a complete basis") {
    const auto ss = weyl_state_set({{0, 0, 3}, {0, 1, 3}, {0, 2, 3}});
    const auto rep = find_witness_basis(ss, 30, 1, 800);
    REQUIRE(rep.completeness == 3);
    for (const auto& v : rep.vectors) CHECK(objective(v, ss).f <= kEpsFeas);
    CHECK(max_abs_diff(rep.pairwiseGram, Mat::identity(3)) < 1e-9);
}

TEST_CASE("find_witness_basis: infeasible set yields an empty basis") {
    const auto ss = weyl_state_set({{0, 0, 4}, {1, 1, 4}, {3, 2, 4}, {3, 1, 4}});
    const auto rep = find_witness_basis(ss, 15, 1, 600);
    CHECK(rep.completeness == 0);
}
