#include <doctest.h>

#include "locclab/prover.hpp"
#include "locclab/trace_check.hpp"

using namespace locclab;

namespace {

// The three benchmark subsets (d = 4, 5, 6) with mechanized proofs.
const std::vector<WeylIndex> kSetD4 = {{0, 0, 4}, {1, 1, 4}, {3, 2, 4}, {3, 1, 4}};
const std::vector<WeylIndex> kSetD5 = {{0, 0, 5}, {0, 1, 5}, {3, 1, 5}, {2, 2, 5}};
const std::vector<WeylIndex> kSetD6 = {{0, 0, 6}, {0, 1, 6}, {4, 1, 6}, {1, 2, 6}, {3, 3, 6}};

bool has_step(const ProofTrace& tr, const std::string& kind) {
    for (const auto& s : tr.steps)
        if (s.kind == kind) return true;
    return false;
}

const ProofStep* find_step(const ProofTrace& tr, const std::string& kind) {
    for (const auto& s : tr.steps)
        if (s.kind == kind) return &s;
    return nullptr;
}

}  // namespace

TEST_CASE("build_condition_table: single pair in d=2") {
    const auto table = build_condition_table({{0, 0, 2}, {0, 1, 2}});
    REQUIRE(table.conditions.size() == 1);
    CHECK(table.conditions[0] == Condition{1, 0, false});
}

TEST_CASE("build_condition_table: d=4 benchmark set") {
    const auto table = build_condition_table(kSetD4);
    const std::vector<Condition> expected = {
        {0, 2, false},          // pair (1,1)-(3,1)
        {1, 0, true},           // pair (3,2)-(3,1), conjugated from shift 3
        {1, 1, false}, {1, 2, false}, {1, 3, false},
        {2, 1, true},           // pair (0,0)-(3,2), self-conjugate shift, exponent folded
    };
    CHECK(table.conditions == expected);
    CHECK(table.exponents_at(1) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("build_condition_table: d=6 benchmark set has d-1 shift-1 exponents") {
    const auto table = build_condition_table(kSetD6);
    CHECK(table.exponents_at(1) == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(table.exponents_at(0) == std::vector<int>{2});
    CHECK(table.exponents_at(3) == std::vector<int>{3});
}

TEST_CASE("build_condition_table: input validation") {
    CHECK_THROWS_AS(build_condition_table({{0, 0, 4}}), std::invalid_argument);
    CHECK_THROWS_AS(build_condition_table({{0, 0, 4}, {0, 0, 4}}), std::invalid_argument);
    CHECK_THROWS_AS(build_condition_table({{0, 0, 4}, {0, 1, 3}}), std::invalid_argument);
    CHECK_THROWS_AS(build_condition_table({{0, 0, 2}, {0, 1, 2}, {1, 0, 2}}), std::invalid_argument);
}

TEST_CASE("canonical conditions have the same vanishing magnitude as their raw form") {
    // Conjugating and reindexing maps (t, e) to (d-t, d-e) without changing
    // |sum_j w^(e j) phi_j phi_{j+t}^*|.
    std::mt19937_64 rng(23);
    for (int d = 2; d <= 6; ++d) {
        const auto w = root_of_unity_table(d);
        auto cond_value = [&](const Vec& phi, int t, int e) {
            cxd s{};
            for (int j = 0; j < d; ++j)
                s += w[static_cast<size_t>(mod_d(static_cast<long long>(e) * j, d))] * phi[static_cast<size_t>(j)] *
                     std::conj(phi[static_cast<size_t>(mod_d(j + t, d))]);
            return s;
        };
        for (int rep = 0; rep < 20; ++rep) {
            const Vec phi = random_unit_vector(d, rng);
            for (int t = 0; t < d; ++t)
                for (int e = 0; e < d; ++e)
                    CHECK(std::abs(cond_value(phi, t, e)) ==
                          doctest::Approx(std::abs(cond_value(phi, mod_d(d - t, d), mod_d(d - e, d))))
                              .epsilon(1e-10));
        }
    }
}

TEST_CASE("forced_proportionality: d=5 benchmark pins the missing exponent") {
    const auto prop = forced_proportionality(build_condition_table(kSetD5));
    REQUIRE(prop.has_value());
    CHECK(prop->t0 == 1);
    CHECK(prop->n4 == 1);
    CHECK_FALSE(prop->forcedZero);
}

TEST_CASE("forced_proportionality: d=6 benchmark") {
    const auto prop = forced_proportionality(build_condition_table(kSetD6));
    REQUIRE(prop.has_value());
    CHECK(prop->t0 == 1);
    CHECK(prop->n4 == 5);
    CHECK_FALSE(prop->forcedZero);
}

TEST_CASE("forced_proportionality: d=4 benchmark carries all exponents, lambda forced to zero") {
    const auto prop = forced_proportionality(build_condition_table(kSetD4));
    REQUIRE(prop.has_value());
    CHECK(prop->t0 == 1);
    CHECK(prop->forcedZero);
    CHECK(prop->n4 == 0);  // the folded shift-1 condition
}

TEST_CASE("forced_proportionality: too few exponents yields nothing") {
    const auto table = build_condition_table({{0, 0, 4}, {0, 1, 4}});  // single (1,0)
    CHECK_FALSE(forced_proportionality(table).has_value());
}

TEST_CASE("refute_lambda_nonzero: aligned conditions found for the benchmarks") {
    auto step5 = refute_lambda_nonzero(build_condition_table(kSetD5), 1, 1);
    REQUIRE(step5.has_value());
    auto f5 = detail::parse_fields(step5->payload);
    CHECK(f5.at("t") == "2");
    CHECK(f5.at("e") == "2");

    auto step6 = refute_lambda_nonzero(build_condition_table(kSetD6), 1, 5);
    REQUIRE(step6.has_value());
    auto f6 = detail::parse_fields(step6->payload);
    CHECK(f6.at("t") == "3");
    CHECK(f6.at("e") == "3");
}

TEST_CASE("refute_lambda_nonzero: no aligned condition yields nothing") {
    // Table {(1,0),(1,1),(1,2),(2,1)} in d=4 has no condition with e = t*3 mod 4.
    const auto table = build_condition_table({{0, 0, 4}, {0, 1, 4}, {1, 2, 4}, {3, 3, 4}});
    CHECK(table.exponents_at(1) == std::vector<int>{0, 1, 2});
    CHECK_FALSE(refute_lambda_nonzero(table, 1, 3).has_value());
}

TEST_CASE("refute_lambda_zero: d=5 benchmark kills every independent support via shift 0") {
    const auto steps = refute_lambda_zero(build_condition_table(kSetD5), 1);
    REQUIRE(steps.has_value());
    for (const auto& s : *steps) {
        CHECK(s.kind == "SUPPORT");
        const auto fields = detail::parse_fields(s.payload);
        CHECK((fields.at("refute") == "NORMALIZATION" || fields.at("refute") == "SHIFT0"));
    }
}

TEST_CASE("refute_lambda_zero: d=6 benchmark needs rank propagation on the 3-element supports") {
    const auto steps = refute_lambda_zero(build_condition_table(kSetD6), 1);
    REQUIRE(steps.has_value());
    bool sawRank = false;
    for (const auto& s : *steps)
        if (detail::parse_fields(s.payload).at("refute") == "RANK") sawRank = true;
    CHECK(sawRank);
}

TEST_CASE("refute_lambda_zero: missing shift-0 conditions leave supports standing") {
    const auto table = build_condition_table({{0, 0, 4}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}});
    CHECK_FALSE(refute_lambda_zero(table, 1).has_value());
}

TEST_CASE("prove_infeasible: all three benchmarks certify INFEASIBLE") {
    for (const auto& set : {kSetD4, kSetD5, kSetD6}) {
        const auto trace = prove_infeasible(set);
        CHECK(trace.outcome == ProofOutcome::INFEASIBLE);
        CHECK(has_step(trace, "TABLE"));
        CHECK(has_step(trace, "PROPORTIONALITY"));
        CHECK(has_step(trace, "LAMBDA_NONZERO"));
        CHECK(has_step(trace, "SUPPORT"));
    }
}

TEST_CASE("prove_infeasible: d=4 benchmark records the forced-zero proportionality") {
    const auto trace = prove_infeasible(kSetD4);
    const auto* prop = find_step(trace, "PROPORTIONALITY");
    REQUIRE(prop != nullptr);
    const auto fields = detail::parse_fields(prop->payload);
    CHECK(fields.at("t0") == "1");
    CHECK(fields.at("n4") == "0");
    CHECK(fields.at("full") == "1");
}

TEST_CASE("prove_infeasible: relabeled d=5 benchmark goes through a coprime anchor") {
    // The d=5 benchmark with positions relabeled j -> 2j: the anchor shift
    // becomes 2 and the proof must pass through a RELABEL step.
    const std::vector<WeylIndex> set = {{0, 0, 5}, {0, 2, 5}, {4, 2, 5}, {1, 4, 5}};
    const auto trace = prove_infeasible(set);
    CHECK(trace.outcome == ProofOutcome::INFEASIBLE);
    const auto* rl = find_step(trace, "RELABEL");
    REQUIRE(rl != nullptr);
    CHECK(detail::parse_fields(rl->payload).at("t0") == "2");
}

TEST_CASE("prove_infeasible: non-coprime heavy shift is INCONCLUSIVE") {
    // Shift 2 in d=4 carries three exponents but gcd(2,4) != 1, so it cannot
    // anchor the chain argument.
    const std::vector<WeylIndex> set = {{0, 0, 4}, {1, 0, 4}, {0, 2, 4}, {2, 2, 4}};
    const auto trace = prove_infeasible(set);
    CHECK(trace.outcome == ProofOutcome::INCONCLUSIVE);
    CHECK(has_step(trace, "NO_ANCHOR"));
}

TEST_CASE("prove_infeasible: witnessed pure-shift family is INCONCLUSIVE") {
    const auto trace = prove_infeasible({{0, 0, 4}, {0, 1, 4}, {0, 2, 4}, {0, 3, 4}});
    CHECK(trace.outcome == ProofOutcome::INCONCLUSIVE);
    CHECK(has_step(trace, "NO_ANCHOR"));
}

TEST_CASE("prove_infeasible: anchored set without an aligned condition is INCONCLUSIVE") {
    const auto trace = prove_infeasible({{0, 0, 4}, {0, 1, 4}, {1, 2, 4}, {3, 3, 4}});
    CHECK(trace.outcome == ProofOutcome::INCONCLUSIVE);
    CHECK(has_step(trace, "NO_ALIGNED_CONDITION"));
}

TEST_CASE("prove_infeasible: surviving support is reported UNREFUTED") {
    const auto trace = prove_infeasible({{0, 0, 4}, {0, 1, 4}, {1, 2, 4}, {2, 3, 4}});
    CHECK(trace.outcome == ProofOutcome::INCONCLUSIVE);
    CHECK(has_step(trace, "UNREFUTED"));
}

TEST_CASE("prove_infeasible: deterministic serialization") {
    CHECK(prove_infeasible(kSetD6).serialize() == prove_infeasible(kSetD6).serialize());
}

TEST_CASE("trace round-trip: serialize, parse, replay") {
    for (const auto& set : {kSetD4, kSetD5, kSetD6}) {
        const auto trace = prove_infeasible(set);
        const auto parsed = parse_trace(trace.serialize());
        CHECK(parsed.indices == trace.indices);
        CHECK(parsed.outcome == trace.outcome);
        const auto res = replay_check(parsed);
        CHECK(res.valid);
        CHECK(res.error.empty());
    }
}

TEST_CASE("trace round-trip covers the RELABEL step") {
    const std::vector<WeylIndex> set = {{0, 0, 5}, {0, 2, 5}, {4, 2, 5}, {1, 4, 5}};
    const auto parsed = parse_trace(prove_infeasible(set).serialize());
    CHECK(replay_check(parsed).valid);
}

TEST_CASE("replay_check rejects tampered traces") {
    auto trace = parse_trace(prove_infeasible(kSetD5).serialize());

    SUBCASE("wrong aligned exponent") {
        for (auto& s : trace.steps)
            if (s.kind == "LAMBDA_NONZERO") s.payload = "t=2 e=3 n4=1 align=0";
        CHECK_FALSE(replay_check(trace).valid);
    }
    SUBCASE("wrong n4") {
        for (auto& s : trace.steps)
            if (s.kind == "PROPORTIONALITY") s.payload = "t0=1 n4=2 full=0";
        CHECK_FALSE(replay_check(trace).valid);
    }
    SUBCASE("dropped support step") {
        for (size_t i = 0; i < trace.steps.size(); ++i)
            if (trace.steps[i].kind == "SUPPORT" && trace.steps[i].payload.find("SHIFT0") != std::string::npos) {
                trace.steps.erase(trace.steps.begin() + static_cast<long>(i));
                break;
            }
        CHECK_FALSE(replay_check(trace).valid);
    }
    SUBCASE("forged condition table") {
        trace.steps.front().payload = "d=5 idx=0:0,0:1,3:1,2:2 conds=1:0:0";
        CHECK_FALSE(replay_check(trace).valid);
    }
}

TEST_CASE("replay_check refuses INCONCLUSIVE traces") {
    const auto trace = prove_infeasible({{0, 0, 4}, {0, 1, 4}, {0, 2, 4}, {0, 3, 4}});
    CHECK_FALSE(replay_check(trace).valid);
}

TEST_CASE("parse_trace rejects malformed input") {
    CHECK_THROWS_AS(parse_trace("garbage\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_trace("OUTCOME: MAYBE\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_trace("STEP 1: TABLE | d=4 idx=0:0,1:1 conds=1:1:0\n"), std::invalid_argument);
}
