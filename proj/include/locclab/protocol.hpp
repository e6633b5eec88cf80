// protocol.hpp
// Construction and exact evaluation of the one-way (Alice-first) projective
// discrimination protocol built from a witness basis.

#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <tuple>

#include "locclab/core.hpp"
#include "locclab/witness.hpp"

namespace locclab {

struct OneWayProtocol {
    std::vector<Vec> aliceBasis;                // dA orthonormal vectors
    std::vector<std::vector<Vec>> bobBases;     // per Alice outcome m: full orthonormal basis
    std::vector<std::vector<int>> labeling;     // per (m, Bob outcome): state index, -1 = failure
};

struct ProtocolTranscript {
    // (true state i, Alice outcome m, Bob outcome j) -> P(m, j | i)
    std::map<std::tuple<int, int, int>, double> perOutcomeJoint;
    double successProbability = 0.0;
    double worstCaseSuccess = 0.0;
};

namespace detail {

// Extend the given orthonormal vectors to a full orthonormal basis of C^d
// using Gram-Schmidt against the canonical basis.
inline std::vector<Vec> complete_basis(std::vector<Vec> vs, int d) {
    for (int c = 0; c < d && static_cast<int>(vs.size()) < d; ++c) {
        Vec cand(static_cast<size_t>(d));
        cand[static_cast<size_t>(c)] = 1.0;
        project_out(cand, vs);
        if (norm(cand) < 1e-6) continue;
        normalize(cand);
        vs.push_back(std::move(cand));
    }
    if (static_cast<int>(vs.size()) != d)
        throw std::runtime_error("complete_basis: failed to complete");
    return vs;
}

}  // namespace detail

// Alice measures in { conj(phi_m) }, so her outcome m collapses Bob's side to
// U_i phi_m (up to normalization); Bob's conditional basis is { U_i phi_m },
// orthonormal by the witness property, completed by a failure projector when
// N < d.
inline OneWayProtocol build_protocol(const StateSet& ss, const WitnessBasisReport& basis) {
    if (ss.direction != Direction::AtoB)
        throw std::invalid_argument("build_protocol: direction must be AtoB");
    if (ss.dA != ss.dB) throw std::invalid_argument("build_protocol: requires dA == dB");
    if (basis.completeness != ss.dA)
        throw std::invalid_argument("build_protocol: incomplete witness basis");
    if (max_abs_diff(ss.base.amplitudes, phi_plus(ss.dA).amplitudes) > kEpsOrth)
        throw std::invalid_argument("build_protocol: base is not the standard maximally entangled state");

    const int d = ss.dA;
    const int n = ss.size();
    OneWayProtocol p;
    for (int m = 0; m < d; ++m) {
        Vec a = basis.vectors[static_cast<size_t>(m)];
        for (auto& v : a) v = std::conj(v);
        p.aliceBasis.push_back(std::move(a));

        std::vector<Vec> bob;
        std::vector<int> labels;
        for (int i = 0; i < n; ++i) {
            Vec v = matvec(ss.unitaries[static_cast<size_t>(i)], basis.vectors[static_cast<size_t>(m)]);
            normalize(v);
            bob.push_back(std::move(v));
            labels.push_back(i);
        }
        bob = detail::complete_basis(std::move(bob), d);
        while (static_cast<int>(labels.size()) < d) labels.push_back(-1);
        p.bobBases.push_back(std::move(bob));
        p.labeling.push_back(std::move(labels));
    }
    return p;
}

// Exact per-outcome joint distribution by matrix algebra, no sampling.
inline ProtocolTranscript evaluate_protocol(const StateSet& ss, const OneWayProtocol& p) {
    const int n = ss.size();
    if (static_cast<int>(p.aliceBasis.size()) != ss.dA)
        throw std::invalid_argument("evaluate_protocol: Alice basis size mismatch");

    ProtocolTranscript tr;
    double worst = 1.0;
    double avg = 0.0;
    for (int i = 0; i < n; ++i) {
        const BipartiteState psi = ss.derived_state(i);
        double correct = 0.0;
        for (int m = 0; m < static_cast<int>(p.aliceBasis.size()); ++m) {
            // Unnormalized Bob vector after Alice's outcome m.
            Vec v(static_cast<size_t>(ss.dB));
            for (int b = 0; b < ss.dB; ++b) {
                cxd s{};
                for (int a = 0; a < ss.dA; ++a)
                    s += std::conj(p.aliceBasis[static_cast<size_t>(m)][static_cast<size_t>(a)]) *
                         psi.amplitudes(a, b);
                v[static_cast<size_t>(b)] = s;
            }
            const auto& bob = p.bobBases[static_cast<size_t>(m)];
            for (int j = 0; j < static_cast<int>(bob.size()); ++j) {
                const double prob = std::norm(vdot(bob[static_cast<size_t>(j)], v));
                tr.perOutcomeJoint[{i, m, j}] = prob;
                if (p.labeling[static_cast<size_t>(m)][static_cast<size_t>(j)] == i) correct += prob;
            }
        }
        worst = std::min(worst, correct);
        avg += correct;
    }
    tr.successProbability = avg / n;
    tr.worstCaseSuccess = worst;
    return tr;
}

// Monte-Carlo cross-check of evaluate_protocol: sequential sampling of state
// choice, Alice outcome and Bob outcome. Deterministic for fixed seed.
inline double sample_protocol(const StateSet& ss, const OneWayProtocol& p, int trials,
                              std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("sample_protocol: trials < 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, ss.size() - 1);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    auto sample_from = [&](const std::vector<double>& probs) {
        double u = unif(rng) * std::accumulate(probs.begin(), probs.end(), 0.0);
        for (size_t k = 0; k < probs.size(); ++k) {
            u -= probs[k];
            if (u <= 0.0) return static_cast<int>(k);
        }
        return static_cast<int>(probs.size()) - 1;
    };

    int successes = 0;
    for (int t = 0; t < trials; ++t) {
        const int i = pick(rng);
        const BipartiteState psi = ss.derived_state(i);
        std::vector<double> pAlice;
        std::vector<Vec> postBob;
        for (const auto& am : p.aliceBasis) {
            Vec v(static_cast<size_t>(ss.dB));
            for (int b = 0; b < ss.dB; ++b) {
                cxd s{};
                for (int a = 0; a < ss.dA; ++a)
                    s += std::conj(am[static_cast<size_t>(a)]) * psi.amplitudes(a, b);
                v[static_cast<size_t>(b)] = s;
            }
            double pm = 0.0;
            for (const auto& x : v) pm += std::norm(x);
            pAlice.push_back(pm);
            postBob.push_back(std::move(v));
        }
        const int m = sample_from(pAlice);
        const auto& bob = p.bobBases[static_cast<size_t>(m)];
        std::vector<double> pBob;
        for (const auto& b : bob) pBob.push_back(std::norm(vdot(b, postBob[static_cast<size_t>(m)])));
        const int j = sample_from(pBob);
        if (p.labeling[static_cast<size_t>(m)][static_cast<size_t>(j)] == i) ++successes;
    }
    return static_cast<double>(successes) / trials;
}

}  // namespace locclab
