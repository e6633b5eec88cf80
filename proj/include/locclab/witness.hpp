// witness.hpp
// Multistart projected-gradient search for distinguishing-witness vectors:
// phi with <phi|U_k^dag U_l|phi> = delta_kl for all pairs, and greedy
// extension of a single witness to a full orthonormal witness basis.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

#include "locclab/core.hpp"

namespace locclab {

// f <= kEpsFeas (i.e. every residual <= 1e-9) counts as a witness.
inline constexpr double kEpsFeas = 1e-18;

struct WitnessObjectiveValue {
    double f = 0.0;
    std::map<std::pair<int, int>, cxd> residuals;  // (k,l), k<l -> <phi|U_k^dag U_l|phi>
};

enum class WitnessVerdict { WITNESS_FOUND, NO_WITNESS_FOUND };

struct WitnessReport {
    WitnessVerdict verdict = WitnessVerdict::NO_WITNESS_FOUND;
    Vec bestPhi;
    double bestF = 0.0;
    int restarts = 0;
    std::uint64_t seed = 0;
    std::vector<double> perRestartBestF;
};

struct WitnessBasisReport {
    std::vector<Vec> vectors;
    int completeness = 0;
    Mat pairwiseGram;
};

// Returns true (set indistinguishable outright) iff N > dim H_B.
inline bool check_nd_bound(const StateSet& ss) { return ss.size() > ss.dB; }

namespace detail {

// Pairwise products G_kl = U_k^dag U_l for k < l, precomputed once per solve.
struct PairProducts {
    std::vector<std::pair<int, int>> pairs;
    std::vector<Mat> g;       // G_kl
    std::vector<Mat> g_adj;   // G_kl^dag

    explicit PairProducts(const StateSet& ss) {
        for (int k = 0; k < ss.size(); ++k) {
            const Mat uk_dag = adjoint(ss.unitaries[static_cast<size_t>(k)]);
            for (int l = k + 1; l < ss.size(); ++l) {
                pairs.emplace_back(k, l);
                g.push_back(matmul(uk_dag, ss.unitaries[static_cast<size_t>(l)]));
                g_adj.push_back(adjoint(g.back()));
            }
        }
    }

    double value(const Vec& phi) const {
        double f = 0.0;
        for (const auto& gm : g) f += std::norm(vdot(phi, matvec(gm, phi)));
        return f;
    }

    // Wirtinger gradient df/dphi* = sum_kl [ r* G phi + r G^dag phi ].
    Vec gradient(const Vec& phi) const {
        Vec out(phi.size());
        for (size_t p = 0; p < g.size(); ++p) {
            const Vec gphi = matvec(g[p], phi);
            const cxd r = vdot(phi, gphi);
            const Vec gtphi = matvec(g_adj[p], phi);
            for (size_t i = 0; i < phi.size(); ++i)
                out[i] += std::conj(r) * gphi[i] + r * gtphi[i];
        }
        return out;
    }
};

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 step
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d4ecb9f1e4229dULL;
    return z ^ (z >> 31);
}

// Subtract components along the given orthonormal vectors.
inline void project_out(Vec& v, const std::vector<Vec>& basis) {
    for (const auto& b : basis) {
        const cxd ov = vdot(b, v);
        for (size_t i = 0; i < v.size(); ++i) v[i] -= ov * b[i];
    }
}

struct MinimizeResult {
    Vec phi;
    double f = 0.0;
};

// Projected gradient descent on the unit sphere with Armijo backtracking and
// renormalization retraction. When `ortho` is nonempty the penalty
// mu * sum |<p|phi>|^2 is added and iterates are kept in the orthogonal
// complement so the final vector is exactly orthogonal to earlier ones.
inline MinimizeResult minimize_on_sphere(const PairProducts& prods, Vec phi, int maxIters,
                                         const std::vector<Vec>& ortho = {}, double mu = 0.0,
                                         bool constrainComplement = false) {
    auto objective = [&](const Vec& v) {
        double f = prods.value(v);
        for (const auto& p : ortho) f += mu * std::norm(vdot(p, v));
        return f;
    };
    auto grad = [&](const Vec& v) {
        Vec g = prods.gradient(v);
        for (const auto& p : ortho) {
            const cxd ov = vdot(p, v);
            for (size_t i = 0; i < v.size(); ++i) g[i] += mu * ov * p[i];
        }
        return g;
    };
    auto retract = [&](Vec v) {
        if (constrainComplement) project_out(v, ortho);
        normalize(v);
        return v;
    };

    phi = retract(std::move(phi));
    double f = objective(phi);
    double step = 1.0;
    for (int it = 0; it < maxIters && f > 1e-22; ++it) {
        Vec g = grad(phi);
        // Tangent-space projection (f is phase invariant, so project the full
        // complex component along phi).
        const cxd along = vdot(phi, g);
        for (size_t i = 0; i < phi.size(); ++i) g[i] -= along * phi[i];
        if (constrainComplement) project_out(g, ortho);
        double gn2 = 0.0;
        for (const auto& x : g) gn2 += std::norm(x);
        if (gn2 <= 1e-30) break;

        double alpha = std::min(step * 2.0, 1.0);
        bool accepted = false;
        while (alpha > 1e-18) {
            Vec cand(phi.size());
            for (size_t i = 0; i < phi.size(); ++i) cand[i] = phi[i] - alpha * g[i];
            cand = retract(std::move(cand));
            const double fc = objective(cand);
            // c = 0.1: a weaker constant admits steps that merely reflect
            // across the valley and decay sublinearly.
            if (fc <= f - 0.1 * alpha * gn2) {
                phi = std::move(cand);
                f = fc;
                step = alpha;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break;
    }
    return {std::move(phi), f};
}

// Rotate the global phase so the largest-modulus component is real nonnegative.
inline void gauge_fix(Vec& phi) {
    size_t best = 0;
    double bm = -1.0;
    for (size_t i = 0; i < phi.size(); ++i)
        if (std::abs(phi[i]) > bm) {
            bm = std::abs(phi[i]);
            best = i;
        }
    if (bm <= 0.0) return;
    const cxd ph = phi[best] / bm;
    for (auto& v : phi) v /= ph;
}

}  // namespace detail

inline WitnessObjectiveValue objective(const Vec& phi, const StateSet& ss) {
    if (static_cast<int>(phi.size()) != ss.dB)
        throw std::invalid_argument("objective: phi dimension mismatch");
    WitnessObjectiveValue out;
    for (int k = 0; k < ss.size(); ++k) {
        const Mat uk_dag = adjoint(ss.unitaries[static_cast<size_t>(k)]);
        for (int l = k + 1; l < ss.size(); ++l) {
            const cxd r = vdot(phi, matvec(matmul(uk_dag, ss.unitaries[static_cast<size_t>(l)]), phi));
            out.residuals[{k, l}] = r;
            out.f += std::norm(r);
        }
    }
    return out;
}

inline Vec gradient(const Vec& phi, const StateSet& ss) {
    if (static_cast<int>(phi.size()) != ss.dB)
        throw std::invalid_argument("gradient: phi dimension mismatch");
    return detail::PairProducts(ss).gradient(phi);
}

struct SolveOptions {
    int restarts = 200;
    int maxIters = 2000;
    std::uint64_t seed = 1;
};

// Multistart minimization of f over the unit sphere. NO_WITNESS_FOUND is
// evidence only; certification of infeasibility is the prover's job.
inline WitnessReport solve_witness(const StateSet& ss, const SolveOptions& opt = {}) {
    if (opt.restarts < 1) throw std::invalid_argument("solve_witness: restarts < 1");
    if (opt.maxIters < 1) throw std::invalid_argument("solve_witness: maxIters < 1");
    const detail::PairProducts prods(ss);

    WitnessReport rep;
    rep.restarts = opt.restarts;
    rep.seed = opt.seed;
    rep.bestF = std::numeric_limits<double>::infinity();
    for (int r = 0; r < opt.restarts; ++r) {
        std::mt19937_64 rng(detail::mix_seed(opt.seed, static_cast<std::uint64_t>(r)));
        Vec start = random_unit_vector(ss.dB, rng);
        auto res = detail::minimize_on_sphere(prods, std::move(start), opt.maxIters);
        rep.perRestartBestF.push_back(res.f);
        if (res.f < rep.bestF) {
            rep.bestF = res.f;
            rep.bestPhi = std::move(res.phi);
        }
        if (rep.bestF <= 1e-22) {
            // Remaining restarts cannot improve the verdict; keep the
            // recorded per-restart list short-circuited but deterministic.
            break;
        }
    }
    detail::gauge_fix(rep.bestPhi);
    rep.verdict = rep.bestF <= kEpsFeas ? WitnessVerdict::WITNESS_FOUND
                                        : WitnessVerdict::NO_WITNESS_FOUND;
    return rep;
}

// Greedy basis construction: each new vector is steered away from the ones
// already found by the mu-weighted overlap penalty, then constrained exactly
// to their orthogonal complement and re-verified.
inline WitnessBasisReport find_witness_basis(const StateSet& ss, int restarts = 200,
                                             std::uint64_t seed = 1, int maxIters = 2000) {
    if (restarts < 1) throw std::invalid_argument("find_witness_basis: restarts < 1");
    const detail::PairProducts prods(ss);
    constexpr double kMu = 10.0;

    WitnessBasisReport rep;
    for (int m = 0; m < ss.dB; ++m) {
        double bestF = std::numeric_limits<double>::infinity();
        Vec bestPhi;
        for (int r = 0; r < restarts; ++r) {
            std::mt19937_64 rng(
                detail::mix_seed(seed, static_cast<std::uint64_t>(m) * 100003ULL + static_cast<std::uint64_t>(r)));
            Vec start = random_unit_vector(ss.dB, rng);
            // Penalty stage steers the search; complement-constrained polish
            // restores exact orthogonality while keeping f at its minimum.
            auto coarse = detail::minimize_on_sphere(prods, std::move(start), maxIters, rep.vectors, kMu);
            auto polished = detail::minimize_on_sphere(prods, std::move(coarse.phi), maxIters,
                                                       rep.vectors, 0.0, true);
            if (polished.f < bestF) {
                bestF = polished.f;
                bestPhi = std::move(polished.phi);
            }
            if (bestF <= 1e-22) break;
        }
        if (bestF > kEpsFeas) break;
        detail::gauge_fix(bestPhi);
        rep.vectors.push_back(std::move(bestPhi));
    }
    rep.completeness = static_cast<int>(rep.vectors.size());
    rep.pairwiseGram = Mat(rep.completeness, rep.completeness);
    for (int i = 0; i < rep.completeness; ++i)
        for (int j = 0; j < rep.completeness; ++j)
            rep.pairwiseGram(i, j) = vdot(rep.vectors[static_cast<size_t>(i)],
                                          rep.vectors[static_cast<size_t>(j)]);
    return rep;
}

}  // namespace locclab
