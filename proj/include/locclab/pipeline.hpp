// pipeline.hpp
// The decision pipeline shared by the CLI and the acceptance suite:
// N<=d bound check, witness search (transposing first for B->A), mechanized
// infeasibility proof for Weyl-typed inputs, witness-basis extension and
// protocol construction, plus batch sweeps over Weyl subsets.

#pragma once

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>

#include "locclab/core.hpp"
#include "locclab/prover.hpp"
#include "locclab/protocol.hpp"
#include "locclab/spec_io.hpp"
#include "locclab/witness.hpp"

namespace locclab {

struct DecideOptions {
    int restarts = 200;
    int maxIters = 2000;
    std::uint64_t seed = 1;
    bool runProver = true;
    bool runSimulator = true;
};

struct VerdictReport {
    bool boundViolated = false;
    std::optional<WitnessReport> solver;
    std::optional<ProofTrace> prover;
    int basisCompleteness = -1;                    // -1 = not attempted
    std::optional<ProtocolTranscript> protocol;
    std::vector<std::string> notes;

    bool decided() const {
        if (boundViolated) return true;
        if (solver && solver->verdict == WitnessVerdict::WITNESS_FOUND) return true;
        return prover && prover->outcome == ProofOutcome::INFEASIBLE;
    }
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Transposing a Weyl operator maps U_{n,m} to U_{n,-m} up to a global phase,
// which pairwise products cancel.
inline std::vector<WeylIndex> transpose_weyl_indices(const std::vector<WeylIndex>& indices) {
    std::vector<WeylIndex> out;
    for (const auto& idx : indices) out.push_back({idx.n, mod_d(-idx.m, idx.d), idx.d});
    return out;
}

}  // namespace detail

inline VerdictReport decide(const StateSetSpec& spec, const DecideOptions& opt = {}) {
    StateSet ss = spec.toStateSet();
    VerdictReport rep;

    if (check_nd_bound(ss)) {
        rep.boundViolated = true;
        rep.notes.push_back("N exceeds Bob's dimension: indistinguishable outright, pipeline stopped");
        return rep;
    }

    const bool transposed = ss.direction == Direction::BtoA;
    const StateSet solveSet = transposed ? transpose_set(ss) : ss;

    if (commutation_defect(ss) <= kEpsUnit)
        rep.notes.push_back(
            "all pairwise products commute: a witness for one direction yields one for the other by conjugation");

    SolveOptions sopt;
    sopt.restarts = opt.restarts;
    sopt.maxIters = opt.maxIters;
    sopt.seed = opt.seed;
    rep.solver = solve_witness(solveSet, sopt);

    if (opt.runProver && spec.allWeyl() && spec.basePhiPlus) {
        auto indices = spec.weylIndices();
        if (transposed) indices = detail::transpose_weyl_indices(indices);
        rep.prover = prove_infeasible(indices);
        if (rep.prover->outcome == ProofOutcome::INFEASIBLE &&
            rep.solver->verdict == WitnessVerdict::WITNESS_FOUND)
            throw std::runtime_error(
                "internal inconsistency: prover INFEASIBLE but solver found a witness");
    }

    if (rep.solver->verdict == WitnessVerdict::WITNESS_FOUND) {
        auto basis = find_witness_basis(solveSet, opt.restarts, opt.seed, opt.maxIters);
        rep.basisCompleteness = basis.completeness;
        if (opt.runSimulator && basis.completeness == solveSet.dA && spec.basePhiPlus)
            rep.protocol = evaluate_protocol(solveSet, build_protocol(solveSet, basis));
    } else {
        if (ss.dA == 2)
            rep.notes.push_back(
                "dA = 2 and no witness: the states are not perfectly distinguishable by any LOCC protocol with Alice first, two-way included");
        if (!rep.prover || rep.prover->outcome != ProofOutcome::INFEASIBLE)
            rep.notes.push_back(
                "no witness found numerically; this is evidence, not proof - see the infeasibility prover for certification");
    }
    return rep;
}

inline std::string render_verdict_text(const VerdictReport& rep) {
    std::string out;
    out += "bound_violated: " + std::string(rep.boundViolated ? "true" : "false") + "\n";
    if (rep.solver) {
        out += "solver_verdict: " + std::string(rep.solver->verdict == WitnessVerdict::WITNESS_FOUND
                                                    ? "WITNESS_FOUND"
                                                    : "NO_WITNESS_FOUND") + "\n";
        out += "solver_best_f: " + detail::fmt17(rep.solver->bestF) + "\n";
        out += "solver_restarts: " + std::to_string(rep.solver->restarts) + "\n";
        out += "solver_seed: " + std::to_string(rep.solver->seed) + "\n";
    }
    if (rep.prover)
        out += "prover_outcome: " + std::string(rep.prover->outcome == ProofOutcome::INFEASIBLE
                                                    ? "INFEASIBLE"
                                                    : "INCONCLUSIVE") + "\n";
    if (rep.basisCompleteness >= 0)
        out += "basis_completeness: " + std::to_string(rep.basisCompleteness) + "\n";
    if (rep.protocol) {
        out += "protocol_success: " + detail::fmt17(rep.protocol->successProbability) + "\n";
        out += "protocol_worst_case: " + detail::fmt17(rep.protocol->worstCaseSuccess) + "\n";
    }
    for (const auto& n : rep.notes) out += "note: " + n + "\n";
    out += "decided: " + std::string(rep.decided() ? "true" : "false") + "\n";
    return out;
}

// ---- Sweep over N-subsets of Weyl indices ----

struct SweepRow {
    std::vector<WeylIndex> indices;
    double bestF = 0.0;
    WitnessVerdict verdict = WitnessVerdict::NO_WITNESS_FOUND;
    ProofOutcome prover = ProofOutcome::INCONCLUSIVE;
    int basisCompleteness = 0;
    double protocolSuccess = -1.0;  // -1 = not evaluated
};

struct SweepOptions {
    int restarts = 200;
    int maxIters = 2000;
    std::uint64_t seed = 1;
    long limit = -1;         // cap on subset count, -1 = all
    bool canonicalize = true;  // fix the first index to (0,0)
    bool runProver = true;
    bool runSimulator = true;
    int threads = 0;         // 0 = LOCCLAB_THREADS or hardware concurrency
};

namespace detail {

inline int sweep_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LOCCLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

// Lexicographic enumeration of N-subsets of the d*d Weyl indices (flattened
// as n*d + m). Canonicalized sweeps fix the first element to (0,0): left-
// multiplying by U_1^dag preserves every pairwise residual, so the verdict is
// invariant under that normalization.
inline std::vector<std::vector<WeylIndex>> enumerate_weyl_subsets(int d, int n, bool canonicalize,
                                                                  long limit) {
    const int total = d * d;
    std::vector<std::vector<WeylIndex>> out;
    std::vector<int> pick(static_cast<size_t>(n));
    const int firstStart = canonicalize ? 0 : 0;
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (limit >= 0 && static_cast<long>(out.size()) >= limit) return;
        if (pos == n) {
            std::vector<WeylIndex> subset;
            for (int p : pick) subset.push_back({p / d, p % d, d});
            out.push_back(std::move(subset));
            return;
        }
        if (pos == 0 && canonicalize) {
            pick[0] = 0;  // (0,0)
            rec(1, 1);
            return;
        }
        for (int v = from; v < total; ++v) {
            pick[static_cast<size_t>(pos)] = v;
            rec(pos + 1, v + 1);
            if (limit >= 0 && static_cast<long>(out.size()) >= limit) return;
        }
    };
    rec(0, firstStart);
    return out;
}

}  // namespace detail

inline std::vector<SweepRow> sweep(int d, int n, const SweepOptions& opt = {}) {
    if (n < 2 || d < 2 || n > d || d > 8)
        throw std::invalid_argument("sweep: require 2 <= N <= d <= 8");
    const auto subsets = detail::enumerate_weyl_subsets(d, n, opt.canonicalize, opt.limit);
    std::vector<SweepRow> rows(subsets.size());

    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr firstError;
    std::mutex errMutex;
    auto worker = [&]() {
        try {
        for (;;) {
            if (failed.load()) return;
            const size_t i = next.fetch_add(1);
            if (i >= subsets.size()) return;
            SweepRow& row = rows[i];
            row.indices = subsets[i];
            const StateSet ss = weyl_state_set(subsets[i]);
            SolveOptions sopt;
            sopt.restarts = opt.restarts;
            sopt.maxIters = opt.maxIters;
            sopt.seed = opt.seed;
            const auto wr = solve_witness(ss, sopt);
            row.bestF = wr.bestF;
            row.verdict = wr.verdict;
            if (opt.runProver) {
                row.prover = prove_infeasible(subsets[i]).outcome;
                if (row.prover == ProofOutcome::INFEASIBLE && row.verdict == WitnessVerdict::WITNESS_FOUND)
                    throw std::runtime_error("internal inconsistency: prover INFEASIBLE on a witnessed set");
            }
            if (wr.verdict == WitnessVerdict::WITNESS_FOUND) {
                const auto basis = find_witness_basis(ss, opt.restarts, opt.seed, opt.maxIters);
                row.basisCompleteness = basis.completeness;
                if (opt.runSimulator && basis.completeness == d)
                    row.protocolSuccess = evaluate_protocol(ss, build_protocol(ss, basis)).successProbability;
            }
        }
        } catch (...) {
            std::scoped_lock lock(errMutex);
            if (!firstError) firstError = std::current_exception();
            failed.store(true);
        }
    };

    const int nthreads = std::min<int>(detail::sweep_thread_count(opt.threads),
                                       std::max<int>(1, static_cast<int>(subsets.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (firstError) std::rethrow_exception(firstError);
    return rows;
}

inline std::string sweep_csv_header() {
    return "indices,best_f,solver_verdict,prover_outcome,basis_completeness,protocol_success";
}

inline std::string sweep_row_csv(const SweepRow& row) {
    std::string idx;
    for (size_t i = 0; i < row.indices.size(); ++i) {
        if (i) idx += ";";
        idx += std::to_string(row.indices[i].n) + ":" + std::to_string(row.indices[i].m);
    }
    std::string out = idx;
    out += "," + detail::fmt17(row.bestF);
    out += "," + std::string(row.verdict == WitnessVerdict::WITNESS_FOUND ? "WITNESS_FOUND" : "NO_WITNESS_FOUND");
    out += "," + std::string(row.prover == ProofOutcome::INFEASIBLE ? "INFEASIBLE" : "INCONCLUSIVE");
    out += "," + std::to_string(row.basisCompleteness);
    out += "," + (row.protocolSuccess < 0 ? std::string("") : detail::fmt17(row.protocolSuccess));
    return out;
}

}  // namespace locclab
