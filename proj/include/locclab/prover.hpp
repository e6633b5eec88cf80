// prover.hpp
// Mechanized case-analysis proofs that no witness vector exists for a subset
// of generalized Bell states. The certificate is a line-oriented trace that an
// independent checker can replay without re-running the search.
//
// A pair (U_{n_k m_k}, U_{n_l m_l}) imposes the condition
//     sum_j w^(e j) phi_j phi_{j (+) t}^* = 0,   t = m_l - m_k, e = n_l - n_k (mod d),
// stored canonically with t in {0..floor(d/2)} (conjugation maps (t,e) to
// (d-t, d-e) without changing the vanishing set). When some shift t0 coprime
// to d carries at least d-1 distinct exponents, the correlation vector
// b(j) = phi_j^* phi_{j (+) t0} is annihilated by d-1 distinct characters and
// is therefore proportional to the remaining one: b(j) = lambda w^(n4 j).
// The lambda != 0 branch dies when any stored condition aligns with the
// character chain (e == t * n4 mod d), because substituting the chain products
// leaves a vanishing sum of strictly positive terms. The lambda == 0 branch
// forces the support of phi to be an independent set of the shift-t0
// circulant; each support is refuted by normalization, by joint shift-0
// strict-positivity, or by full-column-rank propagation of the restricted
// character system.

#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "locclab/core.hpp"

namespace locclab {

inline constexpr double kHullMargin = 1e-7;

struct Condition {
    int t = 0;            // shift, canonical: 0 <= t <= d/2
    int e = 0;            // exponent mod d
    bool folded = false;  // true if every raw pair producing it was conjugated

    auto operator<=>(const Condition&) const = default;
};

struct ConditionTable {
    int d = 0;
    std::vector<Condition> conditions;  // sorted by (t, e), deduplicated

    std::vector<int> exponents_at(int shift) const {
        std::vector<int> out;
        for (const auto& c : conditions)
            if (c.t == shift) out.push_back(c.e);
        return out;
    }
};

enum class ProofOutcome { INFEASIBLE, INCONCLUSIVE };

struct ProofStep {
    std::string kind;
    std::string payload;
};

struct ProofTrace {
    std::vector<WeylIndex> indices;
    std::vector<ProofStep> steps;
    ProofOutcome outcome = ProofOutcome::INCONCLUSIVE;

    std::string serialize() const {
        std::ostringstream os;
        int n = 0;
        for (const auto& s : steps) os << "STEP " << ++n << ": " << s.kind << " | " << s.payload << "\n";
        os << "OUTCOME: " << (outcome == ProofOutcome::INFEASIBLE ? "INFEASIBLE" : "INCONCLUSIVE") << "\n";
        return os.str();
    }
};

namespace detail {

// (t, e) -> folded, with "seen unfolded anywhere" winning over folded.
using RawTable = std::map<std::pair<int, int>, bool>;

inline void insert_canonical(RawTable& acc, int t, int e, bool folded, int d) {
    if (t > d / 2) {
        t = d - t;
        e = mod_d(-e, d);
        folded = !folded;
    } else if (mod_d(2 * t, d) == 0 && e > mod_d(-e, d)) {
        // self-conjugate shift (t = 0 or t = d/2): keep the smaller exponent
        e = mod_d(-e, d);
        folded = !folded;
    }
    auto [it, fresh] = acc.try_emplace({t, e}, folded);
    if (!fresh) it->second = it->second && folded;
}

inline ConditionTable finish_table(const RawTable& acc, int d) {
    ConditionTable table;
    table.d = d;
    for (const auto& [te, folded] : acc) table.conditions.push_back({te.first, te.second, folded});
    return table;
}

}  // namespace detail

inline ConditionTable build_condition_table(const std::vector<WeylIndex>& indices) {
    if (indices.size() < 2) throw std::invalid_argument("build_condition_table: need at least 2 indices");
    const int d = indices.front().d;
    if (d > 31) throw std::invalid_argument("build_condition_table: d too large");
    for (const auto& idx : indices) {
        idx.validate();
        if (idx.d != d) throw std::invalid_argument("build_condition_table: mixed dimensions");
    }
    if (static_cast<int>(indices.size()) > d)
        throw std::invalid_argument("build_condition_table: N > d");
    for (size_t k = 0; k < indices.size(); ++k)
        for (size_t l = k + 1; l < indices.size(); ++l)
            if (indices[k] == indices[l])
                throw std::invalid_argument("build_condition_table: repeated indices");

    detail::RawTable acc;
    for (size_t k = 0; k < indices.size(); ++k)
        for (size_t l = k + 1; l < indices.size(); ++l)
            detail::insert_canonical(acc, mod_d(indices[l].m - indices[k].m, d),
                                     mod_d(indices[l].n - indices[k].n, d), false, d);
    return detail::finish_table(acc, d);
}

struct Proportionality {
    int t0 = 0;              // anchor shift
    int n4 = 0;              // character exponent the correlation vector must follow
    bool forcedZero = false; // all d exponents present: lambda = 0 outright
};

// If some shift carries at least d-1 distinct exponents, the correlation
// vector is pinned to the single remaining character (exactness: distinct
// character rows are linearly independent). With all d exponents present the
// vector is forced to zero; n4 is then the exponent of the leftover
// (preferably folded) condition, which doubles as the aligned condition
// refuting lambda != 0.
inline std::optional<Proportionality> forced_proportionality(const ConditionTable& table) {
    if (table.conditions.empty()) throw std::invalid_argument("forced_proportionality: empty table");
    const int d = table.d;
    for (int t0 = 1; t0 <= d / 2; ++t0) {
        std::set<int> exps;
        for (const auto& c : table.conditions)
            if (c.t == t0) exps.insert(c.e);
        const int k = static_cast<int>(exps.size());
        if (k < d - 1) continue;
        Proportionality p;
        p.t0 = t0;
        if (k == d - 1) {
            for (int e = 0; e < d; ++e)
                if (!exps.contains(e)) p.n4 = e;
        } else {
            p.forcedZero = true;
            int pick = -1;
            for (const auto& c : table.conditions)
                if (c.t == t0 && c.folded && (pick < 0 || c.e < pick)) pick = c.e;
            if (pick < 0) pick = *exps.begin();
            p.n4 = pick;
        }
        return p;
    }
    return std::nullopt;
}

namespace detail {

inline int mod_inverse(int a, int d) {
    a = mod_d(a, d);
    for (int x = 1; x < d; ++x)
        if (mod_d(a * x, d) == 1) return x;
    throw std::invalid_argument("mod_inverse: not coprime");
}

// Relabel positions j -> t0*j so the anchor shift becomes 1: condition (t,e)
// maps to (t * t0^-1 mod d, e * t0 mod d), then re-canonicalized.
inline ConditionTable relabel_table(const ConditionTable& table, int t0) {
    const int d = table.d;
    const int inv = mod_inverse(t0, d);
    RawTable acc;
    for (const auto& c : table.conditions)
        insert_canonical(acc, mod_d(c.t * inv, d), mod_d(c.e * t0, d), c.folded, d);
    return finish_table(acc, d);
}

// Rank of a small complex matrix via pivoted elimination. Entries are roots
// of unity so a fixed threshold is safe at this scale.
inline int numeric_rank(std::vector<Vec> rows, size_t ncols) {
    int rank = 0;
    size_t col = 0;
    while (col < ncols && rank < static_cast<int>(rows.size())) {
        size_t piv = static_cast<size_t>(rank);
        double best = 0.0;
        for (size_t r = static_cast<size_t>(rank); r < rows.size(); ++r)
            if (std::abs(rows[r][col]) > best) {
                best = std::abs(rows[r][col]);
                piv = r;
            }
        if (best < 1e-9) {
            ++col;
            continue;
        }
        std::swap(rows[static_cast<size_t>(rank)], rows[piv]);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == static_cast<size_t>(rank)) continue;
            const cxd factor = rows[r][col] / rows[static_cast<size_t>(rank)][col];
            for (size_t c2 = col; c2 < ncols; ++c2)
                rows[r][c2] -= factor * rows[static_cast<size_t>(rank)][c2];
        }
        ++rank;
        ++col;
    }
    return rank;
}

// Max over { y : y >= 0, sum y = 1, A y = 0 } of min_j y_j, by basic-solution
// enumeration (at most ~10 variables here). Returns a negative value when the
// polytope is empty.
inline double max_min_positive_combination(const std::vector<std::vector<double>>& arows, int nvars) {
    // Substitute y_j = u + s_j with u, s_j >= 0; maximize u subject to
    //   n*u + sum s = 1  and  A(u*1 + s) = 0.
    // Restricting u >= 0 loses nothing: any nonempty polytope has min y_j >= 0.
    const int m = static_cast<int>(arows.size()) + 1;
    const int n = nvars + 1;  // columns: u, s_1..s_nvars
    std::vector<std::vector<double>> M(static_cast<size_t>(m), std::vector<double>(static_cast<size_t>(n), 0.0));
    std::vector<double> rhs(static_cast<size_t>(m), 0.0);
    M[0][0] = static_cast<double>(nvars);
    for (int j = 0; j < nvars; ++j) M[0][static_cast<size_t>(1 + j)] = 1.0;
    rhs[0] = 1.0;
    for (size_t r = 0; r < arows.size(); ++r) {
        double rowsum = 0.0;
        for (int j = 0; j < nvars; ++j) {
            M[r + 1][static_cast<size_t>(1 + j)] = arows[r][static_cast<size_t>(j)];
            rowsum += arows[r][static_cast<size_t>(j)];
        }
        M[r + 1][0] = rowsum;
    }

    double best = -1.0;
    auto try_basis = [&](const std::vector<int>& basis) {
        const int k = static_cast<int>(basis.size());
        std::vector<std::vector<double>> A(static_cast<size_t>(m),
                                           std::vector<double>(static_cast<size_t>(k) + 1, 0.0));
        for (int r = 0; r < m; ++r) {
            for (int c = 0; c < k; ++c)
                A[static_cast<size_t>(r)][static_cast<size_t>(c)] =
                    M[static_cast<size_t>(r)][static_cast<size_t>(basis[static_cast<size_t>(c)])];
            A[static_cast<size_t>(r)][static_cast<size_t>(k)] = rhs[static_cast<size_t>(r)];
        }
        int row = 0;
        std::vector<int> pivrow(static_cast<size_t>(k), -1);
        for (int c = 0; c < k && row < m; ++c) {
            int piv = -1;
            double bestp = 1e-11;
            for (int r = row; r < m; ++r)
                if (std::abs(A[static_cast<size_t>(r)][static_cast<size_t>(c)]) > bestp) {
                    bestp = std::abs(A[static_cast<size_t>(r)][static_cast<size_t>(c)]);
                    piv = r;
                }
            if (piv < 0) continue;
            std::swap(A[static_cast<size_t>(row)], A[static_cast<size_t>(piv)]);
            for (int r = 0; r < m; ++r) {
                if (r == row) continue;
                const double f = A[static_cast<size_t>(r)][static_cast<size_t>(c)] /
                                 A[static_cast<size_t>(row)][static_cast<size_t>(c)];
                for (int c2 = c; c2 <= k; ++c2)
                    A[static_cast<size_t>(r)][static_cast<size_t>(c2)] -= f * A[static_cast<size_t>(row)][static_cast<size_t>(c2)];
            }
            pivrow[static_cast<size_t>(c)] = row;
            ++row;
        }
        for (int r = row; r < m; ++r)
            if (std::abs(A[static_cast<size_t>(r)][static_cast<size_t>(k)]) > 1e-9) return;
        std::vector<double> x(static_cast<size_t>(n), 0.0);
        for (int c = 0; c < k; ++c) {
            if (pivrow[static_cast<size_t>(c)] < 0) continue;
            const int r = pivrow[static_cast<size_t>(c)];
            x[static_cast<size_t>(basis[static_cast<size_t>(c)])] =
                A[static_cast<size_t>(r)][static_cast<size_t>(k)] / A[static_cast<size_t>(r)][static_cast<size_t>(c)];
        }
        for (int j = 0; j < n; ++j)
            if (x[static_cast<size_t>(j)] < -1e-9) return;
        best = std::max(best, x[0]);
    };
    const int total = 1 << n;
    std::vector<int> subset;
    for (int mask = 1; mask < total; ++mask) {
        if (std::popcount(static_cast<unsigned>(mask)) > m) continue;
        subset.clear();
        for (int j = 0; j < n; ++j)
            if (mask & (1 << j)) subset.push_back(j);
        try_basis(subset);
    }
    return best;
}

// Shared primitives for the lambda = 0 support analysis; used both by the
// prover and by the trace replay checker.
struct SupportAnalysis {
    const ConditionTable& table;
    int d;

    // Positions j in S whose partner j+t is also in S.
    std::vector<int> cross_positions(std::uint32_t mask, int t) const {
        std::vector<int> out;
        for (int j = 0; j < d; ++j)
            if ((mask & (1u << j)) && (mask & (1u << mod_d(j + t, d)))) out.push_back(j);
        return out;
    }

    // Joint strict-positivity test over all shift-0 conditions restricted to
    // the support, with margin kHullMargin.
    bool shift0_infeasible(std::uint32_t mask) const {
        std::vector<int> sup;
        for (int j = 0; j < d; ++j)
            if (mask & (1u << j)) sup.push_back(j);
        if (sup.empty()) return true;
        const auto w = root_of_unity_table(d);
        std::vector<std::vector<double>> rows;
        for (const auto& c : table.conditions) {
            if (c.t != 0) continue;
            std::vector<double> re, im;
            for (int j : sup) {
                const cxd coeff = w[static_cast<size_t>(mod_d(static_cast<long long>(c.e) * j, d))];
                re.push_back(coeff.real());
                im.push_back(coeff.imag());
            }
            rows.push_back(std::move(re));
            rows.push_back(std::move(im));
        }
        if (rows.empty()) return false;
        return max_min_positive_combination(rows, static_cast<int>(sup.size())) < kHullMargin;
    }

    bool rank_forces_zero(std::uint32_t mask, int t) const {
        const auto cross = cross_positions(mask, t);
        if (cross.empty()) return false;
        std::vector<int> exps = table.exponents_at(t);
        if (static_cast<int>(exps.size()) < static_cast<int>(cross.size())) return false;
        const auto w = root_of_unity_table(d);
        std::vector<Vec> rows;
        for (int e : exps) {
            Vec row;
            for (int j : cross)
                row.push_back(w[static_cast<size_t>(mod_d(static_cast<long long>(e) * j, d))]);
            rows.push_back(std::move(row));
        }
        return numeric_rank(std::move(rows), cross.size()) == static_cast<int>(cross.size());
    }

    // For every cross pair (j, j+t) drop one endpoint; deduplicated set of
    // strictly smaller sub-supports.
    std::set<std::uint32_t> rank_children(std::uint32_t mask, int t) const {
        const auto cross = cross_positions(mask, t);
        std::set<std::uint32_t> kids;
        const size_t combos = size_t{1} << cross.size();
        for (size_t pick = 0; pick < combos; ++pick) {
            std::uint32_t child = mask;
            for (size_t i = 0; i < cross.size(); ++i) {
                const int j = cross[i];
                const int jp = mod_d(j + t, d);
                child &= ~(1u << ((pick >> i) & 1 ? jp : j));
            }
            kids.insert(child);
        }
        return kids;
    }
};

struct SupportProver {
    SupportAnalysis an;
    std::vector<ProofStep>& steps;
    std::set<std::uint32_t> refuted;  // memo: each support refuted (and logged) once

    bool refute(std::uint32_t mask, int depth) {
        if (refuted.contains(mask)) return true;
        if (mask == 0) {
            steps.push_back({"SUPPORT", "mask=0 refute=NORMALIZATION"});
            refuted.insert(mask);
            return true;
        }
        if (an.shift0_infeasible(mask)) {
            steps.push_back({"SUPPORT", "mask=" + std::to_string(mask) + " refute=SHIFT0"});
            refuted.insert(mask);
            return true;
        }
        if (depth >= an.d) return fail(mask);
        for (int t = 1; t <= an.d / 2; ++t) {
            if (!an.rank_forces_zero(mask, t)) continue;
            const auto kids = an.rank_children(mask, t);
            std::string payload = "mask=" + std::to_string(mask) + " refute=RANK shift=" +
                                  std::to_string(t) + " children=";
            bool first = true;
            for (auto k : kids) {
                if (!first) payload += ",";
                payload += std::to_string(k);
                first = false;
            }
            steps.push_back({"SUPPORT", payload});
            bool ok = true;
            for (auto k : kids)
                if (!refute(k, depth + 1)) {
                    ok = false;
                    break;
                }
            if (ok) {
                refuted.insert(mask);
                return true;
            }
            return false;
        }
        return fail(mask);
    }

    bool fail(std::uint32_t mask) {
        steps.push_back({"UNREFUTED", "mask=" + std::to_string(mask)});
        return false;
    }
};

inline std::string table_payload(const std::vector<WeylIndex>& indices, const ConditionTable& table) {
    std::ostringstream os;
    os << "d=" << table.d << " idx=";
    for (size_t i = 0; i < indices.size(); ++i) {
        if (i) os << ",";
        os << indices[i].n << ":" << indices[i].m;
    }
    os << " conds=";
    for (size_t i = 0; i < table.conditions.size(); ++i) {
        if (i) os << ",";
        os << table.conditions[i].t << ":" << table.conditions[i].e << ":"
           << (table.conditions[i].folded ? 1 : 0);
    }
    return os.str();
}

inline std::vector<std::uint32_t> independent_supports(int d, int t0) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        bool independent = true;
        for (int j = 0; j < d && independent; ++j)
            if ((mask & (1u << j)) && (mask & (1u << mod_d(j + t0, d)))) independent = false;
        if (independent) out.push_back(mask);
    }
    return out;
}

}  // namespace detail

// Refutation of the lambda != 0 branch: an aligned condition (e == t*n4 mod d,
// t >= 1) turns, after substituting the chain products, into a vanishing sum
// of strictly positive terms.
inline std::optional<ProofStep> refute_lambda_nonzero(const ConditionTable& table, int /*t0*/, int n4) {
    for (const auto& c : table.conditions) {
        if (c.t == 0) continue;
        if (mod_d(c.e - c.t * n4, table.d) == 0)
            return ProofStep{"LAMBDA_NONZERO", "t=" + std::to_string(c.t) + " e=" + std::to_string(c.e) +
                                                   " n4=" + std::to_string(n4) + " align=0"};
    }
    return std::nullopt;
}

// Refutation of the lambda == 0 branch: every support that is an independent
// set of the anchor-shift circulant must fall. Returns the refutation steps,
// or nullopt if some branch survives (the returned-by-reference steps of
// prove_infeasible then carry the first unrefuted support).
inline std::optional<std::vector<ProofStep>> refute_lambda_zero(const ConditionTable& table, int t0) {
    std::vector<ProofStep> steps;
    detail::SupportProver sp{{table, table.d}, steps, {}};
    for (auto mask : detail::independent_supports(table.d, t0))
        if (!sp.refute(mask, 0)) return std::nullopt;
    return steps;
}

inline ProofTrace prove_infeasible(const std::vector<WeylIndex>& indices) {
    ProofTrace trace;
    trace.indices = indices;
    ConditionTable table = build_condition_table(indices);
    const int d = table.d;
    trace.steps.push_back({"TABLE", detail::table_payload(indices, table)});

    // Anchor scan: a shift coprime to d carrying >= d-1 distinct exponents.
    // The chain-product identity needs the anchor to generate the full cycle,
    // so non-coprime shifts never anchor; a coprime anchor other than 1 is
    // remapped to 1 by position relabeling.
    int anchor = -1;
    for (int t0 = 1; t0 <= d / 2 && anchor < 0; ++t0) {
        if (std::gcd(t0, d) != 1) continue;
        std::set<int> exps;
        for (const auto& c : table.conditions)
            if (c.t == t0) exps.insert(c.e);
        if (static_cast<int>(exps.size()) >= d - 1) anchor = t0;
    }
    if (anchor < 0) {
        trace.steps.push_back({"NO_ANCHOR", "d=" + std::to_string(d)});
        trace.outcome = ProofOutcome::INCONCLUSIVE;
        return trace;
    }
    if (anchor != 1) {
        trace.steps.push_back({"RELABEL", "t0=" + std::to_string(anchor)});
        table = detail::relabel_table(table, anchor);
    }
    auto prop = forced_proportionality(table);
    if (!prop || prop->t0 != 1) {
        trace.steps.push_back({"NO_ANCHOR", "d=" + std::to_string(d)});
        trace.outcome = ProofOutcome::INCONCLUSIVE;
        return trace;
    }

    trace.steps.push_back({"PROPORTIONALITY", "t0=1 n4=" + std::to_string(prop->n4) +
                                                  " full=" + std::to_string(prop->forcedZero ? 1 : 0)});

    auto nz = refute_lambda_nonzero(table, 1, prop->n4);
    if (!nz) {
        trace.steps.push_back({"NO_ALIGNED_CONDITION", "n4=" + std::to_string(prop->n4)});
        trace.outcome = ProofOutcome::INCONCLUSIVE;
        return trace;
    }
    trace.steps.push_back(*nz);

    std::vector<ProofStep> zeroSteps;
    detail::SupportProver sp{{table, d}, zeroSteps, {}};
    bool allRefuted = true;
    for (auto mask : detail::independent_supports(d, 1))
        if (!sp.refute(mask, 0)) {
            allRefuted = false;
            break;
        }
    for (auto& s : zeroSteps) trace.steps.push_back(std::move(s));
    trace.outcome = allRefuted ? ProofOutcome::INFEASIBLE : ProofOutcome::INCONCLUSIVE;
    return trace;
}

}  // namespace locclab
