// trace_check.hpp
// Parse serialized proof traces and replay-verify every step without
// re-running the search: condition-table recomputation, character counts,
// alignment arithmetic mod d, and support-branch refutations.

#pragma once

#include <charconv>
#include <map>
#include <string_view>

#include "locclab/prover.hpp"

namespace locclab {

namespace detail {

inline std::vector<std::string_view> split_sv(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    size_t pos = 0;
    while (pos <= s.size()) {
        const size_t next = s.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

inline long parse_long(std::string_view s) {
    long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("trace parse: bad integer '" + std::string(s) + "'");
    return v;
}

// Payloads are space-separated key=value fields.
inline std::map<std::string, std::string> parse_fields(std::string_view payload) {
    std::map<std::string, std::string> out;
    for (auto tok : split_sv(payload, ' ')) {
        if (tok.empty()) continue;
        const size_t eq = tok.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("trace parse: bad field '" + std::string(tok) + "'");
        out[std::string(tok.substr(0, eq))] = std::string(tok.substr(eq + 1));
    }
    return out;
}

}  // namespace detail

inline ProofTrace parse_trace(const std::string& text) {
    ProofTrace trace;
    bool sawOutcome = false;
    for (auto line : detail::split_sv(text, '\n')) {
        if (line.empty()) continue;
        if (line.starts_with("OUTCOME: ")) {
            const auto v = line.substr(9);
            if (v == "INFEASIBLE")
                trace.outcome = ProofOutcome::INFEASIBLE;
            else if (v == "INCONCLUSIVE")
                trace.outcome = ProofOutcome::INCONCLUSIVE;
            else
                throw std::invalid_argument("trace parse: bad outcome");
            sawOutcome = true;
            continue;
        }
        if (!line.starts_with("STEP ")) throw std::invalid_argument("trace parse: bad line");
        const size_t colon = line.find(": ");
        const size_t bar = line.find(" | ");
        if (colon == std::string_view::npos || bar == std::string_view::npos || bar < colon)
            throw std::invalid_argument("trace parse: bad step line");
        trace.steps.push_back({std::string(line.substr(colon + 2, bar - colon - 2)),
                               std::string(line.substr(bar + 3))});
    }
    if (!sawOutcome) throw std::invalid_argument("trace parse: missing outcome");
    if (trace.steps.empty() || trace.steps.front().kind != "TABLE")
        throw std::invalid_argument("trace parse: missing TABLE step");
    const auto fields = detail::parse_fields(trace.steps.front().payload);
    const int d = static_cast<int>(detail::parse_long(fields.at("d")));
    for (auto tok : detail::split_sv(fields.at("idx"), ',')) {
        const auto nm = detail::split_sv(tok, ':');
        if (nm.size() != 2) throw std::invalid_argument("trace parse: bad index");
        trace.indices.push_back({static_cast<int>(detail::parse_long(nm[0])),
                                 static_cast<int>(detail::parse_long(nm[1])), d});
    }
    return trace;
}

struct ReplayResult {
    bool valid = false;
    std::string error;
};

// Independent verification of an INFEASIBLE trace. Each step is re-checked
// from the recomputed condition table; the support steps must jointly refute
// every independent-set support of the anchor circulant.
inline ReplayResult replay_check(const ProofTrace& trace) {
    auto fail = [](std::string msg) { return ReplayResult{false, std::move(msg)}; };
    if (trace.outcome != ProofOutcome::INFEASIBLE) return fail("only INFEASIBLE traces are certifiable");
    if (trace.steps.empty() || trace.steps.front().kind != "TABLE") return fail("missing TABLE step");

    ConditionTable table;
    try {
        table = build_condition_table(trace.indices);
    } catch (const std::exception& ex) {
        return fail(std::string("bad indices: ") + ex.what());
    }
    const int d = table.d;

    // Step 1: the recorded table must match the recomputed one.
    {
        const auto fields = detail::parse_fields(trace.steps.front().payload);
        if (detail::parse_long(fields.at("d")) != d) return fail("TABLE: d mismatch");
        std::vector<Condition> recorded;
        for (auto tok : detail::split_sv(fields.at("conds"), ',')) {
            const auto parts = detail::split_sv(tok, ':');
            if (parts.size() != 3) return fail("TABLE: bad condition token");
            recorded.push_back({static_cast<int>(detail::parse_long(parts[0])),
                                static_cast<int>(detail::parse_long(parts[1])),
                                detail::parse_long(parts[2]) != 0});
        }
        if (recorded != table.conditions) return fail("TABLE: condition mismatch");
    }

    size_t i = 1;
    if (i < trace.steps.size() && trace.steps[i].kind == "RELABEL") {
        const int t0 = static_cast<int>(detail::parse_long(detail::parse_fields(trace.steps[i].payload).at("t0")));
        if (std::gcd(t0, d) != 1) return fail("RELABEL: anchor not coprime");
        table = detail::relabel_table(table, t0);
        ++i;
    }

    if (i >= trace.steps.size() || trace.steps[i].kind != "PROPORTIONALITY")
        return fail("missing PROPORTIONALITY step");
    int n4 = 0;
    {
        const auto fields = detail::parse_fields(trace.steps[i].payload);
        if (detail::parse_long(fields.at("t0")) != 1) return fail("PROPORTIONALITY: anchor must be 1");
        n4 = static_cast<int>(detail::parse_long(fields.at("n4")));
        const bool full = detail::parse_long(fields.at("full")) != 0;
        std::set<int> exps;
        for (const auto& c : table.conditions)
            if (c.t == 1) exps.insert(c.e);
        if (full) {
            if (static_cast<int>(exps.size()) != d) return fail("PROPORTIONALITY: full flag but exponents missing");
            if (!exps.contains(n4)) return fail("PROPORTIONALITY: designated n4 not present");
        } else {
            if (static_cast<int>(exps.size()) != d - 1) return fail("PROPORTIONALITY: need exactly d-1 exponents");
            if (exps.contains(n4)) return fail("PROPORTIONALITY: n4 must be the missing exponent");
        }
        ++i;
    }

    if (i >= trace.steps.size() || trace.steps[i].kind != "LAMBDA_NONZERO")
        return fail("missing LAMBDA_NONZERO step");
    {
        const auto fields = detail::parse_fields(trace.steps[i].payload);
        const int t = static_cast<int>(detail::parse_long(fields.at("t")));
        const int e = static_cast<int>(detail::parse_long(fields.at("e")));
        if (detail::parse_long(fields.at("n4")) != n4) return fail("LAMBDA_NONZERO: n4 mismatch");
        if (t < 1) return fail("LAMBDA_NONZERO: shift must be >= 1");
        bool present = false;
        for (const auto& c : table.conditions)
            if (c.t == t && c.e == e) present = true;
        if (!present) return fail("LAMBDA_NONZERO: condition not in table");
        if (mod_d(e - t * n4, d) != 0) return fail("LAMBDA_NONZERO: alignment arithmetic fails");
        ++i;
    }

    // Support steps: verify each one locally, then check the refuted set
    // closes under RANK children and covers every independent support.
    detail::SupportAnalysis an{table, d};
    struct RankNode {
        std::uint32_t mask;
        std::set<std::uint32_t> children;
    };
    std::set<std::uint32_t> direct;  // NORMALIZATION / SHIFT0
    std::vector<RankNode> ranks;
    for (; i < trace.steps.size(); ++i) {
        if (trace.steps[i].kind != "SUPPORT") return fail("unexpected step kind " + trace.steps[i].kind);
        const auto fields = detail::parse_fields(trace.steps[i].payload);
        const auto mask = static_cast<std::uint32_t>(detail::parse_long(fields.at("mask")));
        const auto& kind = fields.at("refute");
        if (kind == "NORMALIZATION") {
            if (mask != 0) return fail("NORMALIZATION refutation on nonempty support");
            direct.insert(mask);
        } else if (kind == "SHIFT0") {
            if (!an.shift0_infeasible(mask)) return fail("SHIFT0 refutation does not hold");
            direct.insert(mask);
        } else if (kind == "RANK") {
            const int t = static_cast<int>(detail::parse_long(fields.at("shift")));
            if (!an.rank_forces_zero(mask, t)) return fail("RANK refutation: system not full column rank");
            std::set<std::uint32_t> listed;
            for (auto tok : detail::split_sv(fields.at("children"), ','))
                listed.insert(static_cast<std::uint32_t>(detail::parse_long(tok)));
            if (listed != an.rank_children(mask, t)) return fail("RANK refutation: children mismatch");
            ranks.push_back({mask, std::move(listed)});
        } else {
            return fail("unknown refutation kind " + kind);
        }
    }

    std::set<std::uint32_t> refuted = direct;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& rn : ranks) {
            if (refuted.contains(rn.mask)) continue;
            bool all = true;
            for (auto k : rn.children)
                if (!refuted.contains(k)) {
                    all = false;
                    break;
                }
            if (all) {
                refuted.insert(rn.mask);
                changed = true;
            }
        }
    }
    for (auto mask : detail::independent_supports(d, 1))
        if (!refuted.contains(mask))
            return fail("support " + std::to_string(mask) + " not refuted");
    return {true, ""};
}

}  // namespace locclab
