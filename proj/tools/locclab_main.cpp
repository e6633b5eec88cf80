// locclab: decide one-way LOCC distinguishability of unilaterally
// transformable state sets, sweep Weyl subsets, and print infeasibility
// proof traces.
//
// Exit codes: 0 = decision reached, 2 = undecided, 1 = usage/parse error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "locclab/pipeline.hpp"
#include "locclab/trace_check.hpp"

namespace {

int write_output(const std::string& text, const std::string& outPath) {
    if (outPath.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(outPath, std::ios::binary);
    if (!out) {
        std::cerr << "error: cannot open output file " << outPath << "\n";
        return 1;
    }
    out << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"one-way LOCC distinguishability toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // allow global flags after the subcommand

    int restarts = 200;
    std::uint64_t seed = 1;
    std::string outPath;
    std::string format = "text";
    app.add_option("--restarts", restarts, "solver restarts")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "deterministic RNG seed");
    app.add_option("--out", outPath, "write output to a file instead of stdout");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "text"}));

    auto* cmdDecide = app.add_subcommand("decide", "run the full decision pipeline on a state-set file");
    std::string decidePath;
    bool skipProver = false, skipSim = false;
    cmdDecide->add_option("file", decidePath, "state-set spec file (JSON)")->required();
    cmdDecide->add_flag("--skip-prover", skipProver, "skip the infeasibility prover");
    cmdDecide->add_flag("--skip-sim", skipSim, "skip protocol construction/evaluation");

    auto* cmdSweep = app.add_subcommand("sweep", "enumerate N-subsets of Weyl indices and decide each");
    int sweepD = 0, sweepN = 0;
    long sweepLimit = -1;
    bool noCanonical = false;
    cmdSweep->add_option("--d", sweepD, "local dimension")->required()->check(CLI::Range(2, 8));
    cmdSweep->add_option("--N", sweepN, "subset size")->required()->check(CLI::Range(2, 8));
    cmdSweep->add_option("--limit", sweepLimit, "cap on the number of subsets");
    cmdSweep->add_flag("--no-canonical", noCanonical, "do not fix the first index to (0,0)");

    auto* cmdTrace = app.add_subcommand("trace", "print the infeasibility proof trace for a Weyl state-set file");
    std::string tracePath;
    cmdTrace->add_option("file", tracePath, "state-set spec file (JSON, all-Weyl unitaries)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (cmdDecide->parsed()) {
            const auto spec = locclab::load_state_set_spec(decidePath);
            locclab::DecideOptions opt;
            opt.restarts = restarts;
            opt.seed = seed;
            opt.runProver = !skipProver;
            opt.runSimulator = !skipSim;
            const auto rep = locclab::decide(spec, opt);
            if (const int rc = write_output(locclab::render_verdict_text(rep), outPath)) return rc;
            return rep.decided() ? 0 : 2;
        }
        if (cmdSweep->parsed()) {
            if (sweepN > sweepD) {
                std::cerr << "error: require N <= d\n";
                return 1;
            }
            locclab::SweepOptions opt;
            opt.restarts = restarts;
            opt.seed = seed;
            opt.limit = sweepLimit;
            opt.canonicalize = !noCanonical;
            const auto rows = locclab::sweep(sweepD, sweepN, opt);
            std::string text;
            if (format == "csv") {
                text += locclab::sweep_csv_header() + "\n";
                for (const auto& row : rows) text += locclab::sweep_row_csv(row) + "\n";
            } else {
                for (const auto& row : rows) text += locclab::sweep_row_csv(row) + "\n";
            }
            return write_output(text, outPath);
        }
        if (cmdTrace->parsed()) {
            const auto spec = locclab::load_state_set_spec(tracePath);
            if (!spec.allWeyl()) {
                std::cerr << "error: trace requires all unitaries to be weyl-typed\n";
                return 1;
            }
            if (!spec.basePhiPlus) {
                std::cerr << "error: trace requires the phi_plus base state\n";
                return 1;
            }
            auto indices = spec.weylIndices();
            if (spec.direction == locclab::Direction::BtoA)
                indices = locclab::detail::transpose_weyl_indices(indices);
            const auto trace = locclab::prove_infeasible(indices);
            if (const int rc = write_output(trace.serialize(), outPath)) return rc;
            return trace.outcome == locclab::ProofOutcome::INFEASIBLE ? 0 : 2;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
