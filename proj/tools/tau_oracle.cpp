// Random-search oracle used to fix the solver acceptance thresholds: draws
// a large number of random unit vectors, reports the smallest objective seen,
// then gradient-polishes the best candidates to estimate the global minimum.
// The acceptance suite freezes tau at half the polished minimum.

#include <cstdio>
#include <cstdlib>

#include "locclab/witness.hpp"

using namespace locclab;

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: tau_oracle n:m[,n:m...]xD [samples]\n");
        std::fprintf(stderr, "example: tau_oracle 0:0,1:1,3:2,3:1x4 1000000\n");
        return 1;
    }
    std::string arg = argv[1];
    const size_t xpos = arg.rfind('x');
    if (xpos == std::string::npos) {
        std::fprintf(stderr, "error: missing xD suffix\n");
        return 1;
    }
    const int d = std::atoi(arg.c_str() + xpos + 1);
    std::vector<WeylIndex> indices;
    size_t pos = 0;
    while (pos < xpos) {
        size_t comma = arg.find(',', pos);
        if (comma == std::string::npos || comma > xpos) comma = xpos;
        const std::string tok = arg.substr(pos, comma - pos);
        const size_t colon = tok.find(':');
        indices.push_back({std::atoi(tok.c_str()), std::atoi(tok.c_str() + colon + 1), d});
        pos = comma + 1;
    }
    const long samples = argc > 2 ? std::atol(argv[2]) : 1000000;

    const auto ss = weyl_state_set(indices);
    const detail::PairProducts prods(ss);

    std::mt19937_64 rng(12345);
    double best = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, Vec>> top;  // keep the 100 best samples
    for (long s = 0; s < samples; ++s) {
        Vec phi = random_unit_vector(d, rng);
        const double f = prods.value(phi);
        best = std::min(best, f);
        if (top.size() < 100) {
            top.emplace_back(f, std::move(phi));
            std::sort(top.begin(), top.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
        } else if (f < top.back().first) {
            top.back() = {f, std::move(phi)};
            std::sort(top.begin(), top.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
        }
    }
    double polished = best;
    for (auto& [f, phi] : top)
        polished = std::min(polished, detail::minimize_on_sphere(prods, std::move(phi), 2000).f);

    const auto rep = solve_witness(ss, {.restarts = 200, .maxIters = 2000, .seed = 1});
    std::printf("samples=%ld random_min=%.17g polished_min=%.17g solver_200_best=%.17g\n",
                samples, best, polished, rep.bestF);
    std::printf("suggested_tau=%.17g\n", 0.5 * std::min(polished, rep.bestF));
    return 0;
}
