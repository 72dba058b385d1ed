// Times phase_sweep against phase_sweep_serial on the circuit drive family
// and checks that both give the same points.

#include "ptkit/circuit.hpp"
#include "ptkit/floquet.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>

using namespace ptkit;

int main(int argc, char** argv) {
    CLI::App app("phase sweep benchmark");
    int points = 761;
    int repeat = 3;
    app.add_option("--points", points, "sweep points on W in [0.2, 4]")->check(CLI::Range(2, 1000000));
    app.add_option("--repeat", repeat, "timed repetitions, best is reported")->check(CLI::Range(1, 1000));
    CLI11_PARSE(app, argc, argv);

    const auto family = circuit::drive_family(1.0, 1.0, 0.5, 1.5, circuit::Mode::RLC);
    std::vector<double> W(points);
    for (int k = 0; k < points; ++k) W[k] = 0.2 + 3.8 * k / (points - 1);
    const IntegratorConfig cfg;

    using clock = std::chrono::steady_clock;
    auto best = [&](auto&& fn) {
        double t = 1e300;
        floquet::SweepResult r;
        for (int k = 0; k < repeat; ++k) {
            const auto t0 = clock::now();
            r = fn();
            t = std::min(t, std::chrono::duration<double>(clock::now() - t0).count());
        }
        return std::pair{t, r};
    };
    const auto [ts, serial] = best([&] { return floquet::phase_sweep_serial(family, W, cfg); });
    const auto [tp, parallel] = best([&] { return floquet::phase_sweep(family, W, cfg); });

    int mismatches = 0;
    for (int k = 0; k < points; ++k) {
        const auto& a = serial.points[k];
        const auto& b = parallel.points[k];
        if (a.ok != b.ok || a.phase != b.phase || a.lambda != b.lambda) ++mismatches;
    }
    if (serial.boundaries != parallel.boundaries) ++mismatches;

    std::printf("points %d, threads %d, best of %d\n", points, floquet::sweep_threads(), repeat);
    std::printf("serial   %.3f s\n", ts);
    std::printf("parallel %.3f s  (speedup %.2fx)\n", tp, ts / tp);
    std::printf("boundaries %zu, mismatches %d\n", parallel.boundaries.size(), mismatches);
    return mismatches == 0 ? 0 : 1;
}
