// Serial reference against the OpenMP path for the three parallel kernels.
// Each row checks that both paths agree before reporting the timings.

#include <chrono>
#include <cstdio>
#include <functional>

#include "CLI11.hpp"
#include "odmp/analysis.hpp"
#include "odmp/instances.hpp"
#include "odmp/parallel.hpp"

using namespace odmp;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel, bool same) {
    std::printf("%-28s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
                same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs parallel kernels"};
    int workers = 0, reps = 3;
    app.add_option("--workers", workers, "OpenMP threads (0 = runtime default)");
    app.add_option("--reps", reps, "repetitions per measurement (best is reported)");
    CLI11_PARSE(app, argc, argv);
    set_worker_count(workers);
    std::printf("workers: %d\n%-28s %10s %10s %9s\n", worker_count(), "kernel", "serial[s]", "parallel[s]", "speedup");

    OkpFotConfig okp;
    okp.n = 20;
    okp.m = 5;
    okp.T = 2000;
    const Instance inst = gen_okpfot(okp);
    const Vec p{-0.3, 0.1, 0.05, 0.1, 0.05};
    DualPoint ds, dp;
    const double t_ds = best_of(reps, [&] { ds = evaluate_dual(inst.steps, inst.goal, p, Exec::Serial); });
    const double t_dp = best_of(reps, [&] { dp = evaluate_dual(inst.steps, inst.goal, p, Exec::Parallel); });
    row("dual evaluation (T=2000)", t_ds, t_dp, ds.value == dp.value && ds.subgradient == dp.subgradient);

    AssignmentConfig micro;
    micro.m = 3;
    micro.tasks_min = 3;
    micro.tasks_max = 3;
    micro.T = 5;
    micro.rho = 2.0;
    const Instance small = gen_assignment(micro);
    BruteForceResult bs, bp;
    const double t_bs = best_of(reps, [&] { bs = offline_bruteforce(small.steps, small.goal, kBruteForceLimit, Exec::Serial); });
    const double t_bp =
        best_of(reps, [&] { bp = offline_bruteforce(small.steps, small.goal, kBruteForceLimit, Exec::Parallel); });
    row("offline brute force (27^5)", t_bs, t_bp, bs.z_star == bp.z_star && bs.leaves == bp.leaves);
    std::printf("  brute force leaves checked: %zu\n", bs.leaves);

    const std::size_t seeds = 8;
    std::vector<double> rs(seeds), rp(seeds);
    auto sweep = [&](std::vector<double>& out, Exec e) {
        for_each_index(
            seeds,
            [&](std::size_t s) {
                const ArrivalOrder o = uniform_permutation(inst.horizon(), s + 1);
                out[s] = compute_metrics(run_online(inst.steps, o.order, inst.goal, inst.constants, {})).reward_avg.back();
            },
            e);
    };
    const double t_ss = best_of(reps, [&] { sweep(rs, Exec::Serial); });
    const double t_sp = best_of(reps, [&] { sweep(rp, Exec::Parallel); });
    row("seed sweep (8 runs)", t_ss, t_sp, rs == rp);
    return 0;
}
