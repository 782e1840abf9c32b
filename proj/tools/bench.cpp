// Benchmark: OpenMP kernels against their serial reference implementations,
// and the O(1) transposition update against from-scratch recomputation.

#include <chrono>
#include <cstdio>
#include <random>

#include <omp.h>

#include "dynheat/dyncorr.hpp"
#include "dynheat/heritability.hpp"
#include "dynheat/rng.hpp"
#include "dynheat/states.hpp"
#include "dynheat/synth.hpp"

using namespace dynheat;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

RoiMatrix bench_subject(int T, int p) {
    const auto targets = default_regime_targets(p);
    const RegimeSchedule schedule =
        random_schedule(targets, T, 40, 80, 1.0, 12345);
    RoiMatrix subject = generate_subject(schedule, "bench");
    return rescale_subject(subject);
}

void bench_dyncorr() {
    const RoiMatrix subject = bench_subject(300, 20);
    HeatKernelParams kernel{fwhm_to_bandwidth(15, 300), 299, 15.0};
    WindowSpec window;

    auto t0 = clock_type::now();
    const auto serial = dyncorr_matrix_serial(subject, Method::HEAT, window, kernel);
    const double t_serial = seconds_since(t0);

    t0 = clock_type::now();
    const auto parallel = dyncorr_matrix(subject, Method::HEAT, window, kernel);
    const double t_parallel = seconds_since(t0);

    const double max_diff = (serial.values - parallel.values).cwiseAbs().maxCoeff();
    std::printf("dyncorr heat p=20 T=300   serial %.3fs   omp(%d threads) %.3fs"
                "   speedup %.2fx   max |diff| %.2e\n",
                t_serial, omp_get_max_threads(), t_parallel,
                t_serial / t_parallel, max_diff);
}

void bench_kmeans() {
    auto rng = substream(7, {0});
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd points(6000, 30);
    for (int i = 0; i < points.rows(); ++i) {
        const double shift = 10.0 * (i % 3);
        for (int j = 0; j < points.cols(); ++j) points(i, j) = normal(rng) + shift;
    }

    auto t0 = clock_type::now();
    const auto serial = kmeans_serial(points, 3, 20, 99);
    const double t_serial = seconds_since(t0);

    t0 = clock_type::now();
    const auto parallel = kmeans(points, 3, 20, 99);
    const double t_parallel = seconds_since(t0);

    std::printf("kmeans N=6000 d=30 k=3    serial %.3fs   omp(%d threads) %.3fs"
                "   speedup %.2fx   sse diff %.2e\n",
                t_serial, omp_get_max_threads(), t_parallel,
                t_serial / t_parallel,
                std::abs(serial.sse_within - parallel.sse_within));
}

void bench_transposition() {
    for (int m : {50, 200, 500}) {
        auto rng = substream(11, {static_cast<std::uint64_t>(m)});
        std::normal_distribution<double> normal(0.0, 1.0);
        Eigen::MatrixXd pairs(2, m);
        for (int i = 0; i < m; ++i) {
            const double g = normal(rng);
            pairs(0, i) = g + 0.5 * normal(rng);
            pairs(1, i) = g + 0.5 * normal(rng);
        }
        const long steps = 200000;
        std::uniform_int_distribution<int> pick(0, m - 1);

        RunningCorrState state = RunningCorrState::from_pairs(pairs);
        std::vector<bool> flipped(m, false);
        auto walk_rng = substream(11, {1});
        auto t0 = clock_type::now();
        double sink = 0.0;
        for (long j = 0; j < steps; ++j) {
            const int i = pick(walk_rng);
            const double a = flipped[i] ? pairs(1, i) : pairs(0, i);
            const double b = flipped[i] ? pairs(0, i) : pairs(1, i);
            transpose_update(state, a, b);
            flipped[i] = !flipped[i];
            sink += state.gamma();
        }
        const double t_inc = seconds_since(t0);

        Eigen::MatrixXd current = pairs;
        auto scratch_rng = substream(11, {1});
        t0 = clock_type::now();
        for (long j = 0; j < steps / 100; ++j) {  // 100x fewer, scaled below
            const int i = pick(scratch_rng);
            current.col(i).reverseInPlace();
            sink += pearson(current.row(0).transpose(), current.row(1).transpose());
        }
        const double t_scratch = seconds_since(t0) * 100.0;

        std::printf("transposition m=%-4d      incremental %.1f ns/update   "
                    "recompute %.1f ns/update   speedup %.0fx   (sink %.3f)\n",
                    m, 1e9 * t_inc / steps, 1e9 * t_scratch / steps,
                    t_scratch / t_inc, sink);
    }
}

}  // namespace

int main() {
    std::printf("threads available: %d\n", omp_get_max_threads());
    bench_dyncorr();
    bench_kmeans();
    bench_transposition();
    return 0;
}
