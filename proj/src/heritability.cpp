#include "dynheat/heritability.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "dynheat/errors.hpp"
#include "dynheat/rng.hpp"

namespace dynheat {

double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ValidationError("pearson: length mismatch");
    if (a.size() < 3) throw EmptyInput("pearson: need length >= 3");
    const double ma = a.mean();
    const double mb = b.mean();
    const Eigen::ArrayXd da = a.array() - ma;
    const Eigen::ArrayXd db = b.array() - mb;
    const double va = (da * da).sum();
    const double vb = (db * db).sum();
    if (va <= 0.0 || vb <= 0.0) {
        throw ZeroVariance("pearson: constant input");
    }
    return (da * db).sum() / std::sqrt(va * vb);
}

RunningCorrState RunningCorrState::from_pairs(const Eigen::MatrixXd& pairs) {
    if (pairs.rows() != 2) {
        throw ValidationError("RunningCorrState: pairs must be 2 x m");
    }
    RunningCorrState s;
    s.m = static_cast<int>(pairs.cols());
    s.nu1 = pairs.row(0).sum();
    s.nu2 = pairs.row(1).sum();
    const Eigen::ArrayXd d1 = pairs.row(0).array() - s.nu1 / s.m;
    const Eigen::ArrayXd d2 = pairs.row(1).array() - s.nu2 / s.m;
    s.omega11 = (d1 * d1).sum();
    s.omega22 = (d2 * d2).sum();
    s.omega12 = (d1 * d2).sum();
    return s;
}

double RunningCorrState::gamma() const {
    if (omega11 <= 0.0 || omega22 <= 0.0) {
        throw ZeroVariance("RunningCorrState: non-positive variance term");
    }
    return omega12 / std::sqrt(omega11 * omega22);
}

void transpose_update(RunningCorrState& state, double xi1, double xi2) {
    const double d = xi1 - xi2;
    const double m = static_cast<double>(state.m);
    // Cross term per the nu-difference form; the variance terms pick up both
    // the raw second-moment swap and the shifted-mean correction.
    state.omega12 += d * d / m - d * (state.nu1 - state.nu2) / m;
    state.omega11 += (xi2 * xi2 - xi1 * xi1) + (2.0 * state.nu1 * d - d * d) / m;
    state.omega22 += (xi1 * xi1 - xi2 * xi2) + (-2.0 * state.nu2 * d - d * d) / m;
    state.nu1 += -xi1 + xi2;
    state.nu2 += -xi2 + xi1;
}

WalkResult transposition_walk(const Eigen::MatrixXd& pairs, long steps,
                              int repeats, std::uint64_t seed) {
    if (pairs.rows() != 2 || pairs.cols() < 3) {
        throw ValidationError("transposition_walk: need 2 x m with m >= 3");
    }
    if (steps < 1 || repeats < 1) {
        throw ValidationError("transposition_walk: steps and repeats must be >= 1");
    }
    const int m = static_cast<int>(pairs.cols());
    WalkResult out;
    out.repeat_means.resize(repeats);

    for (int r = 0; r < repeats; ++r) {
        auto rng = substream(seed, {static_cast<std::uint64_t>(r)});
        std::uniform_int_distribution<int> pick(0, m - 1);
        RunningCorrState state = RunningCorrState::from_pairs(pairs);
        std::vector<bool> flipped(m, false);
        double avg = 0.0;
        long accepted = 0;
        for (long j = 0; j < steps; ++j) {
            const int i = pick(rng);
            const double xi1 = flipped[i] ? pairs(1, i) : pairs(0, i);
            const double xi2 = flipped[i] ? pairs(0, i) : pairs(1, i);
            transpose_update(state, xi1, xi2);
            flipped[i] = !flipped[i];
            double gamma;
            try {
                gamma = state.gamma();
            } catch (const ZeroVariance&) {
                ++out.skipped_steps;
                continue;
            }
            ++accepted;
            avg += (gamma - avg) / accepted;  // iterative (J-1)/J average
        }
        out.repeat_means[r] = avg;
    }

    double mean = 0.0;
    for (double v : out.repeat_means) mean += v;
    mean /= repeats;
    double var = 0.0;
    for (double v : out.repeat_means) var += (v - mean) * (v - mean);
    out.mean = mean;
    out.sd = repeats > 1 ? std::sqrt(var / (repeats - 1)) : 0.0;
    return out;
}

double falconer_hi(double gamma_mz, double gamma_dz, bool clamp) {
    const double h = 2.0 * (gamma_mz - gamma_dz);
    return clamp ? std::clamp(h, 0.0, 1.0) : h;
}

Eigen::VectorXd state_average_map(const DynCorrSeries& series,
                                  const std::vector<int>& assignment,
                                  int state) {
    if (static_cast<int>(assignment.size()) != series.T) {
        throw ValidationError("state_average_map: assignment length mismatch");
    }
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(series.edge_count());
    long count = 0;
    for (int t = 0; t < series.T; ++t) {
        if (assignment[t] == state) {
            sum += series.values.row(t).transpose();
            ++count;
        }
    }
    if (count == 0) {
        throw StateNotVisited("subject " + series.subject_id +
                              " never visits state " + std::to_string(state));
    }
    return sum / static_cast<double>(count);
}

std::vector<HeritabilityEntry> hi_map_state(
    const std::vector<Eigen::MatrixXd>& mz,
    const std::vector<Eigen::MatrixXd>& dz, int state, int p,
    const HiMapConfig& config) {
    if (mz.size() != dz.size()) {
        throw ValidationError("hi_map_state: edge count mismatch");
    }
    const int E = static_cast<int>(mz.size());
    std::vector<HeritabilityEntry> entries(E);
#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < E; ++e) {
        HeritabilityEntry& entry = entries[e];
        entry.state = state;
        const auto [i, j] = edge_pair(e, p);
        entry.node_i = i;
        entry.node_j = j;
        if (mz[e].cols() < config.min_pairs || dz[e].cols() < config.min_pairs) {
            entry.missing = true;
            continue;
        }
        const auto mz_ids = static_cast<std::uint64_t>(state) * 1000003ULL +
                            static_cast<std::uint64_t>(e);
        const WalkResult gmz = transposition_walk(
            mz[e], config.steps, config.repeats,
            substream(config.seed, {1, mz_ids})());
        const WalkResult gdz = transposition_walk(
            dz[e], config.steps, config.repeats,
            substream(config.seed, {2, mz_ids})());
        entry.gamma_mz = gmz.mean;
        entry.gamma_dz = gdz.mean;
        entry.hi = falconer_hi(gmz.mean, gdz.mean, config.clamp);
        entry.sd_bound = 2.0 * (gmz.sd + gdz.sd);
    }
    return entries;
}

}  // namespace dynheat
