#ifndef DYNHEAT_HERITABILITY_HPP_
#define DYNHEAT_HERITABILITY_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "dynheat/dyncorr.hpp"

namespace dynheat {

// Sample Pearson correlation. Throws ZeroVariance for constant input,
// EmptyInput for length < 3.
double pearson(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Running sums behind the O(1) transposition update of a twin correlation:
// nu(x_k) = sum_i x_ik and the centered second moments omega.
struct RunningCorrState {
    double nu1 = 0.0;
    double nu2 = 0.0;
    double omega11 = 0.0;
    double omega22 = 0.0;
    double omega12 = 0.0;
    int m = 0;

    // From-scratch initialization for a 2 x m pairing.
    static RunningCorrState from_pairs(const Eigen::MatrixXd& pairs);

    // gamma = omega12 / sqrt(omega11 * omega22); throws ZeroVariance when a
    // variance term is not positive.
    double gamma() const;
};

// Constant-time update of the running state when pair i swaps order.
// xi1, xi2 are the pair's values under the CURRENT orientation.
void transpose_update(RunningCorrState& state, double xi1, double xi2);

struct WalkResult {
    double mean = 0.0;  // mean of per-repeat walk averages
    double sd = 0.0;    // standard deviation across repeats
    std::vector<double> repeat_means;
    long skipped_steps = 0;  // zero-variance steps whose gamma was dropped
};

// R independent random-transposition walks of J steps over the 2^m pairings
// of a 2 x m cohort; per-walk iterative average, then mean/SD across repeats.
WalkResult transposition_walk(const Eigen::MatrixXd& pairs, long steps,
                              int repeats, std::uint64_t seed);

// Falconer's formula h = 2 (gamma_mz - gamma_dz); optionally clamped to [0,1].
double falconer_hi(double gamma_mz, double gamma_dz, bool clamp = false);

// Per-edge mean of correlations over the time points this subject spends in
// `state` (1-based). Throws StateNotVisited if the subject never enters it.
Eigen::VectorXd state_average_map(const DynCorrSeries& series,
                                  const std::vector<int>& assignment,
                                  int state);

struct HeritabilityEntry {
    int state = 0;
    int node_i = 0;
    int node_j = 0;
    double gamma_mz = 0.0;
    double gamma_dz = 0.0;
    double hi = 0.0;
    double sd_bound = 0.0;  // 2 * (sd(gamma_mz) + sd(gamma_dz))
    bool missing = false;   // insufficient pairs at this edge
};

struct HiMapConfig {
    long steps = 50000;
    int repeats = 100;
    std::uint64_t seed = 0;
    bool clamp = false;
    int min_pairs = 3;
};

// Transposition-averaged twin correlations and HI per edge for one state.
// mz/dz: one 2 x m pairing matrix per edge (already listwise-filtered);
// an edge with fewer than min_pairs usable pairs is marked missing.
// OpenMP over edges, substreams keyed by (state, edge).
std::vector<HeritabilityEntry> hi_map_state(
    const std::vector<Eigen::MatrixXd>& mz,
    const std::vector<Eigen::MatrixXd>& dz, int state, int p,
    const HiMapConfig& config);

}  // namespace dynheat

#endif  // DYNHEAT_HERITABILITY_HPP_
