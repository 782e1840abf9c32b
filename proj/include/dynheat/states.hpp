#ifndef DYNHEAT_STATES_HPP_
#define DYNHEAT_STATES_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dynheat/dyncorr.hpp"

namespace dynheat {

// Upper triangle (i<j, row-major) of a symmetric matrix.
// Throws AsymmetricInput beyond 1e-9.
Eigen::VectorXd vectorize_upper(const Eigen::MatrixXd& C);

// Inverse of vectorize_upper with unit diagonal.
Eigen::MatrixXd unvectorize_upper(const Eigen::VectorXd& v, int p);

struct KMeansResult {
    int k = 0;
    Eigen::MatrixXd centroids;    // k x d
    std::vector<int> labels;      // 1..k, one per point
    double sse_within = 0.0;
    double sse_between = 0.0;
};

// Lloyd's algorithm, k-means++ seeding, best of `restarts` by within-SSE.
// Deterministic given seed, independent of thread count (restarts are
// independent substreams, reduction ordered by restart index).
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts,
                    std::uint64_t seed);

// Single-threaded reference with scalar distance loops; testing/benchmark only.
KMeansResult kmeans_serial(const Eigen::MatrixXd& points, int k, int restarts,
                           std::uint64_t seed);

struct ElbowResult {
    int chosen_k = 0;
    std::vector<int> ks;
    std::vector<double> ratios;        // SSE_within / SSE_between per k
    std::vector<KMeansResult> models;  // one per k
    bool flat_warning = false;         // nearly flat ratio curve
};

// Ratio curve over k_min..k_max; chosen k maximizes the discrete second
// difference over interior k.
ElbowResult elbow_select(const Eigen::MatrixXd& points, int k_min, int k_max,
                         int restarts, std::uint64_t seed);

// Row-stochastic transition counts from a 1-based label sequence; rows with
// no observed departures are uniform.
Eigen::MatrixXd transition_matrix(const std::vector<int>& seq, int k);

// Fraction of all (subject, time) points in each state; sums to 1.
Eigen::VectorXd occupancy(const std::vector<std::vector<int>>& assignments,
                          int k);

// Per-state: per-edge standard deviation over all (subject, time) points
// assigned to the state, averaged across edges. Throws EmptyState when a
// state has fewer than 2 assigned points.
std::vector<double> within_state_dispersion(
    const std::vector<DynCorrSeries>& series,
    const std::vector<std::vector<int>>& assignments, int k);

struct StateModel {
    int k = 0;
    Eigen::MatrixXd centroids;
    std::vector<std::vector<int>> assignments;  // per subject, 1..k
    double sse_within = 0.0;
    double sse_between = 0.0;
    Eigen::MatrixXd mean_transition;  // average over subjects
    Eigen::VectorXd occupancy_rates;
    bool elbow_flat_warning = false;
    std::vector<double> elbow_ratios;
};

// Cluster the concatenated (subject, time) vectors of a cohort. k = 0 means
// elbow selection over 2..8.
StateModel estimate_states(const std::vector<DynCorrSeries>& series, int k,
                           int restarts, std::uint64_t seed);

}  // namespace dynheat

#endif  // DYNHEAT_STATES_HPP_
