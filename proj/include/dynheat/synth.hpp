#ifndef DYNHEAT_SYNTH_HPP_
#define DYNHEAT_SYNTH_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "dynheat/signal.hpp"

namespace dynheat {

struct RegimeSegment {
    int start_t = 0;  // inclusive
    int end_t = 0;    // exclusive
    Eigen::MatrixXd target;  // p x p correlation matrix, unit diagonal, PSD
    int target_id = 0;       // 1-based identity of the planted regime
};

struct RegimeSchedule {
    std::vector<RegimeSegment> segments;  // must partition [0, T)
    double noise_sd = 1.0;
    std::uint64_t seed = 0;
    double ramp_tr = 0.0;  // >0: logistic ramp between segments instead of a hard switch
};

// Samples within each segment carry the segment's target correlation, via a
// symmetric square root of the target applied to independent Gaussian noise.
// Pure function of (schedule, subject_id). Throws NotPSD for a target with
// an eigenvalue below -1e-10.
RoiMatrix generate_subject(const RegimeSchedule& schedule,
                           const std::string& subject_id);

// Planted segment index (1-based) per time point.
std::vector<int> schedule_labels(const RegimeSchedule& schedule);

// Planted regime identity (segment target_id) per time point.
std::vector<int> target_labels(const RegimeSchedule& schedule);

struct AceSpec {
    Eigen::VectorXd a_per_edge;  // additive genetic variance share, [0,1]
    Eigen::VectorXd c_per_edge;  // common environment share, A + C <= 1
    int mz_count = 0;
    int dz_count = 0;
    std::uint64_t seed = 0;
};

struct TwinCohort {
    std::vector<Eigen::MatrixXd> mz;  // per feature: 2 x m
    std::vector<Eigen::MatrixXd> dz;  // per feature: 2 x n
};

// value = sqrt(A) g + sqrt(C) c + sqrt(1-A-C) e, with g fully shared within
// MZ pairs and shared with correlation 1/2 within DZ pairs (via
// g_dz = (g_shared + g_private)/sqrt(2)), c fully shared, e independent.
TwinCohort generate_twin_cohort(const AceSpec& spec);

// Common targets for test cohorts: three well-separated p x p correlation
// regimes (uniform positive, identity, signed two-block).
std::vector<Eigen::MatrixXd> default_regime_targets(int p);

// Project a symmetric matrix onto the correlation matrices: clip negative
// eigenvalues to zero and renormalize the diagonal to 1.
Eigen::MatrixXd nearest_correlation(const Eigen::MatrixXd& m);

// Random per-subject schedule cycling through the targets with segment
// lengths drawn from [dwell_min, dwell_max].
RegimeSchedule random_schedule(const std::vector<Eigen::MatrixXd>& targets,
                               int T, int dwell_min, int dwell_max,
                               double noise_sd, std::uint64_t seed);

}  // namespace dynheat

#endif  // DYNHEAT_SYNTH_HPP_
