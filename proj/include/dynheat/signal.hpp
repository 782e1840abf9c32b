#ifndef DYNHEAT_SIGNAL_HPP_
#define DYNHEAT_SIGNAL_HPP_

#include <Eigen/Dense>
#include <string>

namespace dynheat {

// One subject's T x p matrix of region-averaged signal values.
struct RoiMatrix {
    Eigen::MatrixXd values;  // T rows (time, TR units) x p columns (regions)
    std::string subject_id;
    double tr_seconds = 1.0;  // metadata only

    int time_points() const { return static_cast<int>(values.rows()); }
    int regions() const { return static_cast<int>(values.cols()); }
};

// Mirror-reflected series of length 2T on the circle of circumference 2.
// values[j] == values[2T-1-j] for all j.
struct CircularSeries {
    Eigen::VectorXd values;
    int origin_length = 0;
};

// Affine map of a column onto [0,1]: (x - min) / (max - min).
// Throws DegenerateSignal for constant input.
Eigen::VectorXd rescale_unit(const Eigen::VectorXd& column);

// [a,b,c] -> [a,b,c,c,b,a]. Requires length >= 2.
CircularSeries mirror_reflect(const Eigen::VectorXd& x);

// Rejects NaN/Inf and undersized matrices (T >= 4, p >= 2).
void validate_roi_matrix(const RoiMatrix& subject);

// Per-column rescale_unit applied to a validated subject.
RoiMatrix rescale_subject(const RoiMatrix& subject);

// Time grid convention: sample j sits at t_j = j/(T-1) on [0,1].
Eigen::VectorXd time_grid(int T);

}  // namespace dynheat

#endif  // DYNHEAT_SIGNAL_HPP_
