#include "dynheat/signal.hpp"

#include <cmath>

#include "dynheat/errors.hpp"

namespace dynheat {

Eigen::VectorXd rescale_unit(const Eigen::VectorXd& column) {
    if (column.size() < 2) {
        throw EmptyInput("rescale_unit: need at least 2 samples");
    }
    if (!column.allFinite()) {
        throw ValidationError("rescale_unit: non-finite value in input");
    }
    const double lo = column.minCoeff();
    const double hi = column.maxCoeff();
    if (!(hi > lo)) {
        throw DegenerateSignal("rescale_unit: constant column (max == min)");
    }
    return (column.array() - lo) / (hi - lo);
}

CircularSeries mirror_reflect(const Eigen::VectorXd& x) {
    const int T = static_cast<int>(x.size());
    if (T < 2) {
        throw EmptyInput("mirror_reflect: need T >= 2");
    }
    CircularSeries out;
    out.origin_length = T;
    out.values.resize(2 * T);
    out.values.head(T) = x;
    out.values.tail(T) = x.reverse();
    return out;
}

void validate_roi_matrix(const RoiMatrix& subject) {
    if (subject.values.rows() < 4) {
        throw ValidationError("subject " + subject.subject_id + ": T < 4");
    }
    if (subject.values.cols() < 2) {
        throw ValidationError("subject " + subject.subject_id + ": p < 2");
    }
    if (!subject.values.allFinite()) {
        throw ValidationError("subject " + subject.subject_id +
                              ": non-finite value in signal matrix");
    }
}

RoiMatrix rescale_subject(const RoiMatrix& subject) {
    validate_roi_matrix(subject);
    RoiMatrix out = subject;
    for (int c = 0; c < out.values.cols(); ++c) {
        out.values.col(c) = rescale_unit(subject.values.col(c));
    }
    return out;
}

Eigen::VectorXd time_grid(int T) {
    return Eigen::VectorXd::LinSpaced(T, 0.0, 1.0);
}

}  // namespace dynheat
