#include "dynheat/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dynheat/errors.hpp"
#include "dynheat/signal.hpp"

namespace dynheat {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;
}  // namespace

double basis_eval(int l, double t) {
    if (l < 0) {
        throw Error("basis_eval: negative degree");
    }
    if (t < -1e-12 || t > 2.0 + 1e-12) {
        throw Error("basis_eval: t outside [0,2]: " + std::to_string(t));
    }
    if (t > 1.0) t = 2.0 - t;  // mirror identity on the circle
    if (l == 0) return 1.0;
    return kSqrt2 * std::cos(l * kPi * t);
}

double heat_weight(int l, double s) {
    return std::exp(-static_cast<double>(l) * l * kPi * kPi * s);
}

CosineDesign::CosineDesign(int T, int degree) : T_(T), degree_(degree) {
    if (T < degree + 1) {
        throw Error("CosineDesign: fewer samples than coefficients");
    }
    const Eigen::VectorXd grid = time_grid(T);
    design_.resize(T, degree + 1);
    for (int l = 0; l <= degree; ++l) {
        if (l == 0) {
            design_.col(0).setOnes();
        } else {
            design_.col(l) = (kSqrt2 * (l * kPi * grid.array()).cos()).matrix();
        }
    }
    qr_.compute(design_);
    if (qr_.rank() < degree + 1) {
        throw RankDeficient("CosineDesign: design matrix is numerically singular");
    }
}

Eigen::VectorXd CosineDesign::fit(const Eigen::VectorXd& samples) const {
    if (samples.size() != T_) {
        throw Error("CosineDesign::fit: sample count mismatch");
    }
    return qr_.solve(samples);
}

Eigen::VectorXd CosineDesign::evaluate(const Eigen::VectorXd& weighted_coeffs) const {
    return design_ * weighted_coeffs;
}

SpectralModel fit_coefficients(const Eigen::VectorXd& samples, int degree) {
    CosineDesign design(static_cast<int>(samples.size()), degree);
    SpectralModel model;
    model.degree = degree;
    model.coefficients = design.fit(samples);
    return model;
}

Eigen::VectorXd smooth(const SpectralModel& model, double bandwidth,
                       const Eigen::VectorXd& t) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(t.size());
    for (int l = 0; l <= model.degree; ++l) {
        const double wc = heat_weight(l, bandwidth) * model.coefficients[l];
        if (wc == 0.0) continue;
        for (int j = 0; j < t.size(); ++j) {
            out[j] += wc * basis_eval(l, t[j]);
        }
    }
    return out;
}

double kernel_eval(double bandwidth, int degree, double t, double t_prime) {
    double sum = 0.0;
    for (int l = 0; l <= degree; ++l) {
        sum += heat_weight(l, bandwidth) * basis_eval(l, t) * basis_eval(l, t_prime);
    }
    return sum;
}

double fwhm_to_bandwidth(double fwhm_tr, int T) {
    if (fwhm_tr <= 0.0 || T < 2) {
        throw Error("fwhm_to_bandwidth: need fwhm > 0 and T >= 2");
    }
    const double width = fwhm_tr / T;  // FWHM on the unit interval
    return width * width / (16.0 * std::numbers::ln2);
}

}  // namespace dynheat
