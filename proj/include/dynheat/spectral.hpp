#ifndef DYNHEAT_SPECTRAL_HPP_
#define DYNHEAT_SPECTRAL_HPP_

#include <Eigen/Dense>
#include <memory>

namespace dynheat {

// Cosine-series coefficients c_0..c_L of one signal.
struct SpectralModel {
    Eigen::VectorXd coefficients;  // size L+1
    int degree = 0;
};

// Diffusion-time parameterization of the heat kernel.
struct HeatKernelParams {
    double bandwidth = 0.0;  // diffusion time s
    int degree = 0;          // series truncation L
    double fwhm_tr = 0.0;    // equivalent FWHM in TR units (diagnostic)
};

// psi_0(t) = 1, psi_l(t) = sqrt(2) cos(l pi t); mirror identity
// psi_l(t) = psi_l(2-t) on (1,2]. Throws Error outside [0,2].
double basis_eval(int l, double t);

// e^{-l^2 pi^2 s}
double heat_weight(int l, double s);

// Cosine design matrix on the uniform grid t_j = j/(T-1) with a cached
// orthogonal factorization, shared across the many per-region fits of a
// subject.
class CosineDesign {
public:
    CosineDesign(int T, int degree);

    // Least-squares coefficients for one sampled signal.
    // Throws RankDeficient if the design matrix is numerically singular.
    Eigen::VectorXd fit(const Eigen::VectorXd& samples) const;

    // Series evaluation on the fit grid: Psi * (weights .* coefficients).
    Eigen::VectorXd evaluate(const Eigen::VectorXd& weighted_coeffs) const;

    int degree() const { return degree_; }
    int grid_size() const { return T_; }
    const Eigen::MatrixXd& matrix() const { return design_; }

private:
    int T_;
    int degree_;
    Eigen::MatrixXd design_;  // T x (L+1)
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

// Least-squares cosine expansion of samples on the uniform T-point grid.
SpectralModel fit_coefficients(const Eigen::VectorXd& samples, int degree);

// h(t,s) = sum_l e^{-l^2 pi^2 s} c_l psi_l(t) at the given points.
Eigen::VectorXd smooth(const SpectralModel& model, double bandwidth,
                       const Eigen::VectorXd& t);

// Truncated heat kernel K_s(t,t') = sum_{l<=L} e^{-l^2 pi^2 s} psi_l(t) psi_l(t').
// Diagnostics and quadrature oracle only.
double kernel_eval(double bandwidth, int degree, double t, double t_prime);

// Gaussian-limit relation: s = (fwhm_tr/T)^2 / (16 ln 2). Approximate for
// large s; validated by the numeric FWHM round-trip test.
double fwhm_to_bandwidth(double fwhm_tr, int T);

}  // namespace dynheat

#endif  // DYNHEAT_SPECTRAL_HPP_
