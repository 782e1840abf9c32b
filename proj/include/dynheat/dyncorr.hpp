#ifndef DYNHEAT_DYNCORR_HPP_
#define DYNHEAT_DYNCORR_HPP_

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "dynheat/signal.hpp"
#include "dynheat/spectral.hpp"

namespace dynheat {

enum class Method { SW, TSW, HEAT };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct WindowSpec {
    enum class Kind { Square, Tapered };
    Kind kind = Kind::Square;
    int size_m = 15;              // nominal size, interpreted as FWHM in TRs
    double taper_bandwidth = 3.0; // Gaussian bandwidth in TRs (tapered only)
};

// Weight vector of the window, summing to 1. Square: m entries of 1/m.
// Tapered: square weights discretely convolved with a Gaussian truncated at
// +-3 bandwidths, renormalized. Support length m + 2*ceil(3*bandwidth).
Eigen::VectorXd window_weights(const WindowSpec& spec);

// Offset of the first window weight relative to the center index i.
int window_start_offset(const WindowSpec& spec);

// Weighted Pearson correlation over window W_i on the mirrored circle,
// indices taken modulo 2T. Throws ZeroVariance for near-constant windows.
double windowed_corr(const CircularSeries& x, const CircularSeries& y,
                     const WindowSpec& spec, int i);

// Heat-kernel dynamic correlation of two rescaled signals at the original
// T-point grid, computed from smoothed moments of x, y, xy, x^2, y^2.
// Values clamped to [-1,1]. Throws ZeroVariance (with the offending t)
// when a smoothed variance drops below 1e-12.
Eigen::VectorXd heat_dyncorr(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const HeatKernelParams& params);

// Time-indexed upper-triangle correlation series for one subject.
struct DynCorrSeries {
    int T = 0;
    int p = 0;
    Method method = Method::HEAT;
    WindowSpec window;       // SW/TSW
    HeatKernelParams kernel; // HEAT
    std::string subject_id;
    Eigen::MatrixXd values;  // T x p(p-1)/2, edges in row-major upper order

    int edge_count() const { return p * (p - 1) / 2; }
};

// Edge index helpers: edges (i,j), i<j, in row-major order.
int edge_index(int i, int j, int p);
std::pair<int, int> edge_pair(int e, int p);

// All-pairs dynamic correlation for one rescaled subject; OpenMP over edges.
DynCorrSeries dyncorr_matrix(const RoiMatrix& subject, Method method,
                             const WindowSpec& window,
                             const HeatKernelParams& kernel);

// Straight-loop serial reference, kept for testing and benchmarks.
DynCorrSeries dyncorr_matrix_serial(const RoiMatrix& subject, Method method,
                                    const WindowSpec& window,
                                    const HeatKernelParams& kernel);

}  // namespace dynheat

#endif  // DYNHEAT_DYNCORR_HPP_
