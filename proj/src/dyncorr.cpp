#include "dynheat/dyncorr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dynheat/errors.hpp"

namespace dynheat {

std::string method_name(Method m) {
    switch (m) {
        case Method::SW: return "sw";
        case Method::TSW: return "tsw";
        case Method::HEAT: return "heat";
    }
    throw Error("method_name: bad enum");
}

Method method_from_name(const std::string& name) {
    if (name == "sw") return Method::SW;
    if (name == "tsw") return Method::TSW;
    if (name == "heat") return Method::HEAT;
    throw ValidationError("unknown method: " + name);
}

int edge_index(int i, int j, int p) {
    // row-major upper triangle, i < j
    return i * p - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<int, int> edge_pair(int e, int p) {
    int i = 0;
    int row_len = p - 1;
    while (e >= row_len) {
        e -= row_len;
        ++i;
        --row_len;
    }
    return {i, i + 1 + e};
}

int window_start_offset(const WindowSpec& spec) {
    // W_i = [floor(i - m/2 + 1), floor(i + m/2)], offsets relative to i
    int start = static_cast<int>(std::floor(1.0 - spec.size_m / 2.0));
    if (spec.kind == WindowSpec::Kind::Tapered) {
        start -= static_cast<int>(std::ceil(3.0 * spec.taper_bandwidth));
    }
    return start;
}

Eigen::VectorXd window_weights(const WindowSpec& spec) {
    if (spec.size_m < 2) {
        throw ValidationError("window_weights: size_m < 2");
    }
    const int m = spec.size_m;
    if (spec.kind == WindowSpec::Kind::Square) {
        return Eigen::VectorXd::Constant(m, 1.0 / m);
    }
    if (!(spec.taper_bandwidth > 0.0)) {
        throw ValidationError("window_weights: taper_bandwidth must be positive");
    }
    const int radius = static_cast<int>(std::ceil(3.0 * spec.taper_bandwidth));
    Eigen::VectorXd gauss(2 * radius + 1);
    for (int r = -radius; r <= radius; ++r) {
        gauss[r + radius] =
            std::exp(-0.5 * r * r / (spec.taper_bandwidth * spec.taper_bandwidth));
    }
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m + 2 * radius);
    for (int j = 0; j < m; ++j) {
        for (int r = 0; r < gauss.size(); ++r) {
            out[j + r] += gauss[r] / m;
        }
    }
    out /= out.sum();
    return out;
}

namespace {

inline int wrap(int idx, int n) {
    idx %= n;
    return idx < 0 ? idx + n : idx;
}

struct WindowMoments {
    double mean_x, mean_y, var_x, var_y, cov;
};

WindowMoments window_moments(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const Eigen::VectorXd& w, int start, int n) {
    double mx = 0.0, my = 0.0;
    for (int j = 0; j < w.size(); ++j) {
        const int idx = wrap(start + j, n);
        mx += w[j] * x[idx];
        my += w[j] * y[idx];
    }
    double vx = 0.0, vy = 0.0, cov = 0.0;
    for (int j = 0; j < w.size(); ++j) {
        const int idx = wrap(start + j, n);
        const double dx = x[idx] - mx;
        const double dy = y[idx] - my;
        vx += w[j] * dx * dx;
        vy += w[j] * dy * dy;
        cov += w[j] * dx * dy;
    }
    return {mx, my, vx, vy, cov};
}

}  // namespace

double windowed_corr(const CircularSeries& x, const CircularSeries& y,
                     const WindowSpec& spec, int i) {
    if (x.values.size() != y.values.size()) {
        throw ValidationError("windowed_corr: series length mismatch");
    }
    const int n = static_cast<int>(x.values.size());
    const Eigen::VectorXd w = window_weights(spec);
    const int start = i + window_start_offset(spec);
    const WindowMoments mm = window_moments(x.values, y.values, w, start, n);
    const double sx = std::sqrt(std::max(mm.var_x, 0.0));
    const double sy = std::sqrt(std::max(mm.var_y, 0.0));
    if (sx < 1e-12 || sy < 1e-12) {
        throw ZeroVariance("windowed_corr: near-constant window at i=" +
                           std::to_string(i));
    }
    return std::clamp(mm.cov / (sx * sy), -1.0, 1.0);
}

namespace {

// Shared machinery of the heat estimator: smoothed first and second moments
// from cosine fits of x, y, xy, x^2, y^2 on the subject's grid.
Eigen::VectorXd heat_corr_from_fits(const CosineDesign& design,
                                    const Eigen::VectorXd& cx,
                                    const Eigen::VectorXd& cy,
                                    const Eigen::VectorXd& cxy,
                                    const Eigen::VectorXd& cxx,
                                    const Eigen::VectorXd& cyy, double s) {
    const int L = design.degree();
    Eigen::VectorXd weights(L + 1);
    for (int l = 0; l <= L; ++l) weights[l] = heat_weight(l, s);

    const Eigen::VectorXd mu_x = design.evaluate(weights.cwiseProduct(cx));
    const Eigen::VectorXd mu_y = design.evaluate(weights.cwiseProduct(cy));
    const Eigen::VectorXd e_xy = design.evaluate(weights.cwiseProduct(cxy));
    const Eigen::VectorXd e_xx = design.evaluate(weights.cwiseProduct(cxx));
    const Eigen::VectorXd e_yy = design.evaluate(weights.cwiseProduct(cyy));

    Eigen::VectorXd rho(design.grid_size());
    for (int j = 0; j < rho.size(); ++j) {
        const double var_x = e_xx[j] - mu_x[j] * mu_x[j];
        const double var_y = e_yy[j] - mu_y[j] * mu_y[j];
        if (var_x < 1e-12 || var_y < 1e-12) {
            throw ZeroVariance("heat_dyncorr: vanishing variance at grid index " +
                               std::to_string(j));
        }
        const double cov = e_xy[j] - mu_x[j] * mu_y[j];
        rho[j] = std::clamp(cov / std::sqrt(var_x * var_y), -1.0, 1.0);
    }
    return rho;
}

}  // namespace

Eigen::VectorXd heat_dyncorr(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                             const HeatKernelParams& params) {
    if (x.size() != y.size()) {
        throw ValidationError("heat_dyncorr: length mismatch");
    }
    if (!(params.bandwidth > 0.0)) {
        throw ValidationError("heat_dyncorr: bandwidth must be positive");
    }
    const int T = static_cast<int>(x.size());
    const int L = params.degree > 0 ? params.degree : T - 1;
    CosineDesign design(T, L);
    return heat_corr_from_fits(design, design.fit(x), design.fit(y),
                               design.fit(x.cwiseProduct(y)),
                               design.fit(x.cwiseProduct(x)),
                               design.fit(y.cwiseProduct(y)), params.bandwidth);
}

namespace {

DynCorrSeries make_series(const RoiMatrix& subject, Method method,
                          const WindowSpec& window, const HeatKernelParams& kernel) {
    DynCorrSeries out;
    out.T = subject.time_points();
    out.p = subject.regions();
    out.method = method;
    out.window = window;
    out.kernel = kernel;
    out.subject_id = subject.subject_id;
    out.values.resize(out.T, out.edge_count());
    return out;
}

}  // namespace

DynCorrSeries dyncorr_matrix(const RoiMatrix& subject, Method method,
                             const WindowSpec& window,
                             const HeatKernelParams& kernel) {
    validate_roi_matrix(subject);
    DynCorrSeries out = make_series(subject, method, window, kernel);
    const int T = out.T;
    const int p = out.p;
    const int E = out.edge_count();

    if (method == Method::HEAT) {
        const int L = kernel.degree > 0 ? kernel.degree : T - 1;
        const CosineDesign design(T, L);
        // Per-region fits are shared across the p(p-1)/2 edges.
        std::vector<Eigen::VectorXd> c(p), c_sq(p);
        for (int r = 0; r < p; ++r) {
            c[r] = design.fit(subject.values.col(r));
            c_sq[r] = design.fit(subject.values.col(r).cwiseAbs2());
        }
#pragma omp parallel for schedule(dynamic)
        for (int e = 0; e < E; ++e) {
            const auto [i, j] = edge_pair(e, p);
            const Eigen::VectorXd cxy = design.fit(
                subject.values.col(i).cwiseProduct(subject.values.col(j)));
            out.values.col(e) = heat_corr_from_fits(design, c[i], c[j], cxy,
                                                    c_sq[i], c_sq[j],
                                                    kernel.bandwidth);
        }
        return out;
    }

    std::vector<CircularSeries> circ(p);
    for (int r = 0; r < p; ++r) {
        circ[r] = mirror_reflect(subject.values.col(r));
    }
#pragma omp parallel for schedule(dynamic)
    for (int e = 0; e < E; ++e) {
        const auto [i, j] = edge_pair(e, p);
        for (int t = 0; t < T; ++t) {
            out.values(t, e) = windowed_corr(circ[i], circ[j], window, t);
        }
    }
    return out;
}

DynCorrSeries dyncorr_matrix_serial(const RoiMatrix& subject, Method method,
                                    const WindowSpec& window,
                                    const HeatKernelParams& kernel) {
    validate_roi_matrix(subject);
    DynCorrSeries out = make_series(subject, method, window, kernel);
    for (int e = 0; e < out.edge_count(); ++e) {
        const auto [i, j] = edge_pair(e, out.p);
        if (method == Method::HEAT) {
            out.values.col(e) =
                heat_dyncorr(subject.values.col(i), subject.values.col(j), kernel);
        } else {
            const CircularSeries ci = mirror_reflect(subject.values.col(i));
            const CircularSeries cj = mirror_reflect(subject.values.col(j));
            for (int t = 0; t < out.T; ++t) {
                out.values(t, e) = windowed_corr(ci, cj, window, t);
            }
        }
    }
    return out;
}

}  // namespace dynheat
