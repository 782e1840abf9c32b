#include "dynheat/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "dynheat/errors.hpp"
#include "dynheat/rng.hpp"

namespace dynheat {

Eigen::VectorXd vectorize_upper(const Eigen::MatrixXd& C) {
    if (C.rows() != C.cols()) {
        throw AsymmetricInput("vectorize_upper: not square");
    }
    const int p = static_cast<int>(C.rows());
    if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw AsymmetricInput("vectorize_upper: asymmetry beyond 1e-9");
    }
    Eigen::VectorXd v(p * (p - 1) / 2);
    int e = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            v[e++] = C(i, j);
        }
    }
    return v;
}

Eigen::MatrixXd unvectorize_upper(const Eigen::VectorXd& v, int p) {
    if (v.size() != p * (p - 1) / 2) {
        throw ValidationError("unvectorize_upper: size mismatch");
    }
    Eigen::MatrixXd C = Eigen::MatrixXd::Identity(p, p);
    int e = 0;
    for (int i = 0; i < p; ++i) {
        for (int j = i + 1; j < p; ++j) {
            C(i, j) = v[e];
            C(j, i) = v[e];
            ++e;
        }
    }
    return C;
}

namespace {

// k-means++ seeding; deterministic given the generator state.
Eigen::MatrixXd seed_centroids(const Eigen::MatrixXd& points, int k,
                               std::mt19937_64& rng) {
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd centroids(k, points.cols());
    std::uniform_int_distribution<int> first(0, n - 1);
    centroids.row(0) = points.row(first(rng));
    Eigen::VectorXd d2 =
        (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        int pick = 0;
        if (total > 0.0) {
            double target = unif(rng) * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += d2[i];
                if (acc >= target) { pick = i; break; }
                pick = i;
            }
        } else {
            pick = first(rng);
        }
        centroids.row(c) = points.row(pick);
        d2 = d2.cwiseMin(
            (points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
    }
    return centroids;
}

struct LloydResult {
    Eigen::MatrixXd centroids;
    std::vector<int> labels;  // 0-based
    double sse = 0.0;
};

// One Lloyd run from given centroids. Assignment via the expanded
// ||x||^2 - 2 x.c + ||c||^2 form with a matrix product; ties go to the
// lowest centroid index.
LloydResult lloyd(const Eigen::MatrixXd& points, Eigen::MatrixXd centroids,
                  int max_iters, double tol) {
    const int n = static_cast<int>(points.rows());
    const int k = static_cast<int>(centroids.rows());
    const Eigen::VectorXd pnorm = points.rowwise().squaredNorm();

    std::vector<int> labels(n, 0);
    double prev_sse = std::numeric_limits<double>::infinity();
    double sse = 0.0;

    for (int iter = 0; iter < max_iters; ++iter) {
        const Eigen::MatrixXd g = points * centroids.transpose();  // n x k
        const Eigen::VectorXd cnorm = centroids.rowwise().squaredNorm();
        sse = 0.0;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = pnorm[i] - 2.0 * g(i, 0) + cnorm[0];
            for (int c = 1; c < k; ++c) {
                const double d = pnorm[i] - 2.0 * g(i, c) + cnorm[c];
                if (d < best_d) { best_d = d; best = c; }
            }
            labels[i] = best;
            sse += std::max(best_d, 0.0);
        }
        if (sse > prev_sse * (1.0 + 1e-9) + 1e-9) {
            throw Error("kmeans: SSE increased across a Lloyd iteration");
        }
        prev_sse = sse;

        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
        for (int i = 0; i < n; ++i) {
            sums.row(labels[i]) += points.row(i);
            counts[labels[i]] += 1;
        }
        Eigen::MatrixXd next = centroids;
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                next.row(c) = sums.row(c) / counts[c];
            } else {
                // Re-seed an empty cluster with the point farthest from its
                // current centroid.
                int far_i = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d =
                        (points.row(i) - centroids.row(labels[i])).squaredNorm();
                    if (d > far_d) { far_d = d; far_i = i; }
                }
                next.row(c) = points.row(far_i);
            }
        }
        const double movement =
            (next - centroids).rowwise().norm().maxCoeff();
        centroids = next;
        if (movement < tol) break;
    }

    // Final assignment against the converged centroids.
    const Eigen::MatrixXd g = points * centroids.transpose();
    const Eigen::VectorXd cnorm = centroids.rowwise().squaredNorm();
    sse = 0.0;
    for (int i = 0; i < n; ++i) {
        int best = 0;
        double best_d = pnorm[i] - 2.0 * g(i, 0) + cnorm[0];
        for (int c = 1; c < k; ++c) {
            const double d = pnorm[i] - 2.0 * g(i, c) + cnorm[c];
            if (d < best_d) { best_d = d; best = c; }
        }
        labels[i] = best;
        sse += std::max(best_d, 0.0);
    }
    return {std::move(centroids), std::move(labels), sse};
}

double total_sse(const Eigen::MatrixXd& points) {
    const Eigen::RowVectorXd mean = points.colwise().mean();
    return (points.rowwise() - mean).rowwise().squaredNorm().sum();
}

KMeansResult finish(const Eigen::MatrixXd& points, LloydResult best, int k) {
    KMeansResult out;
    out.k = k;
    out.centroids = std::move(best.centroids);
    out.labels.resize(best.labels.size());
    for (std::size_t i = 0; i < best.labels.size(); ++i) {
        out.labels[i] = best.labels[i] + 1;
    }
    out.sse_within = best.sse;
    out.sse_between = total_sse(points) - best.sse;
    return out;
}

void check_kmeans_args(const Eigen::MatrixXd& points, int k, int restarts) {
    if (points.rows() == 0) throw EmptyInput("kmeans: no points");
    if (k < 1 || k > points.rows()) {
        throw ValidationError("kmeans: need 1 <= k <= N, got k=" +
                              std::to_string(k));
    }
    if (restarts < 1) throw ValidationError("kmeans: restarts < 1");
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int restarts,
                    std::uint64_t seed) {
    check_kmeans_args(points, k, restarts);
    std::vector<LloydResult> runs(restarts);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) {
        auto rng = substream(seed, {static_cast<std::uint64_t>(r)});
        runs[r] = lloyd(points, seed_centroids(points, k, rng), 300, 1e-6);
    }
    // Ordered reduction: equal-SSE ties resolve to the lowest restart index,
    // so the winner is independent of scheduling.
    int best = 0;
    for (int r = 1; r < restarts; ++r) {
        if (runs[r].sse < runs[best].sse) best = r;
    }
    return finish(points, std::move(runs[best]), k);
}

KMeansResult kmeans_serial(const Eigen::MatrixXd& points, int k, int restarts,
                           std::uint64_t seed) {
    check_kmeans_args(points, k, restarts);
    LloydResult best;
    best.sse = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        auto rng = substream(seed, {static_cast<std::uint64_t>(r)});
        LloydResult run = lloyd(points, seed_centroids(points, k, rng), 300, 1e-6);
        if (run.sse < best.sse) best = std::move(run);
    }
    return finish(points, std::move(best), k);
}

ElbowResult elbow_select(const Eigen::MatrixXd& points, int k_min, int k_max,
                         int restarts, std::uint64_t seed) {
    if (k_min < 1 || k_max < k_min) {
        throw ValidationError("elbow_select: bad k range");
    }
    k_max = std::min<int>(k_max, static_cast<int>(points.rows()));
    ElbowResult out;
    for (int k = k_min; k <= k_max; ++k) {
        KMeansResult model = kmeans(points, k, restarts, seed);
        const double ratio = model.sse_between > 0.0
                                 ? model.sse_within / model.sse_between
                                 : 0.0;
        out.ks.push_back(k);
        out.ratios.push_back(ratio);
        out.models.push_back(std::move(model));
    }
    if (out.ks.size() < 3) {
        throw ValidationError("elbow_select: need at least 3 k values");
    }
    double best_curv = -std::numeric_limits<double>::infinity();
    int best_idx = 1;
    for (std::size_t i = 1; i + 1 < out.ratios.size(); ++i) {
        const double curv =
            out.ratios[i - 1] - 2.0 * out.ratios[i] + out.ratios[i + 1];
        if (curv > best_curv) {
            best_curv = curv;
            best_idx = static_cast<int>(i);
        }
    }
    out.chosen_k = out.ks[best_idx];
    const double span = *std::max_element(out.ratios.begin(), out.ratios.end()) -
                        *std::min_element(out.ratios.begin(), out.ratios.end());
    out.flat_warning = span < 1e-3;
    return out;
}

Eigen::MatrixXd transition_matrix(const std::vector<int>& seq, int k) {
    if (seq.size() < 2) throw EmptyInput("transition_matrix: sequence too short");
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(k, k);
    for (int label : seq) {
        if (label < 1 || label > k) {
            throw LabelOutOfRange("transition_matrix: label " +
                                  std::to_string(label));
        }
    }
    for (std::size_t t = 1; t < seq.size(); ++t) {
        counts(seq[t - 1] - 1, seq[t] - 1) += 1.0;
    }
    Eigen::MatrixXd probs(k, k);
    for (int a = 0; a < k; ++a) {
        const double departures = counts.row(a).sum();
        if (departures > 0.0) {
            probs.row(a) = counts.row(a) / departures;
        } else {
            probs.row(a).setConstant(1.0 / k);
        }
    }
    return probs;
}

Eigen::VectorXd occupancy(const std::vector<std::vector<int>>& assignments,
                          int k) {
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
    double total = 0.0;
    for (const auto& seq : assignments) {
        for (int label : seq) {
            if (label < 1 || label > k) {
                throw LabelOutOfRange("occupancy: label " + std::to_string(label));
            }
            counts[label - 1] += 1.0;
            total += 1.0;
        }
    }
    if (total == 0.0) throw EmptyInput("occupancy: no assignments");
    return counts / total;
}

std::vector<double> within_state_dispersion(
    const std::vector<DynCorrSeries>& series,
    const std::vector<std::vector<int>>& assignments, int k) {
    if (series.size() != assignments.size()) {
        throw ValidationError("within_state_dispersion: cohort size mismatch");
    }
    const int E = series.empty() ? 0 : series.front().edge_count();
    std::vector<double> result(k, 0.0);
    for (int state = 1; state <= k; ++state) {
        // Welford accumulators per edge over all (subject, time) in the state.
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(E);
        Eigen::VectorXd m2 = Eigen::VectorXd::Zero(E);
        long count = 0;
        for (std::size_t sIdx = 0; sIdx < series.size(); ++sIdx) {
            const auto& s = series[sIdx];
            const auto& a = assignments[sIdx];
            if (static_cast<int>(a.size()) != s.T) {
                throw ValidationError(
                    "within_state_dispersion: assignment length mismatch");
            }
            for (int t = 0; t < s.T; ++t) {
                if (a[t] != state) continue;
                ++count;
                const Eigen::VectorXd delta = s.values.row(t).transpose() - mean;
                mean += delta / count;
                m2 += delta.cwiseProduct(s.values.row(t).transpose() - mean);
            }
        }
        if (count < 2) {
            throw EmptyState("within_state_dispersion: state " +
                             std::to_string(state) + " has < 2 points");
        }
        result[state - 1] = (m2 / (count - 1)).cwiseSqrt().mean();
    }
    return result;
}

StateModel estimate_states(const std::vector<DynCorrSeries>& series, int k,
                           int restarts, std::uint64_t seed) {
    if (series.empty()) throw EmptyInput("estimate_states: empty cohort");
    const int E = series.front().edge_count();
    long n_rows = 0;
    for (const auto& s : series) {
        if (s.edge_count() != E) {
            throw ValidationError("estimate_states: inconsistent edge counts");
        }
        n_rows += s.T;
    }
    Eigen::MatrixXd points(n_rows, E);
    long row = 0;
    for (const auto& s : series) {
        points.middleRows(row, s.T) = s.values;
        row += s.T;
    }

    StateModel model;
    KMeansResult km;
    if (k <= 0) {
        ElbowResult elbow = elbow_select(points, 2, 8, restarts, seed);
        km = std::move(elbow.models[elbow.chosen_k - elbow.ks.front()]);
        model.elbow_flat_warning = elbow.flat_warning;
        model.elbow_ratios = elbow.ratios;
    } else {
        km = kmeans(points, k, restarts, seed);
    }
    model.k = km.k;
    model.centroids = std::move(km.centroids);
    model.sse_within = km.sse_within;
    model.sse_between = km.sse_between;

    row = 0;
    Eigen::MatrixXd mean_trans = Eigen::MatrixXd::Zero(model.k, model.k);
    for (const auto& s : series) {
        std::vector<int> a(km.labels.begin() + row, km.labels.begin() + row + s.T);
        mean_trans += transition_matrix(a, model.k);
        model.assignments.push_back(std::move(a));
        row += s.T;
    }
    model.mean_transition = mean_trans / static_cast<double>(series.size());
    model.occupancy_rates = occupancy(model.assignments, model.k);
    return model;
}

}  // namespace dynheat
