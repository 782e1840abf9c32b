#include "dynheat/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "dynheat/errors.hpp"
#include "dynheat/rng.hpp"

namespace dynheat {

namespace {

// Symmetric PSD square root via eigendecomposition; negative eigenvalues
// below -1e-10 are rejected, small negatives are clipped to zero.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& target) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(target);
    Eigen::VectorXd ev = es.eigenvalues();
    if (ev.minCoeff() < -1e-10) {
        throw NotPSD("target correlation matrix has eigenvalue " +
                     std::to_string(ev.minCoeff()));
    }
    ev = ev.cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

std::uint64_t id_hash(const std::string& id) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char c : id) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace

std::vector<int> schedule_labels(const RegimeSchedule& schedule) {
    if (schedule.segments.empty()) {
        throw ValidationError("schedule_labels: empty schedule");
    }
    const int T = schedule.segments.back().end_t;
    std::vector<int> labels(T, 0);
    int expect = 0;
    for (std::size_t s = 0; s < schedule.segments.size(); ++s) {
        const auto& seg = schedule.segments[s];
        if (seg.start_t != expect || seg.end_t <= seg.start_t) {
            throw ValidationError("schedule_labels: segments must partition [0,T)");
        }
        expect = seg.end_t;
        for (int t = seg.start_t; t < seg.end_t; ++t) {
            labels[t] = static_cast<int>(s) + 1;
        }
    }
    return labels;
}

std::vector<int> target_labels(const RegimeSchedule& schedule) {
    std::vector<int> segs = schedule_labels(schedule);
    for (int& label : segs) {
        const auto& seg = schedule.segments[label - 1];
        label = seg.target_id > 0 ? seg.target_id : label;
    }
    return segs;
}

RoiMatrix generate_subject(const RegimeSchedule& schedule,
                           const std::string& subject_id) {
    if (schedule.segments.empty()) {
        throw ValidationError("generate_subject: empty schedule");
    }
    const int p = static_cast<int>(schedule.segments.front().target.rows());
    const int T = schedule.segments.back().end_t;

    std::vector<Eigen::MatrixXd> roots;
    roots.reserve(schedule.segments.size());
    for (const auto& seg : schedule.segments) {
        if (seg.target.rows() != p || seg.target.cols() != p) {
            throw ValidationError("generate_subject: target size mismatch");
        }
        roots.push_back(psd_sqrt(seg.target));
    }
    const std::vector<int> labels = schedule_labels(schedule);

    auto rng = substream(schedule.seed, {id_hash(subject_id)});
    std::normal_distribution<double> normal(0.0, 1.0);

    RoiMatrix out;
    out.subject_id = subject_id;
    out.values.resize(T, p);
    Eigen::VectorXd z(p);
    for (int t = 0; t < T; ++t) {
        for (int r = 0; r < p; ++r) z[r] = normal(rng);
        int seg = labels[t] - 1;
        Eigen::VectorXd row;
        if (schedule.ramp_tr > 0.0 && seg + 1 < static_cast<int>(roots.size())) {
            // Logistic ramp between consecutive segment targets.
            const int boundary = schedule.segments[seg].end_t;
            const double w =
                1.0 / (1.0 + std::exp(-(t - boundary + 0.5) / schedule.ramp_tr));
            row = (1.0 - w) * (roots[seg] * z) + w * (roots[seg + 1] * z);
        } else {
            row = roots[seg] * z;
        }
        out.values.row(t) = schedule.noise_sd * row.transpose();
    }
    return out;
}

TwinCohort generate_twin_cohort(const AceSpec& spec) {
    if (spec.a_per_edge.size() != spec.c_per_edge.size()) {
        throw ValidationError("generate_twin_cohort: A/C size mismatch");
    }
    for (int e = 0; e < spec.a_per_edge.size(); ++e) {
        const double a = spec.a_per_edge[e];
        const double c = spec.c_per_edge[e];
        if (a < 0.0 || c < 0.0 || a + c > 1.0 + 1e-12) {
            throw ValidationError("generate_twin_cohort: need A,C >= 0, A+C <= 1");
        }
    }
    const int F = static_cast<int>(spec.a_per_edge.size());
    TwinCohort cohort;
    cohort.mz.assign(F, Eigen::MatrixXd(2, spec.mz_count));
    cohort.dz.assign(F, Eigen::MatrixXd(2, spec.dz_count));

    for (int f = 0; f < F; ++f) {
        const double sa = std::sqrt(spec.a_per_edge[f]);
        const double sc = std::sqrt(spec.c_per_edge[f]);
        const double se =
            std::sqrt(std::max(0.0, 1.0 - spec.a_per_edge[f] - spec.c_per_edge[f]));
        auto rng = substream(spec.seed, {static_cast<std::uint64_t>(f)});
        std::normal_distribution<double> normal(0.0, 1.0);
        for (int i = 0; i < spec.mz_count; ++i) {
            const double g = normal(rng);
            const double c = normal(rng);
            cohort.mz[f](0, i) = sa * g + sc * c + se * normal(rng);
            cohort.mz[f](1, i) = sa * g + sc * c + se * normal(rng);
        }
        for (int i = 0; i < spec.dz_count; ++i) {
            // Cross-twin genetic correlation exactly 1/2:
            // g_k = (g_shared + g_private_k) / sqrt(2).
            const double g_shared = normal(rng);
            const double c = normal(rng);
            for (int twin = 0; twin < 2; ++twin) {
                const double g = (g_shared + normal(rng)) / std::numbers::sqrt2;
                cohort.dz[f](twin, i) = sa * g + sc * c + se * normal(rng);
            }
        }
    }
    return cohort;
}

std::vector<Eigen::MatrixXd> default_regime_targets(int p) {
    std::vector<Eigen::MatrixXd> targets;
    // Uniform positive coupling.
    Eigen::MatrixXd t1 = Eigen::MatrixXd::Constant(p, p, 0.7);
    t1.diagonal().setOnes();
    // Uncoupled.
    Eigen::MatrixXd t2 = Eigen::MatrixXd::Identity(p, p);
    // Two anti-correlated blocks.
    Eigen::MatrixXd t3(p, p);
    const int half = p / 2;
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            const bool same_block = (i < half) == (j < half);
            t3(i, j) = same_block ? 0.6 : -0.4;
        }
    }
    t3.diagonal().setOnes();
    targets.push_back(std::move(t1));
    targets.push_back(std::move(t2));
    targets.push_back(std::move(t3));
    return targets;
}

Eigen::MatrixXd nearest_correlation(const Eigen::MatrixXd& m) {
    Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(1e-8);
    Eigen::MatrixXd psd =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    const Eigen::VectorXd d = psd.diagonal().cwiseSqrt().cwiseInverse();
    return d.asDiagonal() * psd * d.asDiagonal();
}

RegimeSchedule random_schedule(const std::vector<Eigen::MatrixXd>& targets,
                               int T, int dwell_min, int dwell_max,
                               double noise_sd, std::uint64_t seed) {
    if (targets.empty() || dwell_min < 1 || dwell_max < dwell_min) {
        throw ValidationError("random_schedule: bad arguments");
    }
    RegimeSchedule schedule;
    schedule.noise_sd = noise_sd;
    schedule.seed = seed;
    auto rng = substream(seed, {0x5c4ed01eULL});
    std::uniform_int_distribution<int> dwell(dwell_min, dwell_max);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(targets.size()) - 1);
    int t = 0;
    int prev = -1;
    while (t < T) {
        int which = pick(rng);
        if (which == prev) which = (which + 1) % static_cast<int>(targets.size());
        prev = which;
        int len = dwell(rng);
        if (T - t - len < dwell_min) len = T - t;  // absorb the remainder
        schedule.segments.push_back({t, t + len, targets[which], which + 1});
        t += len;
    }
    return schedule;
}

}  // namespace dynheat
