// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.
#include <omp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dynheat/dyncorr.hpp"
#include "dynheat/heritability.hpp"
#include "dynheat/io.hpp"
#include "dynheat/pipeline.hpp"
#include "dynheat/rng.hpp"
#include "dynheat/signal.hpp"
#include "dynheat/spectral.hpp"
#include "dynheat/states.hpp"
#include "dynheat/synth.hpp"

using namespace dynheat;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int id, const std::string& what, bool ok) {
    std::printf("[%s] %2d. %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

// ---------------------------------------------------------------- cohort --

struct Cohort {
    std::vector<RoiMatrix> subjects;
    std::vector<std::vector<int>> truth;  // planted regime id per time point
};

Cohort make_cohort(int p, int T, int n_subjects, std::uint64_t seed) {
    const auto targets = default_regime_targets(p);
    Cohort cohort;
    for (int s = 0; s < n_subjects; ++s) {
        const RegimeSchedule schedule =
            random_schedule(targets, T, 30, 80, 1.0, seed + 1000 + s);
        cohort.subjects.push_back(rescale_subject(
            generate_subject(schedule, "s" + std::to_string(s))));
        cohort.truth.push_back(target_labels(schedule));
    }
    return cohort;
}

std::vector<DynCorrSeries> cohort_dyncorr(const Cohort& cohort, Method method,
                                          double fwhm_tr) {
    const int T = static_cast<int>(cohort.subjects.front().values.rows());
    WindowSpec window{method == Method::TSW ? WindowSpec::Kind::Tapered
                                            : WindowSpec::Kind::Square,
                      static_cast<int>(std::lround(fwhm_tr)), 3.0};
    HeatKernelParams kernel{fwhm_to_bandwidth(fwhm_tr, T), T - 1, fwhm_tr};
    std::vector<DynCorrSeries> out;
    out.reserve(cohort.subjects.size());
    for (const auto& subject : cohort.subjects) {
        out.push_back(dyncorr_matrix(subject, method, window, kernel));
    }
    return out;
}

double mean_total_variation(const std::vector<DynCorrSeries>& series) {
    double tv = 0.0;
    long terms = 0;
    for (const auto& s : series) {
        for (int e = 0; e < s.values.cols(); ++e) {
            for (int t = 1; t < s.T; ++t) {
                tv += std::abs(s.values(t, e) - s.values(t - 1, e));
            }
            ++terms;
        }
    }
    return tv / static_cast<double>(terms);
}

// Best accuracy over the k! label permutations against the planted truth;
// also reports the winning map cluster -> planted regime.
double best_accuracy(const std::vector<std::vector<int>>& assignments,
                     const std::vector<std::vector<int>>& truth, int k,
                     std::vector<int>* best_map = nullptr) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 1);
    long total = 0;
    for (const auto& t : truth) total += static_cast<long>(t.size());
    double best = -1.0;
    do {
        long hits = 0;
        for (std::size_t s = 0; s < truth.size(); ++s) {
            for (std::size_t t = 0; t < truth[s].size(); ++t) {
                if (perm[assignments[s][t] - 1] == truth[s][t]) ++hits;
            }
        }
        const double acc = static_cast<double>(hits) / total;
        if (acc > best) {
            best = acc;
            if (best_map) *best_map = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ranks = [](const std::vector<double>& x) {
        std::vector<int> idx(x.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(),
                  [&](int i, int j) { return x[i] < x[j]; });
        std::vector<double> r(x.size());
        for (std::size_t pos = 0; pos < idx.size(); ++pos) {
            r[idx[pos]] = static_cast<double>(pos);
        }
        return r;
    };
    const std::vector<double> ra = ranks(a);
    const std::vector<double> rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = (n - 1.0) / 2.0;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - ma);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - ma) * (rb[i] - ma);
    }
    return cov / std::sqrt(va * vb);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ------------------------------------------------------------- criteria --

void run_criterion_1() {
    const double s15 = fwhm_to_bandwidth(15, 295);
    const double s20 = fwhm_to_bandwidth(20, 295);
    bool ok = s15 >= 2.2e-4 && s15 <= 2.45e-4 && s20 >= 3.9e-4 && s20 <= 4.3e-4;
    // numeric FWHM round trip: bisect the kernel half-maximum at t = 0.5
    for (double fwhm : {15.0, 20.0}) {
        const int T = 295;
        const double s = fwhm_to_bandwidth(fwhm, T);
        const int L = 400;
        const double peak = kernel_eval(s, L, 0.5, 0.5);
        double lo = 0.0, hi = 0.5;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (kernel_eval(s, L, 0.5, 0.5 + mid) > 0.5 * peak) lo = mid;
            else hi = mid;
        }
        const double numeric_fwhm = 2.0 * lo * T;  // width in TR units
        ok = ok && std::abs(numeric_fwhm - fwhm) <= 0.02 * fwhm;
    }
    criterion(1, "bandwidth pairing (15,295)->2.3e-4, (20,295)->4.1e-4; "
                 "numeric FWHM round trip within 2%", ok);
}

void run_criterion_2() {
    bool ok = true;
    const int L = 600;
    for (double s : {2.3e-4, 4.1e-4}) {
        for (double t : {0.0, 0.25, 0.5}) {
            const int n = 40000;
            const auto trapezoid = [&](double a, double b) {
                double acc = 0.0;
                for (int q = 0; q <= n; ++q) {
                    const double tp = a + (b - a) * q / n;
                    const double scale = (q == 0 || q == n) ? 0.5 : 1.0;
                    acc += scale * kernel_eval(s, L, t, tp) * (b - a) / n;
                }
                return acc;
            };
            const double unit = trapezoid(0.0, 1.0);
            const double full = trapezoid(0.0, 2.0);
            ok = ok && std::abs(unit - 1.0) <= 1e-4;
            ok = ok && std::abs(full - 2.0) <= 2e-4;
        }
    }
    // K at s = 10 collapses to the constant 1
    for (double t : {0.0, 0.3, 0.7, 1.0}) {
        for (double tp : {0.0, 0.5, 1.0, 1.7}) {
            ok = ok && std::abs(kernel_eval(10.0, 50, t, tp) - 1.0) <= 1e-6;
        }
    }
    criterion(2, "kernel normalization: unit integral 1 +- 1e-4, full circle "
                 "2 +- 2e-4, K(s=10) == 1 +- 1e-6", ok);
}

void run_criterion_3() {
    const int T = 295;
    const int L = T - 1;
    const double s = 2.3e-4;
    // two band-limited signal pairs with exact on-grid coefficients
    const auto make = [&](std::uint64_t which) {
        auto rng = substream(303, {which});
        std::uniform_real_distribution<double> unif(-0.2, 0.2);
        Eigen::VectorXd coeff = Eigen::VectorXd::Zero(21);
        coeff[0] = 0.5;
        for (int l = 1; l <= 20; ++l) coeff[l] = unif(rng);
        return coeff;
    };
    const auto eval = [](const Eigen::VectorXd& coeff, double t) {
        double v = 0.0;
        for (int l = 0; l < coeff.size(); ++l) v += coeff[l] * basis_eval(l, t);
        return v;
    };
    bool ok = true;
    double worst = 0.0;
    const int n = 8000;
    // fine-grid basis matrices reused across pairs: K(t, t') via the
    // truncated series, quadrature via trapezoid weights on [0, 1]
    const Eigen::VectorXd grid = time_grid(T);
    Eigen::MatrixXd basis_grid(T, L + 1);
    for (int j = 0; j < T; ++j) {
        for (int l = 0; l <= L; ++l) basis_grid(j, l) = basis_eval(l, grid[j]);
    }
    Eigen::MatrixXd basis_fine(n + 1, L + 1);
    for (int q = 0; q <= n; ++q) {
        const double tp = static_cast<double>(q) / n;
        for (int l = 0; l <= L; ++l) basis_fine(q, l) = basis_eval(l, tp);
    }
    Eigen::VectorXd weights(L + 1);
    for (int l = 0; l <= L; ++l) weights[l] = heat_weight(l, s);
    // kernel matrix K(grid_j, fine_q)
    const Eigen::MatrixXd K =
        basis_grid * weights.asDiagonal() * basis_fine.transpose();
    Eigen::VectorXd trap = Eigen::VectorXd::Constant(n + 1, 1.0 / n);
    trap[0] *= 0.5;
    trap[n] *= 0.5;

    for (int pair = 0; pair < 2; ++pair) {
        const Eigen::VectorXd cx = make(2 * pair);
        const Eigen::VectorXd cy = make(2 * pair + 1);
        Eigen::VectorXd x(T), y(T);
        for (int j = 0; j < T; ++j) {
            x[j] = eval(cx, grid[j]);
            y[j] = eval(cy, grid[j]);
        }
        const Eigen::VectorXd rho =
            heat_dyncorr(x, y, HeatKernelParams{s, L, 0.0});

        Eigen::VectorXd fx(n + 1), fy(n + 1);
        for (int q = 0; q <= n; ++q) {
            const double tp = static_cast<double>(q) / n;
            fx[q] = eval(cx, tp);
            fy[q] = eval(cy, tp);
        }
        const Eigen::VectorXd mu_x = K * (trap.array() * fx.array()).matrix();
        const Eigen::VectorXd mu_y = K * (trap.array() * fy.array()).matrix();
        const Eigen::VectorXd e_xy =
            K * (trap.array() * fx.array() * fy.array()).matrix();
        const Eigen::VectorXd e_xx =
            K * (trap.array() * fx.array() * fx.array()).matrix();
        const Eigen::VectorXd e_yy =
            K * (trap.array() * fy.array() * fy.array()).matrix();
        for (int j = 0; j < T; ++j) {
            const double quad =
                (e_xy[j] - mu_x[j] * mu_y[j]) /
                std::sqrt((e_xx[j] - mu_x[j] * mu_x[j]) *
                          (e_yy[j] - mu_y[j] * mu_y[j]));
            worst = std::max(worst, std::abs(rho[j] - quad));
        }
    }
    ok = worst <= 1e-4;
    std::printf("       spectral-vs-quadrature max abs deviation: %.3e\n", worst);
    criterion(3, "heat dynamic correlation matches trapezoid quadrature "
                 "within 1e-4 at every grid point", ok);
}

struct CohortResults {
    Cohort cohort;
    std::map<std::string, std::vector<DynCorrSeries>> by_method;
};

CohortResults g_shared;  // built once, reused by criteria 4-6

void build_shared_cohort() {
    g_shared.cohort = make_cohort(10, 300, 40, 8800);
    for (double fwhm : {15.0, 20.0}) {
        for (Method m : {Method::SW, Method::TSW, Method::HEAT}) {
            const std::string key =
                method_name(m) + "@" + std::to_string(static_cast<int>(fwhm));
            g_shared.by_method[key] = cohort_dyncorr(g_shared.cohort, m, fwhm);
        }
    }
}

void run_criterion_4() {
    bool ok = true;
    for (int fwhm : {15, 20}) {
        const double tv_sw =
            mean_total_variation(g_shared.by_method[method_name(Method::SW) + "@" + std::to_string(fwhm)]);
        const double tv_tsw =
            mean_total_variation(g_shared.by_method[method_name(Method::TSW) + "@" + std::to_string(fwhm)]);
        const double tv_heat =
            mean_total_variation(g_shared.by_method[method_name(Method::HEAT) + "@" + std::to_string(fwhm)]);
        const double gap1 = (tv_sw - tv_tsw) / tv_sw;
        const double gap2 = (tv_tsw - tv_heat) / tv_tsw;
        std::printf("       FWHM %2d: TV SW %.4f TSW %.4f HEAT %.4f "
                    "(gaps %.1f%%, %.1f%%)\n",
                    fwhm, tv_sw, tv_tsw, tv_heat, 100 * gap1, 100 * gap2);
        ok = ok && tv_heat < tv_tsw && tv_tsw < tv_sw && gap1 >= 0.05 &&
             gap2 >= 0.05;
    }
    criterion(4, "smoothness ordering HEAT < TSW < SW at FWHM 15 and 20, "
                 "each gap >= 5%", ok);
}

StateModel g_heat_model;  // criterion 5 output reused by criterion 6
StateModel g_sw_model;
std::vector<int> g_heat_map, g_sw_map;  // cluster -> planted regime

void run_criterion_5() {
    const auto& heat = g_shared.by_method[method_name(Method::HEAT) + "@15"];
    const auto& sw = g_shared.by_method[method_name(Method::SW) + "@15"];

    // elbow on the HEAT cohort must land on the planted k = 3
    Eigen::MatrixXd stacked(heat.size() * 300, heat.front().values.cols());
    int row = 0;
    for (const auto& s : heat) {
        stacked.middleRows(row, s.T) = s.values;
        row += s.T;
    }
    const ElbowResult elbow = elbow_select(stacked, 2, 8, 20, 4242);
    const bool elbow_ok = elbow.chosen_k == 3;

    g_heat_model = estimate_states(heat, 3, 100, 4242);
    g_sw_model = estimate_states(sw, 3, 100, 4242);
    const double acc_heat =
        best_accuracy(g_heat_model.assignments, g_shared.cohort.truth, 3,
                      &g_heat_map);
    const double acc_sw = best_accuracy(g_sw_model.assignments,
                                        g_shared.cohort.truth, 3, &g_sw_map);

    const auto disp_heat = within_state_dispersion(heat, g_heat_model.assignments, 3);
    const auto disp_sw = within_state_dispersion(sw, g_sw_model.assignments, 3);
    bool disp_ok = true;
    for (int regime = 1; regime <= 3; ++regime) {
        // locate each method's cluster mapped to this planted regime
        int ch = 0, cs = 0;
        for (int c = 0; c < 3; ++c) {
            if (g_heat_map[c] == regime) ch = c;
            if (g_sw_map[c] == regime) cs = c;
        }
        std::printf("       regime %d dispersion: HEAT %.4f vs SW %.4f\n",
                    regime, disp_heat[ch], disp_sw[cs]);
        disp_ok = disp_ok && disp_heat[ch] < disp_sw[cs];
    }
    std::printf("       elbow k = %d, accuracy HEAT %.4f vs SW %.4f\n",
                elbow.chosen_k, acc_heat, acc_sw);
    criterion(5, "state recovery: elbow k=3, HEAT accuracy >= SW and >= 0.90, "
                 "HEAT dispersion < SW in all states",
              elbow_ok && acc_heat >= acc_sw && acc_heat >= 0.90 && disp_ok);
}

void run_criterion_6() {
    bool sums_ok = true;
    for (int r = 0; r < 3; ++r) {
        sums_ok = sums_ok &&
                  std::abs(g_heat_model.mean_transition.row(r).sum() - 1.0) <= 1e-12 &&
                  std::abs(g_sw_model.mean_transition.row(r).sum() - 1.0) <= 1e-12;
    }
    sums_ok = sums_ok &&
              std::abs(g_heat_model.occupancy_rates.sum() - 1.0) <= 1e-12 &&
              std::abs(g_sw_model.occupancy_rates.sum() - 1.0) <= 1e-12;
    bool diag_ok = true;
    for (int regime = 1; regime <= 3; ++regime) {
        int ch = 0, cs = 0;
        for (int c = 0; c < 3; ++c) {
            if (g_heat_map[c] == regime) ch = c;
            if (g_sw_map[c] == regime) cs = c;
        }
        const double dh = g_heat_model.mean_transition(ch, ch);
        const double ds = g_sw_model.mean_transition(cs, cs);
        std::printf("       regime %d stay probability: HEAT %.4f vs SW %.4f\n",
                    regime, dh, ds);
        diag_ok = diag_ok && dh > ds;
    }
    criterion(6, "Markov statistics: rows and occupancy sum to 1 +- 1e-12; "
                 "HEAT stay probabilities exceed SW's", sums_ok && diag_ok);
}

void run_criterion_7() {
    const int m = 200;
    auto rng = substream(707, {1});
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd pairs(2, m);
    for (int i = 0; i < 2 * m; ++i) pairs(i / m, i % m) = normal(rng);

    RunningCorrState state = RunningCorrState::from_pairs(pairs);
    Eigen::MatrixXd current = pairs;
    std::uniform_int_distribution<int> pick(0, m - 1);
    double worst = 0.0;
    for (int step = 0; step < 100000; ++step) {
        const int i = pick(rng);
        transpose_update(state, current(0, i), current(1, i));
        current.col(i).reverseInPlace();
        const double direct = RunningCorrState::from_pairs(current).gamma();
        worst = std::max(worst, std::abs(state.gamma() - direct));
    }
    const bool exact_ok = worst <= 1e-10;
    std::printf("       max |gamma_incremental - gamma_scratch| over 1e5 "
                "steps: %.3e\n", worst);

    // timing at m = 500: per-update cost vs per-recompute cost
    const int big = 500;
    Eigen::MatrixXd wide(2, big);
    for (int i = 0; i < 2 * big; ++i) wide(i / big, i % big) = normal(rng);
    RunningCorrState wstate = RunningCorrState::from_pairs(wide);
    std::uniform_int_distribution<int> wpick(0, big - 1);
    std::vector<int> order(200000);
    for (auto& o : order) o = wpick(rng);

    const auto t0 = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (int o : order) {
        transpose_update(wstate, wide(0, o), wide(1, o));
        wide.col(o).reverseInPlace();
        sink += wstate.omega12;
    }
    const auto t1 = std::chrono::steady_clock::now();
    const int recomputes = 4000;
    for (int r = 0; r < recomputes; ++r) {
        wide.col(order[r]).reverseInPlace();
        sink += RunningCorrState::from_pairs(wide).gamma();
    }
    const auto t2 = std::chrono::steady_clock::now();
    const double per_update =
        std::chrono::duration<double>(t1 - t0).count() / order.size();
    const double per_recompute =
        std::chrono::duration<double>(t2 - t1).count() / recomputes;
    const double speedup = per_recompute / per_update;
    std::printf("       m=500: %.1f ns/update vs %.1f ns/recompute "
                "(%.0fx, sink %.2f)\n",
                1e9 * per_update, 1e9 * per_recompute, speedup, sink * 1e-12);
    criterion(7, "incremental update exact to 1e-10 over 1e5 steps; >= 20x "
                 "faster than recompute at m=500",
              exact_ok && speedup >= 20.0);
}

void run_criterion_8() {
    const int m = 8;
    auto rng = substream(808, {1});
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd pairs(2, m);
    for (int i = 0; i < 2 * m; ++i) pairs(i / m, i % m) = normal(rng);
    // correlate the rows so the average is away from zero
    pairs.row(1) = 0.6 * pairs.row(0) + 0.8 * pairs.row(1);

    double exact = 0.0;
    for (int mask = 0; mask < 256; ++mask) {
        Eigen::MatrixXd flipped = pairs;
        for (int i = 0; i < m; ++i) {
            if ((mask >> i) & 1) flipped.col(i).reverseInPlace();
        }
        exact += RunningCorrState::from_pairs(flipped).gamma();
    }
    exact /= 256.0;
    const WalkResult walk = transposition_walk(pairs, 50000, 100, 1212);
    std::printf("       walk mean %.6f vs exhaustive %.6f (|diff| %.4f), "
                "SD %.4f\n", walk.mean, exact, std::abs(walk.mean - exact),
                walk.sd);
    criterion(8, "transposition walk (J=50000, R=100) matches the exhaustive "
                 "2^8 average within 0.01 with repeat SD < 0.01",
              std::abs(walk.mean - exact) <= 0.01 && walk.sd < 0.01);
}

void run_criterion_9() {
    // part 1: constant planted A = 0.6, C = 0.2 over 20 edges, 200 pairs
    const int edges = 20;
    AceSpec spec;
    spec.a_per_edge = Eigen::VectorXd::Constant(edges, 0.6);
    spec.c_per_edge = Eigen::VectorXd::Constant(edges, 0.2);
    spec.mz_count = 200;
    spec.dz_count = 200;
    spec.seed = 909;
    const TwinCohort cohort = generate_twin_cohort(spec);
    HiMapConfig config;
    config.steps = 20000;
    config.repeats = 30;
    config.seed = 77;
    const auto entries = hi_map_state(cohort.mz, cohort.dz, 1, 7, config);
    double h_mean = 0.0;
    for (const auto& e : entries) h_mean += e.hi;
    h_mean /= entries.size();

    // part 2: planted A gradient, rank recovery across the 20 edges
    AceSpec grad = spec;
    grad.a_per_edge = Eigen::VectorXd::LinSpaced(edges, 0.0, 0.9);
    grad.c_per_edge = Eigen::VectorXd::Constant(edges, 0.05);
    grad.seed = 920;
    const TwinCohort gcohort = generate_twin_cohort(grad);
    const auto gentries = hi_map_state(gcohort.mz, gcohort.dz, 1, 7, config);
    std::vector<double> planted(edges), estimated(edges);
    for (int e = 0; e < edges; ++e) {
        planted[e] = grad.a_per_edge[e];
        estimated[e] = gentries[e].hi;
    }
    const double rho = spearman(planted, estimated);
    std::printf("       mean HI %.4f (planted 0.6); Spearman over gradient "
                "%.4f\n", h_mean, rho);
    criterion(9, "planted heritability: |h - 0.6| <= 0.1 at 200 pairs; "
                 "planted-A Spearman >= 0.9 over 20 edges",
              std::abs(h_mean - 0.6) <= 0.1 && rho >= 0.9);
}

void run_criterion_10() {
    const fs::path dir = fs::temp_directory_path() / "dynheat_acceptance_det";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const auto targets = default_regime_targets(5);
    Manifest manifest;
    for (int pr = 0; pr < 6; ++pr) {
        const RegimeSchedule schedule =
            random_schedule(targets, 80, 15, 30, 1.0, 5000 + pr);
        const std::string pair_id = "p" + std::to_string(pr);
        const Zygosity z = pr < 3 ? Zygosity::MZ : Zygosity::DZ;
        for (int twin = 1; twin <= 2; ++twin) {
            const std::string id = pair_id + "t" + std::to_string(twin);
            write_roi_csv(dir / (id + ".csv"),
                          generate_subject(schedule, id));
            manifest.entries.push_back({id, dir / (id + ".csv"), z, pair_id, twin});
        }
    }
    write_manifest(dir / "manifest.json", manifest);

    RunConfig config;
    config.method = Method::HEAT;
    config.fwhm_tr = 10.0;
    config.k = 3;
    config.restarts = 20;
    config.walk_steps = 1000;
    config.walk_repeats = 10;
    config.seed = 31337;
    config.manifest_path = dir / "manifest.json";

    const int max_threads = omp_get_max_threads();
    config.output_dir = dir / "run_a";
    omp_set_num_threads(max_threads);
    const fs::path run_a = run_pipeline(config);
    config.output_dir = dir / "run_b";
    omp_set_num_threads(1);
    const fs::path run_b = run_pipeline(config);
    omp_set_num_threads(max_threads);

    bool ok = true;
    for (const std::string name :
         {"centroids.csv", "assignments.csv", "transitions.json",
          "occupancy.json", "dispersion.json", "hi_map.csv", "hi_top.json"}) {
        ok = ok && slurp(run_a / name) == slurp(run_b / name);
    }
    for (const auto& entry : manifest.entries) {
        ok = ok && slurp(run_a / "dyncorr" / (entry.subject_id + ".bin")) ==
                       slurp(run_b / "dyncorr" / (entry.subject_id + ".bin"));
    }
    criterion(10, "two full runs with identical config are byte-identical "
                  "across thread counts", ok);
}

}  // namespace

int main() {
    std::printf("acceptance suite (threads: %d)\n", omp_get_max_threads());
    run_criterion_1();
    run_criterion_2();
    run_criterion_3();
    build_shared_cohort();
    run_criterion_4();
    run_criterion_5();
    run_criterion_6();
    run_criterion_7();
    run_criterion_8();
    run_criterion_9();
    run_criterion_10();
    std::printf("%d criterion(s) failed\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
