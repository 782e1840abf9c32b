#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynheat/errors.hpp"
#include "dynheat/io.hpp"
#include "dynheat/pipeline.hpp"
#include "dynheat/rng.hpp"
#include "dynheat/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dynheat;

namespace {

struct SimSpec {
    std::uint64_t seed = 0;
    int T = 300;
    int p = 10;
    int subjects = 0;  // unpaired
    int mz_pairs = 0;
    int dz_pairs = 0;
    int dwell_min = 20;
    int dwell_max = 60;
    double noise_sd = 1.0;
    double ramp_tr = 0.0;
    double ace_a = 0.0;
    double ace_c = 0.0;
    double ace_scale = 0.1;
};

SimSpec read_sim_spec(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    json doc = json::parse(in);
    SimSpec spec;
    spec.seed = doc.at("seed").get<std::uint64_t>();
    spec.T = doc.value("T", 300);
    spec.p = doc.value("p", 10);
    spec.subjects = doc.value("subjects", 0);
    if (doc.contains("twins")) {
        spec.mz_pairs = doc["twins"].value("mz", 0);
        spec.dz_pairs = doc["twins"].value("dz", 0);
    }
    spec.dwell_min = doc.value("dwell_min", 20);
    spec.dwell_max = doc.value("dwell_max", 60);
    spec.noise_sd = doc.value("noise_sd", 1.0);
    spec.ramp_tr = doc.value("ramp_tr", 0.0);
    if (doc.contains("ace")) {
        spec.ace_a = doc["ace"].value("a", 0.0);
        spec.ace_c = doc["ace"].value("c", 0.0);
        spec.ace_scale = doc["ace"].value("scale", 0.1);
    }
    return spec;
}

// Additive per-edge target perturbation shared within a twin pair in
// proportion to the ACE components; makes the state-average maps heritable.
std::vector<Eigen::MatrixXd> perturbed_targets(
    const std::vector<Eigen::MatrixXd>& base, double a, double c, double scale,
    std::mt19937_64& shared_rng, std::mt19937_64& private_rng, bool mz) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const double sa = std::sqrt(a);
    const double sc = std::sqrt(c);
    const double se = std::sqrt(std::max(0.0, 1.0 - a - c));
    std::vector<Eigen::MatrixXd> out;
    for (const auto& target : base) {
        Eigen::MatrixXd t = target;
        const int p = static_cast<int>(t.rows());
        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j) {
                const double g_shared = normal(shared_rng);
                const double c_env = normal(shared_rng);
                const double g =
                    mz ? g_shared
                       : (g_shared + normal(private_rng)) / std::sqrt(2.0);
                const double delta =
                    scale * (sa * g + sc * c_env + se * normal(private_rng));
                const double v = std::clamp(t(i, j) + delta, -0.9, 0.9);
                t(i, j) = v;
                t(j, i) = v;
            }
        }
        out.push_back(nearest_correlation(t));
    }
    return out;
}

int cmd_simulate(const fs::path& spec_path, const fs::path& out_dir) {
    const SimSpec spec = read_sim_spec(spec_path);
    fs::create_directories(out_dir);
    const auto base_targets = default_regime_targets(spec.p);

    Manifest manifest;
    auto emit_subject = [&](const std::string& id,
                            const std::vector<Eigen::MatrixXd>& targets,
                            std::uint64_t schedule_seed, Zygosity z,
                            const std::string& pair_id, int twin_index) {
        RegimeSchedule schedule =
            random_schedule(targets, spec.T, spec.dwell_min, spec.dwell_max,
                            spec.noise_sd, schedule_seed);
        schedule.ramp_tr = spec.ramp_tr;
        const RoiMatrix subject = generate_subject(schedule, id);
        write_roi_csv(out_dir / (id + ".csv"), subject);
        ManifestEntry entry;
        entry.subject_id = id;
        entry.path = out_dir / (id + ".csv");
        entry.zygosity = z;
        entry.pair_id = pair_id;
        entry.twin_index = twin_index;
        manifest.entries.push_back(entry);
    };

    for (int s = 0; s < spec.subjects; ++s) {
        const std::string id = "sub_" + std::to_string(s + 1);
        emit_subject(id, base_targets,
                     substream(spec.seed, {10, static_cast<std::uint64_t>(s)})(),
                     Zygosity::None, "", 0);
    }

    auto emit_pair = [&](Zygosity z, int index) {
        const bool mz = z == Zygosity::MZ;
        const std::string pair_id =
            (mz ? std::string("mz_") : std::string("dz_")) + std::to_string(index + 1);
        const std::uint64_t zid = mz ? 20 : 30;
        const std::uint64_t schedule_seed =
            substream(spec.seed, {zid, static_cast<std::uint64_t>(index), 0})();
        auto shared1 = substream(spec.seed, {zid, static_cast<std::uint64_t>(index), 1});
        auto shared2 = shared1;  // same shared stream for both twins
        auto priv1 = substream(spec.seed, {zid, static_cast<std::uint64_t>(index), 2});
        auto priv2 = substream(spec.seed, {zid, static_cast<std::uint64_t>(index), 3});
        const auto t1 = perturbed_targets(base_targets, spec.ace_a, spec.ace_c,
                                          spec.ace_scale, shared1, priv1, mz);
        const auto t2 = perturbed_targets(base_targets, spec.ace_a, spec.ace_c,
                                          spec.ace_scale, shared2, priv2, mz);
        emit_subject(pair_id + "_a", t1, schedule_seed, z, pair_id, 1);
        emit_subject(pair_id + "_b", t2, schedule_seed, z, pair_id, 2);
    };
    for (int i = 0; i < spec.mz_pairs; ++i) emit_pair(Zygosity::MZ, i);
    for (int i = 0; i < spec.dz_pairs; ++i) emit_pair(Zygosity::DZ, i);

    write_manifest(out_dir / "manifest.json", manifest);
    std::cout << "simulate: wrote " << manifest.entries.size()
              << " subjects to " << out_dir.string() << "\n";
    return 0;
}

RunConfig config_defaults() {
    RunConfig config;
    config.seed = 0;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynheat: dynamic correlation states and twin heritability"};
    app.require_subcommand(1);

    // simulate
    std::string sim_spec, sim_out;
    auto* simulate = app.add_subcommand(
        "simulate", "Generate a synthetic cohort (CSV signals + manifest)");
    simulate->add_option("--spec", sim_spec, "JSON simulation spec")->required();
    simulate->add_option("--out", sim_out, "output directory")->required();

    // shared stage options
    RunConfig config = config_defaults();
    std::string method = "heat";
    std::string k_arg = "auto";
    std::string manifest_path, out_dir, input_dir;

    auto add_method_opts = [&](CLI::App* cmd) {
        cmd->add_option("--method", method, "sw|tsw|heat")
            ->check(CLI::IsMember({"sw", "tsw", "heat"}));
        cmd->add_option("--fwhm", config.fwhm_tr, "window/kernel FWHM in TRs");
        cmd->add_option("--degree", config.degree,
                        "cosine expansion degree (default T-1)");
        cmd->add_option("--taper-bandwidth", config.taper_bandwidth,
                        "Gaussian taper bandwidth in TRs (tsw)");
    };

    auto* dyncorr_cmd = app.add_subcommand(
        "dyncorr", "Dynamic correlation series for every manifest subject");
    dyncorr_cmd->add_option("--manifest", manifest_path)->required();
    dyncorr_cmd->add_option("--out", out_dir)->required();
    add_method_opts(dyncorr_cmd);

    auto* states_cmd = app.add_subcommand(
        "states", "Cluster dynamic correlations into connectivity states");
    states_cmd->add_option("--input", input_dir, "directory of dyncorr outputs")
        ->required();
    states_cmd->add_option("--out", out_dir)->required();
    states_cmd->add_option("--k", k_arg, "auto or a fixed integer");
    states_cmd->add_option("--restarts", config.restarts);
    states_cmd->add_option("--seed", config.seed);

    auto* herit_cmd = app.add_subcommand(
        "heritability", "Twin heritability of state-average connectivity");
    herit_cmd->add_option("--manifest", manifest_path)->required();
    herit_cmd
        ->add_option("--input", input_dir,
                     "run directory with dyncorr/ and assignments.csv")
        ->required();
    herit_cmd->add_option("--out", out_dir)->required();
    herit_cmd->add_option("--steps", config.walk_steps);
    herit_cmd->add_option("--repeats", config.walk_repeats);
    herit_cmd->add_option("--seed", config.seed);
    herit_cmd->add_flag("--clamp", config.clamp_hi, "clamp HI to [0,1]");

    std::string report_dir;
    int top_n = 5;
    auto* report_cmd = app.add_subcommand("report", "Plot-ready tables for a run");
    report_cmd->add_option("--run", report_dir)->required();
    report_cmd->add_option("--top", top_n, "rows per state in the HI table");

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Full pipeline from a JSON config");
    run_cmd->add_option("--config", config_path)->required();
    run_cmd->add_option("--method", method);
    run_cmd->add_option("--fwhm", config.fwhm_tr);
    run_cmd->add_option("--k", k_arg);
    run_cmd->add_option("--restarts", config.restarts);
    run_cmd->add_option("--steps", config.walk_steps);
    run_cmd->add_option("--repeats", config.walk_repeats);
    run_cmd->add_option("--seed", config.seed);
    run_cmd->add_option("--manifest", manifest_path);
    run_cmd->add_option("--out", out_dir);

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            return cmd_simulate(sim_spec, sim_out);
        }
        if (dyncorr_cmd->parsed()) {
            config.method = method_from_name(method);
            const Manifest manifest = read_manifest(manifest_path);
            const auto series = stage_dyncorr(manifest, config, out_dir);
            std::cout << "dyncorr: wrote " << series.size() << " series to "
                      << out_dir << "/dyncorr\n";
            return 0;
        }
        if (states_cmd->parsed()) {
            config.k = k_arg == "auto" ? 0 : std::stoi(k_arg);
            const auto series = read_dyncorr_dir(fs::path(input_dir) / "dyncorr");
            const StateModel model = stage_states(series, config, out_dir);
            std::cout << "states: k=" << model.k
                      << " occupancy=" << model.occupancy_rates.transpose() << "\n";
            return 0;
        }
        if (herit_cmd->parsed()) {
            const Manifest manifest = read_manifest(manifest_path);
            const auto series = read_dyncorr_dir(fs::path(input_dir) / "dyncorr");
            const auto raw_assignments =
                read_assignments_csv(fs::path(input_dir) / "assignments.csv");
            StateModel model;
            model.k = 0;
            for (const auto& s : series) {
                for (const auto& [id, labels] : raw_assignments) {
                    if (id == s.subject_id) {
                        model.assignments.push_back(labels);
                        for (int l : labels) model.k = std::max(model.k, l);
                        break;
                    }
                }
            }
            if (model.assignments.size() != series.size()) {
                throw ValidationError("assignments.csv does not cover all subjects");
            }
            const auto entries =
                stage_heritability(manifest, series, model, config, out_dir);
            std::cout << "heritability: " << entries.size() << " entries\n";
            return 0;
        }
        if (report_cmd->parsed()) {
            report(report_dir, top_n);
            std::cout << "report: tables written to " << report_dir << "/report\n";
            return 0;
        }
        if (run_cmd->parsed()) {
            RunConfig file_config = RunConfig::from_json_file(config_path);
            // Command-line overrides.
            if (run_cmd->count("--method")) file_config.method = method_from_name(method);
            if (run_cmd->count("--fwhm")) file_config.fwhm_tr = config.fwhm_tr;
            if (run_cmd->count("--k")) {
                file_config.k = k_arg == "auto" ? 0 : std::stoi(k_arg);
            }
            if (run_cmd->count("--restarts")) file_config.restarts = config.restarts;
            if (run_cmd->count("--steps")) file_config.walk_steps = config.walk_steps;
            if (run_cmd->count("--repeats")) file_config.walk_repeats = config.walk_repeats;
            if (run_cmd->count("--seed")) file_config.seed = config.seed;
            if (run_cmd->count("--manifest")) file_config.manifest_path = manifest_path;
            if (run_cmd->count("--out")) file_config.output_dir = out_dir;
            const auto dir = run_pipeline(file_config);
            std::cout << "run: artifacts in " << dir.string() << "\n";
            return 0;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
