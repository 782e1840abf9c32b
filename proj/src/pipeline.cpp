#include "dynheat/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "dynheat/errors.hpp"

namespace dynheat {

using nlohmann::json;

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path.string());
    json doc = json::parse(in);
    RunConfig c;
    c.method = method_from_name(doc.value("method", std::string("heat")));
    c.fwhm_tr = doc.value("fwhm_tr", 15.0);
    c.degree = doc.value("degree", -1);
    c.taper_bandwidth = doc.value("taper_bandwidth", 3.0);
    if (doc.contains("k")) {
        if (doc["k"].is_string()) {
            if (doc["k"].get<std::string>() != "auto") {
                throw ValidationError("config: k must be \"auto\" or an integer");
            }
            c.k = 0;
        } else {
            c.k = doc["k"].get<int>();
        }
    }
    c.restarts = doc.value("restarts", 100);
    c.walk_steps = doc.value("walk_steps", 50000L);
    c.walk_repeats = doc.value("walk_repeats", 100);
    c.clamp_hi = doc.value("clamp_hi", false);
    if (!doc.contains("seed")) {
        throw ValidationError("config: explicit seed is required");
    }
    c.seed = doc["seed"].get<std::uint64_t>();
    const auto base = path.has_parent_path() ? path.parent_path()
                                             : std::filesystem::path(".");
    std::filesystem::path m = doc.at("manifest").get<std::string>();
    c.manifest_path = m.is_absolute() ? m : base / m;
    std::filesystem::path o = doc.at("output_dir").get<std::string>();
    c.output_dir = o.is_absolute() ? o : base / o;
    return c;
}

std::string RunConfig::canonical_json() const {
    json doc = {
        {"method", method_name(method)},
        {"fwhm_tr", fwhm_tr},
        {"degree", degree},
        {"taper_bandwidth", taper_bandwidth},
        {"k", k},
        {"restarts", restarts},
        {"walk_steps", walk_steps},
        {"walk_repeats", walk_repeats},
        {"clamp_hi", clamp_hi},
        {"seed", seed},
        {"manifest", manifest_path.string()},
        {"output_dir", output_dir.string()},
    };
    return doc.dump();  // nlohmann orders keys, so the dump is canonical
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over canonical JSON
    for (unsigned char ch : canonical_json()) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

WindowSpec window_from_config(const RunConfig& config) {
    WindowSpec spec;
    spec.kind = config.method == Method::TSW ? WindowSpec::Kind::Tapered
                                             : WindowSpec::Kind::Square;
    spec.size_m = static_cast<int>(config.fwhm_tr + 0.5);
    spec.taper_bandwidth = config.taper_bandwidth;
    return spec;
}

HeatKernelParams kernel_from_config(const RunConfig& config, int T) {
    HeatKernelParams params;
    params.fwhm_tr = config.fwhm_tr;
    params.degree = config.degree > 0 ? config.degree : T - 1;
    params.bandwidth = fwhm_to_bandwidth(config.fwhm_tr, T);
    return params;
}

}  // namespace

std::vector<DynCorrSeries> stage_dyncorr(const Manifest& manifest,
                                         const RunConfig& config,
                                         const std::filesystem::path& out_dir) {
    std::vector<DynCorrSeries> series;
    series.reserve(manifest.entries.size());
    for (const auto& entry : manifest.entries) {
        RoiMatrix raw = read_roi_csv(entry.path, entry.subject_id);
        RoiMatrix scaled = rescale_subject(raw);
        try {
            series.push_back(dyncorr_matrix(
                scaled, config.method, window_from_config(config),
                kernel_from_config(config, scaled.time_points())));
        } catch (const Error& e) {
            throw Error("dyncorr stage, subject " + entry.subject_id + ": " +
                        e.what());
        }
        write_dyncorr(out_dir / "dyncorr" / entry.subject_id, series.back());
    }
    return series;
}

StateModel stage_states(const std::vector<DynCorrSeries>& series,
                        const RunConfig& config,
                        const std::filesystem::path& out_dir) {
    StateModel model;
    try {
        model = estimate_states(series, config.k, config.restarts, config.seed);
    } catch (const Error& e) {
        throw Error(std::string("states stage: ") + e.what());
    }

    const int p = series.front().p;
    std::vector<std::string> header;
    for (int e = 0; e < model.centroids.cols(); ++e) {
        const auto [i, j] = edge_pair(e, p);
        header.push_back("edge_" + std::to_string(i + 1) + "_" +
                         std::to_string(j + 1));
    }
    write_csv_matrix(out_dir / "centroids.csv", model.centroids, header);

    std::ofstream assign = open_out(out_dir / "assignments.csv");
    assign << "subject_id,t,label\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        for (int t = 0; t < series[s].T; ++t) {
            assign << series[s].subject_id << "," << t << ","
                   << model.assignments[s][t] << "\n";
        }
    }

    json transitions;
    transitions["k"] = model.k;
    json mean_rows = json::array();
    for (int a = 0; a < model.k; ++a) {
        json row = json::array();
        for (int b = 0; b < model.k; ++b) row.push_back(model.mean_transition(a, b));
        mean_rows.push_back(std::move(row));
    }
    transitions["mean"] = mean_rows;
    json per_subject = json::object();
    for (std::size_t s = 0; s < series.size(); ++s) {
        const Eigen::MatrixXd tm = transition_matrix(model.assignments[s], model.k);
        json rows = json::array();
        for (int a = 0; a < model.k; ++a) {
            json row = json::array();
            for (int b = 0; b < model.k; ++b) row.push_back(tm(a, b));
            rows.push_back(std::move(row));
        }
        per_subject[series[s].subject_id] = std::move(rows);
    }
    transitions["per_subject"] = std::move(per_subject);
    open_out(out_dir / "transitions.json") << transitions.dump(2) << "\n";

    json occ;
    occ["rates"] = std::vector<double>(
        model.occupancy_rates.data(),
        model.occupancy_rates.data() + model.occupancy_rates.size());
    open_out(out_dir / "occupancy.json") << occ.dump(2) << "\n";

    json disp;
    disp["per_state"] =
        within_state_dispersion(series, model.assignments, model.k);
    open_out(out_dir / "dispersion.json") << disp.dump(2) << "\n";
    return model;
}

namespace {

struct TwinPairRef {
    int subject_a = -1;  // index into manifest/series, twin_index 1
    int subject_b = -1;  // twin_index 2
    Zygosity zygosity = Zygosity::None;
};

std::vector<TwinPairRef> collect_pairs(const Manifest& manifest) {
    std::map<std::string, TwinPairRef> by_pair;
    for (std::size_t s = 0; s < manifest.entries.size(); ++s) {
        const auto& entry = manifest.entries[s];
        if (entry.pair_id.empty() || entry.zygosity == Zygosity::None) continue;
        TwinPairRef& ref = by_pair[entry.pair_id];
        ref.zygosity = entry.zygosity;
        if (entry.twin_index == 1) {
            ref.subject_a = static_cast<int>(s);
        } else if (entry.twin_index == 2) {
            ref.subject_b = static_cast<int>(s);
        } else {
            throw ValidationError("manifest: pair " + entry.pair_id +
                                  " has twin_index outside {1,2}");
        }
    }
    std::vector<TwinPairRef> pairs;
    for (const auto& [pair_id, ref] : by_pair) {
        if (ref.subject_a < 0 || ref.subject_b < 0) {
            throw ValidationError("manifest: pair " + pair_id + " is incomplete");
        }
        pairs.push_back(ref);
    }
    return pairs;
}

}  // namespace

std::vector<HeritabilityEntry> stage_heritability(
    const Manifest& manifest, const std::vector<DynCorrSeries>& series,
    const StateModel& model, const RunConfig& config,
    const std::filesystem::path& out_dir) {
    const std::vector<TwinPairRef> pairs = collect_pairs(manifest);
    const int E = series.front().edge_count();
    const int p = series.front().p;

    HiMapConfig hi_config;
    hi_config.steps = config.walk_steps;
    hi_config.repeats = config.walk_repeats;
    hi_config.seed = config.seed;
    hi_config.clamp = config.clamp_hi;

    std::vector<HeritabilityEntry> all;
    for (int state = 1; state <= model.k; ++state) {
        // State-average map per twin; pairs where either twin never visits
        // the state are dropped (listwise deletion).
        std::vector<Eigen::MatrixXd> mz_cols, dz_cols;
        for (const auto& ref : pairs) {
            Eigen::VectorXd map_a, map_b;
            try {
                map_a = state_average_map(series[ref.subject_a],
                                          model.assignments[ref.subject_a], state);
                map_b = state_average_map(series[ref.subject_b],
                                          model.assignments[ref.subject_b], state);
            } catch (const StateNotVisited&) {
                continue;
            }
            auto& dest = ref.zygosity == Zygosity::MZ ? mz_cols : dz_cols;
            // Stash both maps; reshaped below into per-edge 2 x m matrices.
            Eigen::MatrixXd both(2, E);
            both.row(0) = map_a.transpose();
            both.row(1) = map_b.transpose();
            dest.push_back(std::move(both));
        }
        std::vector<Eigen::MatrixXd> mz(E), dz(E);
        for (int e = 0; e < E; ++e) {
            mz[e].resize(2, static_cast<int>(mz_cols.size()));
            for (std::size_t i = 0; i < mz_cols.size(); ++i) {
                mz[e].col(static_cast<int>(i)) = mz_cols[i].col(e);
            }
            dz[e].resize(2, static_cast<int>(dz_cols.size()));
            for (std::size_t i = 0; i < dz_cols.size(); ++i) {
                dz[e].col(static_cast<int>(i)) = dz_cols[i].col(e);
            }
        }
        auto entries = hi_map_state(mz, dz, state, p, hi_config);
        all.insert(all.end(), entries.begin(), entries.end());
    }

    std::ofstream csv = open_out(out_dir / "hi_map.csv");
    csv << "state,edge_i,edge_j,gamma_mz,gamma_dz,hi,sd_bound\n";
    for (const auto& entry : all) {
        csv << entry.state << "," << (entry.node_i + 1) << ","
            << (entry.node_j + 1) << ",";
        if (entry.missing) {
            csv << ",,,\n";
        } else {
            csv << format_double(entry.gamma_mz) << ","
                << format_double(entry.gamma_dz) << "," << format_double(entry.hi)
                << "," << format_double(entry.sd_bound) << "\n";
        }
    }

    json top_doc;
    top_doc["states"] = json::array();
    for (int state = 1; state <= model.k; ++state) {
        std::vector<const HeritabilityEntry*> present;
        for (const auto& entry : all) {
            if (entry.state == state && !entry.missing) present.push_back(&entry);
        }
        std::sort(present.begin(), present.end(),
                  [](const auto* a, const auto* b) { return a->hi > b->hi; });
        json top = json::array();
        const int n = std::min<int>(5, static_cast<int>(present.size()));
        for (int i = 0; i < n; ++i) {
            top.push_back({{"edge_i", present[i]->node_i + 1},
                           {"edge_j", present[i]->node_j + 1},
                           {"hi", present[i]->hi},
                           {"sd_bound", present[i]->sd_bound}});
        }
        top_doc["states"].push_back({{"state", state}, {"top", std::move(top)}});
    }
    open_out(out_dir / "hi_top.json") << top_doc.dump(2) << "\n";
    return all;
}

std::filesystem::path run_pipeline(const RunConfig& config) {
    // Fail-fast validation before any computation.
    const Manifest manifest = read_manifest(config.manifest_path);
    if (manifest.entries.empty()) {
        throw ValidationError("manifest lists no subjects");
    }
    const std::filesystem::path out = config.output_dir;
    std::filesystem::create_directories(out);

    const std::vector<DynCorrSeries> series =
        stage_dyncorr(manifest, config, out);
    const StateModel model = stage_states(series, config, out);

    bool has_twins = !collect_pairs(manifest).empty();
    std::size_t hi_entries = 0;
    if (has_twins) {
        hi_entries = stage_heritability(manifest, series, model, config, out).size();
    }

    json summary = {
        {"config", json::parse(config.canonical_json())},
        {"config_hash", config.hash()},
        {"subjects", manifest.entries.size()},
        {"chosen_k", model.k},
        {"elbow_flat_warning", model.elbow_flat_warning},
        {"elbow_ratios", model.elbow_ratios},
        {"heritability_computed", has_twins},
        {"heritability_entries", hi_entries},
        {"stages", {"dyncorr", "states", has_twins ? "heritability" : "skipped"}},
    };
    open_out(out / "run_summary.json") << summary.dump(2) << "\n";
    return out;
}

std::vector<DynCorrSeries> read_dyncorr_dir(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> stems;
    if (!std::filesystem::is_directory(dir)) {
        throw ValidationError("not a directory: " + dir.string());
    }
    for (const auto& item : std::filesystem::directory_iterator(dir)) {
        if (item.path().extension() == ".json") {
            auto stem = item.path();
            stem.replace_extension();
            stems.push_back(stem);
        }
    }
    std::sort(stems.begin(), stems.end());
    std::vector<DynCorrSeries> series;
    for (const auto& stem : stems) series.push_back(read_dyncorr(stem));
    return series;
}

std::vector<std::pair<std::string, std::vector<int>>> read_assignments_csv(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::string line;
    std::getline(in, line);  // header
    std::vector<std::pair<std::string, std::vector<int>>> result;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string id, t, label;
        std::getline(ss, id, ',');
        std::getline(ss, t, ',');
        std::getline(ss, label, ',');
        if (result.empty() || result.back().first != id) {
            result.push_back({id, {}});
        }
        result.back().second.push_back(std::stoi(label));
    }
    return result;
}

void report(const std::filesystem::path& run_dir, int top_n) {
    const auto need = [&](const std::filesystem::path& p) {
        if (!std::filesystem::exists(p)) {
            throw IncompleteRun("missing artifact: " + p.string());
        }
        return p;
    };
    need(run_dir / "run_summary.json");
    const auto report_dir = run_dir / "report";
    std::filesystem::create_directories(report_dir);

    // Per-edge dynamic correlation traces, one CSV per subject, T rows.
    const auto series = read_dyncorr_dir(need(run_dir / "dyncorr"));
    for (const auto& s : series) {
        write_dyncorr_csv(report_dir / "traces" / (s.subject_id + ".csv"), s);
    }

    // State timelines.
    const auto assignments = read_assignments_csv(need(run_dir / "assignments.csv"));
    std::ofstream timeline = open_out(report_dir / "state_timeline.csv");
    timeline << "subject_id,t,label\n";
    for (const auto& [id, labels] : assignments) {
        for (std::size_t t = 0; t < labels.size(); ++t) {
            timeline << id << "," << t << "," << labels[t] << "\n";
        }
    }

    // Transition heat values and occupancy bars.
    {
        std::ifstream in(need(run_dir / "transitions.json"));
        json doc = json::parse(in);
        std::ofstream out = open_out(report_dir / "transitions_table.csv");
        out << "state_from,state_to,prob\n";
        const auto& mean = doc.at("mean");
        for (std::size_t a = 0; a < mean.size(); ++a) {
            for (std::size_t b = 0; b < mean[a].size(); ++b) {
                out << (a + 1) << "," << (b + 1) << ","
                    << format_double(mean[a][b].get<double>()) << "\n";
            }
        }
    }
    {
        std::ifstream in(need(run_dir / "occupancy.json"));
        json doc = json::parse(in);
        std::ofstream out = open_out(report_dir / "occupancy.csv");
        out << "state,rate\n";
        const auto& rates = doc.at("rates");
        for (std::size_t s = 0; s < rates.size(); ++s) {
            out << (s + 1) << "," << format_double(rates[s].get<double>()) << "\n";
        }
    }

    // Top-HI table, sorted descending by h, when heritability ran.
    const auto hi_path = run_dir / "hi_map.csv";
    if (std::filesystem::exists(hi_path)) {
        std::ifstream in(hi_path);
        std::string line;
        std::getline(in, line);
        struct Row {
            int state;
            std::string text;
            double hi;
        };
        std::vector<Row> rows;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string state, ei, ej, gmz, gdz, hi, sd;
            std::getline(ss, state, ',');
            std::getline(ss, ei, ',');
            std::getline(ss, ej, ',');
            std::getline(ss, gmz, ',');
            std::getline(ss, gdz, ',');
            std::getline(ss, hi, ',');
            std::getline(ss, sd, ',');
            if (hi.empty()) continue;  // missing edge
            rows.push_back({std::stoi(state),
                            state + "," + ei + "," + ej + "," + hi + "," + sd,
                            std::stod(hi)});
        }
        std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
            if (a.state != b.state) return a.state < b.state;
            return a.hi > b.hi;
        });
        std::ofstream out = open_out(report_dir / "hi_top.csv");
        out << "state,edge_i,edge_j,hi,sd_bound\n";
        std::map<int, int> emitted;
        for (const auto& row : rows) {
            if (emitted[row.state]++ < top_n) out << row.text << "\n";
        }
    }
}

}  // namespace dynheat
