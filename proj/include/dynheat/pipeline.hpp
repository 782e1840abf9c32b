#ifndef DYNHEAT_PIPELINE_HPP_
#define DYNHEAT_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dynheat/dyncorr.hpp"
#include "dynheat/heritability.hpp"
#include "dynheat/io.hpp"
#include "dynheat/states.hpp"

namespace dynheat {

struct RunConfig {
    Method method = Method::HEAT;
    double fwhm_tr = 15.0;
    int degree = -1;  // -1: default L = T-1
    double taper_bandwidth = 3.0;
    int k = 0;  // 0 = elbow selection (2..8)
    int restarts = 100;
    long walk_steps = 50000;
    int walk_repeats = 100;
    bool clamp_hi = false;
    std::uint64_t seed = 0;
    std::filesystem::path manifest_path;
    std::filesystem::path output_dir;

    static RunConfig from_json_file(const std::filesystem::path& path);
    std::string canonical_json() const;
    std::uint64_t hash() const;
};

// Full pipeline: ingest -> dyncorr -> states -> heritability -> summary.
// Deterministic for a fixed (config, inputs) at any thread count.
// Returns the run directory.
std::filesystem::path run_pipeline(const RunConfig& config);

// Emit plot-ready tables from a completed run directory.
// Throws IncompleteRun when required artifacts are absent.
void report(const std::filesystem::path& run_dir, int top_n = 5);

// Individual stages, reusable by the CLI subcommands.

// Ingest + rescale + dynamic correlation for every manifest subject; writes
// one packed series per subject under out_dir/dyncorr.
std::vector<DynCorrSeries> stage_dyncorr(const Manifest& manifest,
                                         const RunConfig& config,
                                         const std::filesystem::path& out_dir);

// Group-level clustering and Markov statistics; writes centroids.csv,
// assignments.csv, transitions.json, occupancy.json, dispersion.json.
StateModel stage_states(const std::vector<DynCorrSeries>& series,
                        const RunConfig& config,
                        const std::filesystem::path& out_dir);

// Twin heritability over state-average maps; writes hi_map.csv, hi_top.json.
// Returns entries for all states (empty when the manifest has no twin pairs).
std::vector<HeritabilityEntry> stage_heritability(
    const Manifest& manifest, const std::vector<DynCorrSeries>& series,
    const StateModel& model, const RunConfig& config,
    const std::filesystem::path& out_dir);

// Read back artifacts written by the stages.
std::vector<DynCorrSeries> read_dyncorr_dir(const std::filesystem::path& dir);
std::vector<std::pair<std::string, std::vector<int>>> read_assignments_csv(
    const std::filesystem::path& path);

}  // namespace dynheat

#endif  // DYNHEAT_PIPELINE_HPP_
