#ifndef DYNHEAT_IO_HPP_
#define DYNHEAT_IO_HPP_

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <vector>

#include "dynheat/dyncorr.hpp"
#include "dynheat/signal.hpp"

namespace dynheat {

enum class Zygosity { MZ, DZ, None };

std::string zygosity_name(Zygosity z);
Zygosity zygosity_from_name(const std::string& name);

struct ManifestEntry {
    std::string subject_id;
    std::filesystem::path path;
    Zygosity zygosity = Zygosity::None;
    std::string pair_id;  // empty for unpaired subjects
    int twin_index = 0;   // 1 or 2 within the pair, 0 if unpaired
};

struct Manifest {
    std::vector<ManifestEntry> entries;
};

// Subject CSV: header "t,roi_1,...,roi_p", one row per time point.
RoiMatrix read_roi_csv(const std::filesystem::path& path,
                       const std::string& subject_id);
void write_roi_csv(const std::filesystem::path& path, const RoiMatrix& subject);

// Manifest JSON: {"subjects":[{"id","path","zygosity","pair_id","twin_index"}]}.
// Paths are resolved relative to the manifest's directory.
// Throws ValidationError when a referenced file is missing.
Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

// Dynamic correlation series: packed little-endian float64 values plus a
// JSON sidecar (T, p, edge ordering, method, params).
void write_dyncorr(const std::filesystem::path& stem, const DynCorrSeries& series);
DynCorrSeries read_dyncorr(const std::filesystem::path& stem);
void write_dyncorr_csv(const std::filesystem::path& path, const DynCorrSeries& series);

// Lossless float formatting (17 significant digits).
std::string format_double(double v);

void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header);

}  // namespace dynheat

#endif  // DYNHEAT_IO_HPP_
