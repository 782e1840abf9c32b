#include "dynheat/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "dynheat/errors.hpp"

namespace dynheat {

using nlohmann::json;

std::string zygosity_name(Zygosity z) {
    switch (z) {
        case Zygosity::MZ: return "MZ";
        case Zygosity::DZ: return "DZ";
        case Zygosity::None: return "NONE";
    }
    throw Error("zygosity_name: bad enum");
}

Zygosity zygosity_from_name(const std::string& name) {
    if (name == "MZ") return Zygosity::MZ;
    if (name == "DZ") return Zygosity::DZ;
    if (name == "NONE" || name.empty()) return Zygosity::None;
    throw ValidationError("unknown zygosity: " + name);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path.string());
    return out;
}

}  // namespace

RoiMatrix read_roi_csv(const std::filesystem::path& path,
                       const std::string& subject_id) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) {
        throw ValidationError(path.string() + ": empty file");
    }
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "t") {
        throw ValidationError(path.string() + ": expected header t,roi_1,...");
    }
    const int p = static_cast<int>(header.size()) - 1;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != p + 1) {
            throw ValidationError(path.string() + ": ragged row " +
                                  std::to_string(rows.size() + 2));
        }
        std::vector<double> row(p);
        for (int c = 0; c < p; ++c) {
            row[c] = std::stod(fields[c + 1]);
        }
        rows.push_back(std::move(row));
    }
    RoiMatrix out;
    out.subject_id = subject_id;
    out.values.resize(static_cast<int>(rows.size()), p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int c = 0; c < p; ++c) out.values(static_cast<int>(r), c) = rows[r][c];
    }
    validate_roi_matrix(out);
    return out;
}

void write_roi_csv(const std::filesystem::path& path, const RoiMatrix& subject) {
    std::ofstream out = open_output(path);
    out << "t";
    for (int c = 0; c < subject.regions(); ++c) out << ",roi_" << (c + 1);
    out << "\n";
    for (int t = 0; t < subject.time_points(); ++t) {
        out << t;
        for (int c = 0; c < subject.regions(); ++c) {
            out << "," << format_double(subject.values(t, c));
        }
        out << "\n";
    }
}

Manifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in = open_input(path);
    json doc = json::parse(in);
    Manifest manifest;
    const auto base = path.has_parent_path() ? path.parent_path()
                                             : std::filesystem::path(".");
    for (const auto& item : doc.at("subjects")) {
        ManifestEntry entry;
        entry.subject_id = item.at("id").get<std::string>();
        std::filesystem::path p = item.at("path").get<std::string>();
        entry.path = p.is_absolute() ? p : base / p;
        entry.zygosity =
            zygosity_from_name(item.value("zygosity", std::string("NONE")));
        entry.pair_id = item.value("pair_id", std::string());
        entry.twin_index = item.value("twin_index", 0);
        if (!std::filesystem::exists(entry.path)) {
            throw ValidationError("manifest: missing file " + entry.path.string() +
                                  " for subject " + entry.subject_id);
        }
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
    json subjects = json::array();
    for (const auto& entry : manifest.entries) {
        json item = {
            {"id", entry.subject_id},
            {"path", entry.path.filename().string()},
            {"zygosity", zygosity_name(entry.zygosity)},
        };
        if (!entry.pair_id.empty()) {
            item["pair_id"] = entry.pair_id;
            item["twin_index"] = entry.twin_index;
        }
        subjects.push_back(std::move(item));
    }
    std::ofstream out = open_output(path);
    out << json{{"subjects", subjects}}.dump(2) << "\n";
}

namespace {

json params_json(const DynCorrSeries& series) {
    if (series.method == Method::HEAT) {
        return {{"bandwidth", series.kernel.bandwidth},
                {"degree", series.kernel.degree},
                {"fwhm_tr", series.kernel.fwhm_tr}};
    }
    return {{"size_m", series.window.size_m},
            {"taper_bandwidth", series.window.taper_bandwidth}};
}

void params_from_json(const json& p, DynCorrSeries& series) {
    if (series.method == Method::HEAT) {
        series.kernel.bandwidth = p.at("bandwidth").get<double>();
        series.kernel.degree = p.at("degree").get<int>();
        series.kernel.fwhm_tr = p.at("fwhm_tr").get<double>();
    } else {
        series.window.size_m = p.at("size_m").get<int>();
        series.window.taper_bandwidth = p.at("taper_bandwidth").get<double>();
        series.window.kind = series.method == Method::SW
                                 ? WindowSpec::Kind::Square
                                 : WindowSpec::Kind::Tapered;
    }
}

}  // namespace

void write_dyncorr(const std::filesystem::path& stem, const DynCorrSeries& series) {
    json sidecar = {
        {"subject_id", series.subject_id},
        {"T", series.T},
        {"p", series.p},
        {"edge_order", "upper-triangle row-major (i<j)"},
        {"method", method_name(series.method)},
        {"params", params_json(series)},
        {"dtype", "float64-le"},
        {"layout", "row-major, T rows x E columns"},
    };
    std::ofstream meta = open_output(stem.string() + ".json");
    meta << sidecar.dump(2) << "\n";

    std::ofstream bin(stem.string() + ".bin", std::ios::binary);
    if (!bin) throw ValidationError("cannot write " + stem.string() + ".bin");
    const int E = series.edge_count();
    for (int t = 0; t < series.T; ++t) {
        for (int e = 0; e < E; ++e) {
            const double v = series.values(t, e);
            bin.write(reinterpret_cast<const char*>(&v), sizeof(double));
        }
    }
}

DynCorrSeries read_dyncorr(const std::filesystem::path& stem) {
    std::ifstream meta = open_input(stem.string() + ".json");
    json sidecar = json::parse(meta);
    DynCorrSeries series;
    series.subject_id = sidecar.at("subject_id").get<std::string>();
    series.T = sidecar.at("T").get<int>();
    series.p = sidecar.at("p").get<int>();
    series.method = method_from_name(sidecar.at("method").get<std::string>());
    params_from_json(sidecar.at("params"), series);

    std::ifstream bin(stem.string() + ".bin", std::ios::binary);
    if (!bin) throw ValidationError("cannot open " + stem.string() + ".bin");
    const int E = series.edge_count();
    series.values.resize(series.T, E);
    for (int t = 0; t < series.T; ++t) {
        for (int e = 0; e < E; ++e) {
            double v;
            bin.read(reinterpret_cast<char*>(&v), sizeof(double));
            if (!bin) {
                throw ValidationError(stem.string() + ".bin: truncated");
            }
            series.values(t, e) = v;
        }
    }
    return series;
}

void write_dyncorr_csv(const std::filesystem::path& path,
                       const DynCorrSeries& series) {
    std::ofstream out = open_output(path);
    out << "t";
    for (int e = 0; e < series.edge_count(); ++e) {
        const auto [i, j] = edge_pair(e, series.p);
        out << ",edge_" << (i + 1) << "_" << (j + 1);
    }
    out << "\n";
    for (int t = 0; t < series.T; ++t) {
        out << t;
        for (int e = 0; e < series.edge_count(); ++e) {
            out << "," << format_double(series.values(t, e));
        }
        out << "\n";
    }
}

void write_csv_matrix(const std::filesystem::path& path,
                      const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header) {
    std::ofstream out = open_output(path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i ? "," : "") << header[i];
    }
    if (!header.empty()) out << "\n";
    for (int r = 0; r < m.rows(); ++r) {
        for (int c = 0; c < m.cols(); ++c) {
            out << (c ? "," : "") << format_double(m(r, c));
        }
        out << "\n";
    }
}

}  // namespace dynheat
