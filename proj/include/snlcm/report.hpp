#ifndef SNLCM_REPORT_HPP
#define SNLCM_REPORT_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace snlcm {

inline constexpr const char* kCodeVersion = "snlcm 0.1.0";
inline constexpr int kCsvSchemaVersion = 1;

/// Fixed-format rendering so CSV output is byte-stable across runs.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string hex64(uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// One experiment run: a CSV table plus a manifest that pins down everything
/// needed to reproduce it (parameters, seed, schema hash).
struct ExperimentReport {
    std::string experiment;
    nlohmann::json parameters; // full record, sufficient for a rerun
    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> rows;
    nlohmann::json summary;
    std::vector<std::string> warnings;
    double wall_ms = 0;

    std::string csv_text() const {
        std::string out = join(csv_header);
        out += "\n";
        for (const auto& row : rows) {
            out += join(row);
            out += "\n";
        }
        return out;
    }

    std::string header_line() const { return join(csv_header); }

private:
    // cells containing separators get standard CSV double-quoting
    // (splitting types are rendered comma-joined, e.g. "1,1,0")
    static std::string join(const std::vector<std::string>& cells) {
        std::string s;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) s += ",";
            if (cells[i].find_first_of(",\"\n") != std::string::npos) {
                s += '"';
                for (char c : cells[i]) {
                    if (c == '"') s += '"';
                    s += c;
                }
                s += '"';
            } else {
                s += cells[i];
            }
        }
        return s;
    }
};

/// Writes <experiment>.csv and manifest.json into outdir (created if absent).
/// Returns the manifest path.
inline std::filesystem::path write_report(const ExperimentReport& report,
                                          const std::filesystem::path& outdir) {
    std::filesystem::create_directories(outdir);
    const std::string csv_name = report.experiment + ".csv";
    {
        std::ofstream csv(outdir / csv_name, std::ios::binary);
        if (!csv) throw std::runtime_error("cannot write " + (outdir / csv_name).string());
        csv << report.csv_text();
    }
    nlohmann::json manifest;
    manifest["schema_version"] = kCsvSchemaVersion;
    manifest["code_version"] = kCodeVersion;
    manifest["experiment"] = report.experiment;
    manifest["parameters"] = report.parameters;
    manifest["summary"] = report.summary;
    manifest["warnings"] = report.warnings;
    manifest["timing_ms"] = report.wall_ms;
    manifest["csv"] = {{"file", csv_name},
                       {"rows", report.rows.size()},
                       {"header", report.header_line()},
                       {"header_hash", hex64(fnv1a(report.header_line()))}};
    const std::filesystem::path mpath = outdir / "manifest.json";
    std::ofstream mf(mpath, std::ios::binary);
    if (!mf) throw std::runtime_error("cannot write " + mpath.string());
    mf << manifest.dump(2) << "\n";
    return mpath;
}

} // namespace snlcm

#endif
