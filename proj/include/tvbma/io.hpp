#pragma once

#include "tvbma/crossval.hpp"
#include "tvbma/dataset.hpp"
#include "tvbma/diagnostics.hpp"
#include "tvbma/project.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tvbma::io {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr const char* kReportVersion = "tvbma-report/1";
inline constexpr const char* kSoftwareVersion = "0.1.0";

enum class Format { Json, Csv };

/// `time,value` CSV with header. Errors name the file and line.
TimeSeries read_series_csv(const fs::path& path);
void write_series_csv(const fs::path& path, const TimeSeries& series);

/// Reads a dataset manifest:
///   {name, units, calibration:[t0,t1], projection_reference:[t0,t1],
///    projection:[t0,t1], models:[{id, calibration_file, projection_file}],
///    observations_file?, observations_projection_file?}
/// File paths are relative to the manifest's directory.
EnsembleDataset load_dataset(const fs::path& manifest);

/// Writes the manifest plus one CSV per model and period into `dir`.
/// Returns the manifest path.
fs::path write_dataset(const EnsembleDataset& data, const fs::path& dir);

json to_json(const ExperimentConfig& config);
/// Fields absent from `j` keep their value in `base`.
ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {});

json to_json(const CrossValReport& report);
CrossValReport cross_val_report_from_json(const json& j);

json to_json(const ProjectionResult& result);
ProjectionResult projection_result_from_json(const json& j);

json to_json(const CalibrationResult& result);
json to_json(const IndependenceReport& report);
json to_json(const SpectrumEnvelope& envelope);

/// Writes the report (and its plot data) into `out_dir`; returns the files
/// written. Cross-validation: report, weights heatmap (one row per truth),
/// interval table. Projection: report, density grid, interval endpoints.
std::vector<fs::path> emit_report(const CrossValReport& report, Format format,
                                  const fs::path& out_dir);
std::vector<fs::path> emit_report(const ProjectionResult& result, Format format,
                                  const fs::path& out_dir);

/// Everything needed to rerun a command bit-exactly.
struct RunManifest {
    std::string command;
    std::string config_hash;
    std::map<std::string, std::uint64_t> seeds;
    std::string software_version = kSoftwareVersion;
    std::map<std::string, std::string> input_digests;
    std::string started_at;
    std::string finished_at;
};

json to_json(const RunManifest& manifest);

std::string sha256_hex(const std::string& bytes);
std::string file_sha256(const fs::path& path);

/// One-space indented dump with a trailing newline.
void write_json(const fs::path& path, const json& j);
json read_json(const fs::path& path);

std::string utc_timestamp();

} // namespace tvbma::io
