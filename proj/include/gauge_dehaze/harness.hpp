#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gauge_dehaze/bccr.hpp"
#include "gauge_dehaze/dataset.hpp"
#include "gauge_dehaze/dcp.hpp"
#include "gauge_dehaze/metrics.hpp"

namespace gdh {

// identity: untreated input. oracle: exact inversion with the manifest's true
// transmission and airlight; bounds every estimator from above. external:
// pre-computed outputs matched by filename stem.
struct MethodSpec {
    std::string name;  // identity | dcp | bccr | oracle | external
    DcpParams dcp;
    BccrParams bccr;
    std::filesystem::path external_dir;
};

struct BenchmarkRun {
    DatasetManifest manifest;
    std::filesystem::path root;  // dataset root the manifest paths are relative to
    std::vector<MethodSpec> methods;
    MetricParams metric_params;
    std::string split = "test";
    int jobs = 1;
};

struct MetricRecord {
    std::string id;  // corrupted image stem
    int level = 0;   // 1-based ladder level
    std::string method;
    double psnr_db = 0.0;
    double ssim = 0.0;
    bool exact = false;
    double wall_ms = 0.0;  // restoration time, excluded from CSV
};

struct MetricReport {
    std::string kind;
    std::string split;
    MetricParams params;
    std::vector<MetricRecord> records;       // sorted by (method, id, level)
    std::vector<std::string> violations;     // missing externals etc.
};

struct AggregateRow {
    std::string method;
    int level = 0;  // 0 = all levels
    int count = 0;
    double psnr_mean = 0, psnr_min = 0, psnr_max = 0;
    double ssim_mean = 0, ssim_min = 0, ssim_max = 0;
    double wall_ms_mean = 0;
};

// Exact functions of the records; recomputable from the CSV rows.
std::vector<AggregateRow> aggregate(const MetricReport& report);

// Scores every method on the identical test-image set. Missing external
// outputs are recorded as violations and excluded from that method's
// aggregates; the run still completes.
MetricReport evaluate(const BenchmarkRun& run);

// Filename-stem matching of a directory of externally produced outputs
// against the manifest's test split. Throws if nothing matches.
MetricReport score_external(const DatasetManifest& manifest, const std::filesystem::path& root,
                            const std::filesystem::path& dir, const MetricParams& params,
                            const std::string& split = "test");

// CSV schema: id,level,method,psnr_db,ssim,exact with round-trip float
// formatting; byte-stable across identical runs.
void write_report_csv(const MetricReport& report, const std::filesystem::path& path);

// JSON document embedding MetricParams provenance, aggregates and timing
// metadata (the only block allowed to vary between identical runs).
void write_report_json(const MetricReport& report, const std::filesystem::path& path);

// Rows = methods, columns = PSNR/SSIM mean and max.
void write_report_markdown(const MetricReport& report, const std::filesystem::path& path);

MetricReport report_from_json(const std::filesystem::path& path);

}  // namespace gdh
