// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gauge_dehaze/codec.hpp"
#include "gauge_dehaze/harness.hpp"
#include "gauge_dehaze/scenegen.hpp"
#include "oracles.hpp"

using namespace gdh;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
        ok = fn(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int hw_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "gdh_acceptance" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::map<std::pair<std::string, int>, AggregateRow> rows_by_key(const MetricReport& report) {
    std::map<std::pair<std::string, int>, AggregateRow> out;
    for (const AggregateRow& row : aggregate(report)) out[{row.method, row.level}] = row;
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// ---- criterion 1: scattering round trip ------------------------------------

bool scattering_round_trip(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    AtmosphericLight A = default_haze_airlight();
    double worst = 0.0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        RenderResult rr = render_gauge(random_scene(seed), 128, 128);
        for (double beta : default_beta_ladder()) {
            ScalarMap t = transmission_from_depth(rr.depth, HazeSpec{beta});
            ImageBuffer hazy = apply_scattering(rr.image, t, A);
            ImageBuffer back = invert_scattering(hazy, t, A, 0.05);
            for (size_t i = 0; i < back.data.size(); ++i) {
                if (t.data[i / 3] < 0.05) continue;
                worst = std::max(worst, std::abs(back.data[i] - rr.image.data[i]));
            }
        }
    }
    double secs = elapsed_s(start);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |err| = %.3g, %.1f s", worst, secs);
    detail = buf;
    return worst <= 1e-6 && secs < 60.0;
}

// ---- criterion 2: metric oracles -------------------------------------------

bool metric_oracles(std::string& detail) {
    MetricParams params;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        ImageBuffer a = oracle::random_image(32, 32, 2 * seed + 1);
        ImageBuffer b = oracle::random_image(32, 32, 2 * seed + 2);

        double mse_want = oracle::mse(a, b);
        double mse_got = mse(a, b);
        if (std::abs(mse_got - mse_want) > 1e-12 * std::abs(mse_want)) {
            detail = "mse mismatch";
            return false;
        }
        double psnr_want = oracle::psnr_db(a, b, 1.0);
        double psnr_got = psnr(a, b, params).db;
        if (std::abs(psnr_got - psnr_want) > 1e-12 * std::abs(psnr_want)) {
            detail = "psnr mismatch";
            return false;
        }
        double ssim_want =
            oracle::ssim_windowed(a, b, params.window_radius, params.window_sigma, params.c1(),
                                  params.c2());
        double ssim_got = ssim_windowed(a, b, params);
        if (std::abs(ssim_got - ssim_want) > 1e-9) {
            detail = "ssim mismatch";
            return false;
        }
    }
    double anchor = psnr_from_mse(0.01, params);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "psnr(mse=0.01) = %.9f dB", anchor);
    detail = buf;
    return std::abs(anchor - 20.0) < 1e-9;
}

// ---- criterion 3: corruption monotonicity ----------------------------------

bool corruption_monotonicity(std::string& detail) {
    const auto& ladder = default_beta_ladder();
    std::vector<double> level_sums(ladder.size(), 0.0);
    AtmosphericLight A = default_haze_airlight();
    for (uint64_t seed = 0; seed < 20; ++seed) {
        RenderResult rr = render_gauge(random_scene(3000 + seed), 128, 128);
        for (size_t k = 0; k < ladder.size(); ++k) {
            ScalarMap t = transmission_from_depth(rr.depth, HazeSpec{ladder[k]});
            ImageBuffer hazy = apply_scattering(rr.image, t, A);
            level_sums[k] += ssim_windowed(rr.image, hazy);
        }
    }
    for (size_t k = 1; k < level_sums.size(); ++k) {
        if (!(level_sums[k] < level_sums[k - 1])) {
            detail = "mean ssim not strictly decreasing at level " + std::to_string(k + 1);
            return false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "mean ssim %.3f -> %.3f over 10 levels", level_sums[0] / 20,
                  level_sums[9] / 20);
    detail = buf;
    return true;
}

// ---- criterion 4: bccr solver correctness ----------------------------------

bool bccr_solver_monotone(std::string& detail) {
    const OperatorBank& bank = default_operator_bank();
    BccrParams params;
    params.solver_pad = 0;  // the 16x16 periodic problem itself

    for (uint64_t trial = 0; trial < 25; ++trial) {
        ScalarMap t_b = oracle::random_map(16, 16, 9000 + trial, 0.05, 1.0);
        std::vector<ScalarMap> ws;
        for (size_t j = 0; j < bank.size(); ++j)
            ws.push_back(oracle::random_map(16, 16, 9100 + trial * 16 + j, 0.0, 1.0));

        SolveTrace trace;
        optimize_transmission(t_b, ws, bank, params, &trace);
        if (trace.iterates.size() != static_cast<size_t>(params.outer_iters) + 1) {
            detail = "trace does not contain every outer iteration";
            return false;
        }
        double prev = std::numeric_limits<double>::infinity();
        for (size_t it = 0; it < trace.iterates.size(); ++it) {
            double obj = oracle::bccr_objective(trace.iterates[it], trace.t_b, trace.weights,
                                                bank, params.lambda);
            if (obj > prev + 1e-6) {
                detail = "objective increased at iteration " + std::to_string(it) + " of trial " +
                         std::to_string(trial);
                return false;
            }
            prev = obj;
        }
    }
    detail = "25 problems x 8 outer iterations";
    return true;
}

// ---- criteria 5 + 7: desk-scale directional findings -----------------------

struct DeskScale {
    MetricReport haze_report;
    MetricReport smoke_report;
    double seconds = 0.0;
    bool ready = false;
    std::string error;
};

DeskScale run_desk_scale() {
    DeskScale out;
    auto start = std::chrono::steady_clock::now();
    try {
        GenerateOptions options;
        options.width = 256;
        options.height = 256;
        options.jobs = hw_jobs();

        fs::path haze_root = scratch_dir("desk_haze");
        DatasetManifest haze = generate_dataset(20, "haze", haze_root, 424242, options);
        haze = split_manifest(haze, {0.8, 0.1, 0.1}, 424242);

        fs::path smoke_root = scratch_dir("desk_smoke");
        DatasetManifest smoke = generate_dataset(20, "smoke", smoke_root, 424242, options);
        smoke = split_manifest(smoke, {0.8, 0.1, 0.1}, 424242);

        BenchmarkRun hr;
        hr.manifest = haze;
        hr.root = haze_root;
        hr.jobs = hw_jobs();
        for (const char* name : {"identity", "dcp", "bccr", "oracle"}) {
            MethodSpec m;
            m.name = name;
            hr.methods.push_back(m);
        }
        out.haze_report = evaluate(hr);

        BenchmarkRun sr;
        sr.manifest = smoke;
        sr.root = smoke_root;
        sr.jobs = hw_jobs();
        MethodSpec ident;
        ident.name = "identity";
        sr.methods.push_back(ident);
        out.smoke_report = evaluate(sr);

        fs::remove_all(haze_root);
        fs::remove_all(smoke_root);
        out.ready = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    out.seconds = elapsed_s(start);
    return out;
}

bool directional_findings(const DeskScale& desk, std::string& detail) {
    if (!desk.ready) {
        detail = desk.error;
        return false;
    }
    const auto& ladder = default_beta_ladder();

    // (a) light-to-medium haze: mean psnr improvement over identity
    auto pooled_mean_psnr = [&](const std::string& method) {
        double sum = 0;
        int n = 0;
        for (const MetricRecord& r : desk.haze_report.records) {
            if (r.method != method) continue;
            if (ladder[r.level - 1] > 0.6) continue;
            sum += r.psnr_db;
            ++n;
        }
        return sum / std::max(1, n);
    };
    double identity_psnr = pooled_mean_psnr("identity");
    double dcp_psnr = pooled_mean_psnr("dcp");
    double bccr_psnr = pooled_mean_psnr("bccr");

    // (b) haze easier than smoke for the untreated baseline
    auto rows_h = rows_by_key(desk.haze_report);
    auto rows_s = rows_by_key(desk.smoke_report);
    double haze_ssim = rows_h[{"identity", 0}].ssim_mean;
    double smoke_ssim = rows_s[{"identity", 0}].ssim_mean;

    // (c) bccr mean ssim inside the wide band around the reported 0.65
    double bccr_ssim = rows_h[{"bccr", 0}].ssim_mean;

    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "psnr@beta<=0.6 identity/dcp/bccr = %.2f/%.2f/%.2f dB; identity ssim "
                  "haze/smoke = %.3f/%.3f; bccr ssim = %.3f; %.0f s",
                  identity_psnr, dcp_psnr, bccr_psnr, haze_ssim, smoke_ssim, bccr_ssim,
                  desk.seconds);
    detail = buf;

    bool a = dcp_psnr > identity_psnr && bccr_psnr > identity_psnr;
    bool b = smoke_ssim < haze_ssim;
    bool c = bccr_ssim >= 0.45 && bccr_ssim <= 0.85;
    return a && b && c && desk.seconds < 300.0;
}

bool oracle_dominance(const DeskScale& desk, std::string& detail) {
    if (!desk.ready) {
        detail = desk.error;
        return false;
    }
    auto rows = rows_by_key(desk.haze_report);
    for (int level = 1; level <= 10; ++level) {
        double oracle_psnr = rows[{"oracle", level}].psnr_mean;
        if (oracle_psnr < rows[{"dcp", level}].psnr_mean ||
            oracle_psnr < rows[{"bccr", level}].psnr_mean) {
            detail = "estimator beat the oracle at level " + std::to_string(level);
            return false;
        }
    }
    detail = "oracle >= dcp, bccr on all 10 levels";
    return true;
}

// ---- criterion 6: dataset invariants ---------------------------------------

bool check_split_counts(const DatasetManifest& m, size_t want_train, size_t want_val,
                        size_t want_test, std::string& detail) {
    std::map<std::string, size_t> clear_counts, corrupted_counts;
    for (const auto& e : m.entries) {
        clear_counts[e.split] += 1;
        for (const auto& rec : e.corrupted) {
            corrupted_counts[rec.split] += 1;
            if (rec.split != e.split) {
                detail = "split leakage in " + e.clear_id;
                return false;
            }
        }
    }
    if (clear_counts["train"] != want_train || clear_counts["val"] != want_val ||
        clear_counts["test"] != want_test) {
        detail = "clear split counts " + std::to_string(clear_counts["train"]) + "/" +
                 std::to_string(clear_counts["val"]) + "/" + std::to_string(clear_counts["test"]);
        return false;
    }
    if (corrupted_counts["train"] != 10 * want_train || corrupted_counts["val"] != 10 * want_val ||
        corrupted_counts["test"] != 10 * want_test) {
        detail = "corrupted split counts are not 10x the clear counts";
        return false;
    }
    return true;
}

bool dataset_invariants(std::string& detail) {
    auto start = std::chrono::steady_clock::now();
    GenerateOptions options;
    options.width = 256;
    options.height = 256;
    options.jobs = hw_jobs();

    // desk-scale structural check first
    {
        fs::path root = scratch_dir("invariant_40");
        DatasetManifest m = generate_dataset(40, "haze", root, 11, options);
        m = split_manifest(m, {0.8, 0.1, 0.1}, 11);
        if (!validate_manifest(m, root).empty()) {
            detail = "40-scene manifest failed validation";
            return false;
        }
        if (!check_split_counts(m, 32, 4, 4, detail)) return false;
        fs::remove_all(root);
    }

    // full-scale haze corpus shape
    {
        fs::path root = scratch_dir("invariant_haze_436");
        DatasetManifest m = generate_dataset(436, "haze", root, 12, options);
        m = split_manifest(m, {0.8, 0.1, 0.1}, 12);
        if (!check_split_counts(m, 350, 43, 43, detail)) return false;
        size_t files = 0;
        for (const auto& de : fs::directory_iterator(root / "haze"))
            if (de.path().extension() == ".png") ++files;
        if (files != 4360) {
            detail = "expected 4360 corrupted haze files, found " + std::to_string(files);
            return false;
        }
        fs::remove_all(root);
    }

    // full-scale smoke corpus shape
    {
        fs::path root = scratch_dir("invariant_smoke_959");
        DatasetManifest m = generate_dataset(959, "smoke", root, 13, options);
        m = split_manifest(m, {0.8, 0.1, 0.1}, 13);
        if (!check_split_counts(m, 769, 95, 95, detail)) return false;
        size_t files = 0;
        for (const auto& de : fs::directory_iterator(root / "smoke"))
            if (de.path().extension() == ".png") ++files;
        if (files != 9590) {
            detail = "expected 9590 corrupted smoke files, found " + std::to_string(files);
            return false;
        }
        fs::remove_all(root);
    }

    double secs = elapsed_s(start);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "436-scene haze + 959-scene smoke at 256x256 in %.0f s",
                  secs);
    detail = buf;
    return secs < 600.0;
}

// ---- criterion 8: end-to-end determinism -----------------------------------

bool determinism(std::string& detail) {
    auto run_once = [&](const std::string& tag, std::string& manifest_text,
                        std::string& csv_text) {
        fs::path root = scratch_dir("determinism_" + tag);
        GenerateOptions options;
        options.width = 128;
        options.height = 128;
        options.jobs = hw_jobs();
        DatasetManifest m = generate_dataset(10, "haze", root, 777, options);
        m = split_manifest(m, {0.8, 0.1, 0.1}, 777);
        save_manifest(m, root / "manifest_haze.json");

        BenchmarkRun run;
        run.manifest = m;
        run.root = root;
        run.jobs = hw_jobs();
        for (const char* name : {"identity", "dcp", "bccr", "oracle"}) {
            MethodSpec spec;
            spec.name = name;
            run.methods.push_back(spec);
        }
        MetricReport report = evaluate(run);
        write_report_csv(report, root / "report.csv");

        manifest_text = slurp(root / "manifest_haze.json");
        csv_text = slurp(root / "report.csv");
        fs::remove_all(root);
    };

    std::string manifest_a, csv_a, manifest_b, csv_b;
    run_once("a", manifest_a, csv_a);
    run_once("b", manifest_b, csv_b);
    if (manifest_a != manifest_b) {
        detail = "manifests differ between runs";
        return false;
    }
    if (csv_a != csv_b) {
        detail = "csv reports differ between runs";
        return false;
    }
    detail = "manifest and csv byte-identical across two executions";
    return !manifest_a.empty() && !csv_a.empty();
}

}  // namespace

int main() {
    std::printf("gauge-dehaze acceptance suite\n");

    criterion(1, "scattering round-trip within 1e-6 above the transmission floor",
              scattering_round_trip);
    criterion(2, "metrics match independent loop oracles", metric_oracles);
    criterion(3, "identity ssim strictly decreasing over the 10-level ladder",
              corruption_monotonicity);
    criterion(4, "bccr objective non-increasing across outer iterations", bccr_solver_monotone);

    DeskScale desk = run_desk_scale();
    criterion(5, "desk-scale directional reproduction (improvement, haze vs smoke, ssim band)",
              [&](std::string& d) { return directional_findings(desk, d); });
    criterion(6, "dataset pairing and split invariants at full scale", dataset_invariants);
    criterion(7, "exact-inversion oracle dominates both estimators",
              [&](std::string& d) { return oracle_dominance(desk, d); });
    criterion(8, "byte-identical manifests and csv reports across reruns", determinism);

    if (g_failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", g_failures);
    return 1;
}
