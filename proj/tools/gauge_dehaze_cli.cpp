#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "gauge_dehaze/codec.hpp"
#include "gauge_dehaze/dataset.hpp"
#include "gauge_dehaze/harness.hpp"
#include "gauge_dehaze/parallel.hpp"
#include "gauge_dehaze/rng.hpp"
#include "gauge_dehaze/scenegen.hpp"

namespace fs = std::filesystem;
using namespace gdh;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;

fs::path default_root(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("GAUGE_DEHAZE_ROOT")) return env;
    return ".";
}

std::vector<double> parse_csv_doubles(const std::string& csv) {
    std::vector<double> out;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t comma = csv.find(',', pos);
        if (comma == std::string::npos) comma = csv.size();
        out.push_back(std::stod(csv.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

int cmd_generate(const std::string& root_flag, int scenes, uint64_t seed, int width, int height,
                 int jobs) {
    fs::path root = default_root(root_flag);
    fs::create_directories(root / "clear");
    fs::create_directories(root / "depth");
    parallel_for(static_cast<size_t>(scenes), jobs, [&](size_t i) {
        char id[32];
        std::snprintf(id, sizeof(id), "scene_%04d", static_cast<int>(i));
        GaugeSceneSpec spec = random_scene(derive_seed(seed, i));
        RenderResult rr = render_gauge(spec, width, height);
        save_image(rr.image, (root / "clear" / (std::string(id) + ".png")).string());
        save_scalar_f32(rr.depth, (root / "depth" / (std::string(id) + ".f32")).string());
    });
    std::cout << "wrote " << scenes << " clear/depth pairs under " << root << "\n";
    return kExitOk;
}

int cmd_corrupt(const std::string& root_flag, const std::string& kind, const std::string& levels,
                const std::string& airlight_csv, uint64_t seed, int jobs,
                const std::array<double, 3>& ratios, uint64_t split_seed, int octaves,
                double lacunarity, double gain, double density_scale) {
    fs::path root = default_root(root_flag);

    // enumerate the clear/depth pairs written by `generate`
    std::vector<fs::path> clears;
    for (const auto& de : fs::directory_iterator(root / "clear"))
        if (de.path().extension() == ".png") clears.push_back(de.path());
    std::sort(clears.begin(), clears.end());
    if (clears.empty()) {
        std::cerr << "no clear images under " << (root / "clear") << "\n";
        return kExitIo;
    }

    std::vector<double> ladder =
        levels.empty() ? default_beta_ladder() : parse_csv_doubles(levels);
    AtmosphericLight A = kind == "haze" ? default_haze_airlight() : default_smoke_airlight();
    if (!airlight_csv.empty()) {
        std::vector<double> a = parse_csv_doubles(airlight_csv);
        if (a.size() != 3) {
            std::cerr << "--airlight expects r,g,b\n";
            return kExitValidation;
        }
        A = {a[0], a[1], a[2]};
    }

    fs::create_directories(root / kind);
    DatasetManifest manifest;
    manifest.kind = kind;
    manifest.generator.seed = seed;
    manifest.generator.beta_ladder = ladder;
    manifest.generator.airlight = A;
    manifest.generator.octaves = octaves;
    manifest.generator.lacunarity = lacunarity;
    manifest.generator.gain = gain;
    manifest.generator.density_scale = density_scale;
    manifest.entries.resize(clears.size());
    {
        ImageBuffer first = load_image(clears.front().string());
        manifest.generator.width = first.width;
        manifest.generator.height = first.height;
    }

    parallel_for(clears.size(), jobs, [&](size_t i) {
        std::string id = clears[i].stem().string();
        ImageBuffer clear = load_image(clears[i].string());
        ScalarMap depth = load_scalar_f32((root / "depth" / (id + ".f32")).string());

        std::vector<CorruptionSpec> specs;
        for (size_t k = 0; k < ladder.size(); ++k) {
            if (kind == "haze") {
                specs.push_back(HazeSpec{ladder[k]});
            } else {
                SmokeSpec s;
                s.base_beta = ladder[k];
                s.octaves = octaves;
                s.lacunarity = lacunarity;
                s.gain = gain;
                s.density_scale = density_scale;
                s.seed = derive_seed(seed, i * 1000 + k + 1);
                specs.push_back(s);
            }
        }
        std::vector<ImageBuffer> corrupted = corrupt_levels(clear, depth, A, specs);

        DatasetEntry entry;
        entry.clear_id = id;
        entry.clear_path = "clear/" + id + ".png";
        entry.depth_path = "depth/" + id + ".f32";
        for (size_t k = 0; k < corrupted.size(); ++k) {
            char suffix[16];
            std::snprintf(suffix, sizeof(suffix), "%02d", static_cast<int>(k) + 1);
            CorruptedRecord rec;
            rec.level_index = static_cast<int>(k);
            rec.params = specs[k];
            rec.path = kind + "/" + id + "_" + suffix + ".png";
            save_image(corrupted[k], (root / rec.path).string());
            entry.corrupted.push_back(std::move(rec));
        }
        manifest.entries[i] = std::move(entry);
    });

    manifest = split_manifest(manifest, ratios, split_seed ? split_seed : seed);
    fs::path manifest_path = root / ("manifest_" + kind + ".json");
    save_manifest(manifest, manifest_path);
    std::cout << "wrote " << manifest.entries.size() * ladder.size() << " corrupted images and "
              << manifest_path << "\n";
    return kExitOk;
}

int cmd_dehaze(const std::string& method, const std::string& input, const std::string& output,
               const std::string& dump_t, const DcpParams& dcp, const BccrParams& bccr) {
    ImageBuffer I = load_image(input);
    DehazeResult result;
    if (method == "dcp") {
        result = dehaze_dcp(I, dcp);
    } else if (method == "bccr") {
        result = dehaze_bccr(I, bccr);
    } else {
        std::cerr << "unknown method '" << method << "' (expected dcp or bccr)\n";
        return kExitValidation;
    }
    save_image(result.image, output);
    if (!dump_t.empty()) save_scalar_f32(result.transmission, dump_t);
    std::cout << "restored " << input << " -> " << output << " (A = " << result.airlight.r << ", "
              << result.airlight.g << ", " << result.airlight.b << ")\n";
    return kExitOk;
}

int cmd_evaluate(const std::string& manifest_flag, const std::string& root_flag,
                 const std::vector<std::string>& methods, const std::string& external_dir,
                 const std::string& out_dir, const std::string& split, int jobs,
                 const DcpParams& dcp, const BccrParams& bccr, const MetricParams& metric) {
    fs::path root = default_root(root_flag);
    fs::path manifest_path =
        manifest_flag.empty() ? root / "manifest_haze.json" : fs::path(manifest_flag);
    DatasetManifest manifest = load_manifest(manifest_path);
    if (root_flag.empty() && !manifest_flag.empty()) root = fs::path(manifest_flag).parent_path();

    std::vector<std::string> violations = validate_manifest(manifest, root);
    if (!violations.empty()) {
        for (const std::string& v : violations) std::cerr << "violation: " << v << "\n";
        return kExitValidation;
    }

    BenchmarkRun run;
    run.manifest = manifest;
    run.root = root;
    run.metric_params = metric;
    run.split = split;
    run.jobs = jobs;
    for (const std::string& name : methods) {
        MethodSpec spec;
        spec.name = name;
        spec.dcp = dcp;
        spec.bccr = bccr;
        if (name == "external") {
            if (external_dir.empty()) {
                std::cerr << "method 'external' requires --external-dir\n";
                return kExitValidation;
            }
            spec.external_dir = external_dir;
        }
        run.methods.push_back(spec);
    }

    MetricReport report = evaluate(run);
    fs::path out = out_dir.empty() ? root : fs::path(out_dir);
    fs::create_directories(out);
    write_report_csv(report, out / "report.csv");
    write_report_json(report, out / "report.json");
    write_report_markdown(report, out / "report.md");

    for (const std::string& v : report.violations) std::cerr << "violation: " << v << "\n";
    std::cout << "evaluated " << report.records.size() << " (image, method) pairs -> "
              << (out / "report.csv") << "\n";
    return kExitOk;
}

int cmd_report(const std::string& json_path, const std::string& format,
               const std::string& out_path) {
    MetricReport report = report_from_json(json_path);
    if (format == "csv") {
        write_report_csv(report, out_path);
    } else if (format == "markdown") {
        write_report_markdown(report, out_path);
    } else if (format == "json") {
        write_report_json(report, out_path);
    } else {
        std::cerr << "unknown format '" << format << "'\n";
        return kExitValidation;
    }
    std::cout << "wrote " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Synthetic analog-gauge dehazing toolkit"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Render clear gauge scenes with paired depth");
    std::string gen_root;
    int gen_scenes = 20;
    uint64_t gen_seed = 0;
    int gen_width = 256, gen_height = 256, gen_jobs = 1;
    gen->add_option("--out,--root", gen_root, "Dataset root (default $GAUGE_DEHAZE_ROOT or .)");
    gen->add_option("--scenes", gen_scenes, "Number of scenes")->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_seed, "Master seed");
    gen->add_option("--width", gen_width, "Render width");
    gen->add_option("--height", gen_height, "Render height");
    gen->add_option("--jobs", gen_jobs, "Worker threads");

    // corrupt
    auto* cor = app.add_subcommand("corrupt", "Corrupt clear scenes at every ladder level");
    std::string cor_root, cor_kind = "haze", cor_levels, cor_airlight;
    uint64_t cor_seed = 0, cor_split_seed = 0;
    int cor_jobs = 1, cor_octaves = 4;
    double cor_lacunarity = 2.0, cor_gain = 0.5, cor_density = 1.0;
    std::array<double, 3> cor_ratios = {0.8, 0.1, 0.1};
    cor->add_option("--root,--out", cor_root, "Dataset root");
    cor->add_option("--kind", cor_kind, "haze|smoke")
        ->check(CLI::IsMember({"haze", "smoke"}));
    cor->add_option("--levels", cor_levels, "CSV of beta values (default 10-level ladder)");
    cor->add_option("--airlight", cor_airlight, "Airlight as r,g,b");
    cor->add_option("--seed", cor_seed, "Corruption seed");
    cor->add_option("--split-seed", cor_split_seed, "Split seed (defaults to --seed)");
    cor->add_option("--split-ratios", cor_ratios, "Train/val/test ratios");
    cor->add_option("--jobs", cor_jobs, "Worker threads");
    cor->add_option("--smoke-octaves", cor_octaves, "Smoke noise octaves");
    cor->add_option("--smoke-lacunarity", cor_lacunarity, "Smoke noise lacunarity");
    cor->add_option("--smoke-gain", cor_gain, "Smoke noise gain");
    cor->add_option("--smoke-density-scale", cor_density, "Smoke density scale");

    // dehaze
    auto* deh = app.add_subcommand("dehaze", "Restore a single image");
    std::string deh_method = "dcp", deh_input, deh_output, deh_dump_t;
    DcpParams dcp;
    BccrParams bccr;
    deh->add_option("--method", deh_method, "dcp|bccr")->check(CLI::IsMember({"dcp", "bccr"}));
    deh->add_option("--input,-i", deh_input, "Input image")->required();
    deh->add_option("--out,-o", deh_output, "Output image")->required();
    deh->add_option("--dump-t", deh_dump_t, "Write the transmission sidecar (.f32)");
    deh->add_option("--dcp-patch-radius", dcp.patch_radius, "DCP dark channel patch radius");
    deh->add_option("--dcp-omega", dcp.omega, "DCP haze retention factor");
    deh->add_option("--dcp-airlight-fraction", dcp.airlight_fraction,
                    "DCP airlight candidate fraction");
    deh->add_option("--dcp-t-floor", dcp.t_floor, "DCP transmission floor");
    deh->add_option("--dcp-guided-radius", dcp.guided_radius, "DCP guided filter radius");
    deh->add_option("--dcp-guided-eps", dcp.guided_eps, "DCP guided filter regularizer");
    deh->add_option("--bccr-c0", bccr.c0, "BCCR radiance lower bounds (r g b)");
    deh->add_option("--bccr-c1", bccr.c1, "BCCR radiance upper bounds (r g b)");
    deh->add_option("--bccr-patch-radius", bccr.patch_radius, "BCCR boundary closing radius");
    deh->add_option("--bccr-lambda", bccr.lambda, "BCCR data fidelity weight");
    deh->add_option("--bccr-sigma", bccr.sigma, "BCCR edge weight bandwidth");
    deh->add_option("--bccr-outer-iters", bccr.outer_iters, "BCCR outer iterations");
    deh->add_option("--bccr-penalty-init", bccr.penalty_init, "BCCR initial penalty");
    deh->add_option("--bccr-penalty-growth", bccr.penalty_growth, "BCCR penalty growth");
    deh->add_option("--bccr-t-floor", bccr.t_floor, "BCCR transmission floor");
    deh->add_option("--bccr-solver-pad", bccr.solver_pad, "BCCR reflect padding");

    // evaluate
    auto* eva = app.add_subcommand("evaluate", "Benchmark methods over a manifest split");
    std::string eva_manifest, eva_root, eva_external, eva_out, eva_split = "test";
    std::vector<std::string> eva_methods = {"identity", "dcp", "bccr"};
    int eva_jobs = 1;
    MetricParams metric;
    eva->add_option("--manifest", eva_manifest, "Manifest JSON path");
    eva->add_option("--root", eva_root, "Dataset root (default: manifest directory)");
    eva->add_option("--method,--methods", eva_methods,
                    "Methods: identity dcp bccr oracle external");
    eva->add_option("--external-dir", eva_external, "Directory of external outputs");
    eva->add_option("--out", eva_out, "Report output directory");
    eva->add_option("--split", eva_split, "Split to evaluate")
        ->check(CLI::IsMember({"train", "val", "test"}));
    eva->add_option("--jobs", eva_jobs, "Worker threads");
    eva->add_option("--ssim-window-radius", metric.window_radius, "SSIM window radius");
    eva->add_option("--ssim-window-sigma", metric.window_sigma, "SSIM window sigma");
    eva->add_flag("--ssim-raw-c", metric.raw_c_constants,
                  "Treat k1/k2 as raw additive SSIM constants");
    eva->add_flag("--ssim-per-channel", metric.per_channel_ssim,
                  "Average per-channel SSIM instead of luminance SSIM");

    // report
    auto* rep = app.add_subcommand("report", "Re-emit a saved report JSON");
    std::string rep_json, rep_format = "markdown", rep_out;
    rep->add_option("--json", rep_json, "Report JSON path")->required();
    rep->add_option("--format", rep_format, "csv|json|markdown")
        ->check(CLI::IsMember({"csv", "json", "markdown"}));
    rep->add_option("--out", rep_out, "Output path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_root, gen_scenes, gen_seed, gen_width, gen_height, gen_jobs);
        if (cor->parsed())
            return cmd_corrupt(cor_root, cor_kind, cor_levels, cor_airlight, cor_seed, cor_jobs,
                               cor_ratios, cor_split_seed, cor_octaves, cor_lacunarity, cor_gain,
                               cor_density);
        if (deh->parsed()) return cmd_dehaze(deh_method, deh_input, deh_output, deh_dump_t, dcp, bccr);
        if (eva->parsed())
            return cmd_evaluate(eva_manifest, eva_root, eva_methods, eva_external, eva_out,
                                eva_split, eva_jobs, dcp, bccr, metric);
        if (rep->parsed()) return cmd_report(rep_json, rep_format, rep_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
