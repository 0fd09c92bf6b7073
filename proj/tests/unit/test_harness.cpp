#include <doctest.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "gauge_dehaze/codec.hpp"
#include "gauge_dehaze/harness.hpp"

using namespace gdh;
namespace fs = std::filesystem;

namespace {

struct Fixture {
    fs::path root;
    DatasetManifest manifest;
};

// one shared tiny dataset per process; harness tests only read it
const Fixture& fixture() {
    static Fixture f = [] {
        Fixture fx;
        fx.root = fs::temp_directory_path() / "gdh_harness_fixture";
        fs::remove_all(fx.root);
        GenerateOptions o;
        o.width = 64;
        o.height = 64;
        o.jobs = 2;
        fx.manifest = generate_dataset(10, "haze", fx.root, 77, o);
        fx.manifest = split_manifest(fx.manifest, {0.8, 0.1, 0.1}, 77);
        save_manifest(fx.manifest, fx.root / "manifest_haze.json");
        return fx;
    }();
    return f;
}

BenchmarkRun base_run(std::vector<std::string> method_names) {
    BenchmarkRun run;
    run.manifest = fixture().manifest;
    run.root = fixture().root;
    for (const std::string& name : method_names) {
        MethodSpec m;
        m.name = name;
        run.methods.push_back(m);
    }
    run.jobs = 2;
    return run;
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

}  // namespace

TEST_CASE("identity scores decay with haze level and the oracle dominates") {
    BenchmarkRun run = base_run({"identity", "oracle", "dcp", "bccr"});
    MetricReport report = evaluate(run);
    CHECK(report.violations.empty());

    auto rows = rows_by_key(report);
    CHECK(rows[{"identity", 1}].ssim_mean > rows[{"identity", 10}].ssim_mean);

    for (int level = 1; level <= 10; ++level) {
        CHECK(rows[{"oracle", level}].psnr_mean >= rows[{"dcp", level}].psnr_mean);
        CHECK(rows[{"oracle", level}].psnr_mean >= rows[{"bccr", level}].psnr_mean);
    }

    // every method saw the identical image set
    std::map<std::string, int> counts;
    for (const MetricRecord& r : report.records) counts[r.method]++;
    for (const auto& [method, count] : counts) CHECK(count == 10);  // 1 test scene x 10 levels
}

TEST_CASE("reports are deterministic across runs and job counts") {
    fs::path out = fs::temp_directory_path() / "gdh_harness_reports";
    fs::create_directories(out);

    BenchmarkRun run = base_run({"identity", "dcp"});
    run.jobs = 1;
    MetricReport a = evaluate(run);
    run.jobs = 2;
    MetricReport b = evaluate(run);

    write_report_csv(a, out / "a.csv");
    write_report_csv(b, out / "b.csv");
    CHECK(slurp(out / "a.csv") == slurp(out / "b.csv"));
}

TEST_CASE("csv rows reproduce the json aggregates exactly") {
    fs::path out = fs::temp_directory_path() / "gdh_harness_rederive";
    fs::create_directories(out);
    BenchmarkRun run = base_run({"identity", "oracle"});
    MetricReport report = evaluate(run);
    write_report_csv(report, out / "report.csv");

    // parse the csv back
    std::ifstream f(out / "report.csv");
    std::string line;
    std::getline(f, line);
    CHECK(line == "id,level,method,psnr_db,ssim,exact");
    struct Acc {
        double psnr_sum = 0, ssim_sum = 0;
        int n = 0;
    };
    std::map<std::string, Acc> accs;
    while (std::getline(f, line)) {
        std::stringstream ss(line);
        std::string id, level, method, psnr_s, ssim_s, exact_s;
        std::getline(ss, id, ',');
        std::getline(ss, level, ',');
        std::getline(ss, method, ',');
        std::getline(ss, psnr_s, ',');
        std::getline(ss, ssim_s, ',');
        std::getline(ss, exact_s, ',');
        double psnr_v = 0, ssim_v = 0;
        std::from_chars(psnr_s.data(), psnr_s.data() + psnr_s.size(), psnr_v);
        std::from_chars(ssim_s.data(), ssim_s.data() + ssim_s.size(), ssim_v);
        Acc& a = accs[method];
        a.psnr_sum += psnr_v;
        a.ssim_sum += ssim_v;
        a.n += 1;
    }

    auto rows = rows_by_key(report);
    for (const auto& [method, acc] : accs) {
        REQUIRE(acc.n > 0);
        CHECK(std::abs(acc.psnr_sum / acc.n - rows[{method, 0}].psnr_mean) <= 1e-12);
        CHECK(std::abs(acc.ssim_sum / acc.n - rows[{method, 0}].ssim_mean) <= 1e-12);
    }
}

TEST_CASE("report json round trips") {
    fs::path out = fs::temp_directory_path() / "gdh_harness_json";
    fs::create_directories(out);
    BenchmarkRun run = base_run({"identity"});
    MetricReport report = evaluate(run);
    write_report_json(report, out / "report.json");
    MetricReport back = report_from_json(out / "report.json");

    REQUIRE(back.records.size() == report.records.size());
    for (size_t i = 0; i < report.records.size(); ++i) {
        CHECK(back.records[i].psnr_db == report.records[i].psnr_db);
        CHECK(back.records[i].ssim == report.records[i].ssim);
        CHECK(back.records[i].id == report.records[i].id);
    }
}

TEST_CASE("markdown report shape") {
    fs::path out = fs::temp_directory_path() / "gdh_harness_md";
    fs::create_directories(out);
    BenchmarkRun run = base_run({"identity", "oracle"});
    MetricReport report = evaluate(run);
    write_report_markdown(report, out / "report.md");

    std::string text = slurp(out / "report.md");
    CHECK(text.find("| method | PSNR_mean (dB) | PSNR_max (dB) | SSIM_mean | SSIM_max |") !=
          std::string::npos);
    CHECK(text.find("| identity |") != std::string::npos);
    CHECK(text.find("| oracle |") != std::string::npos);
}

TEST_CASE("external scoring") {
    const Fixture& fx = fixture();
    fs::path ext = fs::temp_directory_path() / "gdh_harness_external";
    fs::remove_all(ext);
    fs::create_directories(ext);

    // find the test-split entry
    const DatasetEntry* test_entry = nullptr;
    for (const auto& e : fx.manifest.entries)
        if (e.split == "test") test_entry = &e;
    REQUIRE(test_entry != nullptr);

    SUBCASE("ground-truth clears as outputs hit the ceiling") {
        for (const auto& rec : test_entry->corrupted) {
            fs::path stem = fs::path(rec.path).stem();
            fs::copy_file(fx.root / test_entry->clear_path, ext / (stem.string() + ".png"));
        }
        MetricReport report = score_external(fx.manifest, fx.root, ext, MetricParams{});
        REQUIRE(report.records.size() == 10);
        for (const MetricRecord& r : report.records) {
            CHECK(r.exact);
            CHECK(r.psnr_db == 99.0);
            CHECK(r.ssim == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    SUBCASE("corrupted inputs as outputs equal the identity method") {
        for (const auto& rec : test_entry->corrupted) {
            fs::path stem = fs::path(rec.path).stem();
            fs::copy_file(fx.root / rec.path, ext / (stem.string() + ".png"));
        }
        MetricReport external = score_external(fx.manifest, fx.root, ext, MetricParams{});
        MetricReport identity = evaluate(base_run({"identity"}));
        REQUIRE(external.records.size() == identity.records.size());
        for (size_t i = 0; i < external.records.size(); ++i) {
            CHECK(external.records[i].psnr_db == identity.records[i].psnr_db);
            CHECK(external.records[i].ssim == identity.records[i].ssim);
        }
    }

    SUBCASE("three missing outputs are recorded and excluded") {
        size_t made = 0;
        for (const auto& rec : test_entry->corrupted) {
            if (made + 3 >= test_entry->corrupted.size()) break;
            fs::path stem = fs::path(rec.path).stem();
            fs::copy_file(fx.root / rec.path, ext / (stem.string() + ".png"));
            ++made;
        }
        MetricReport report = score_external(fx.manifest, fx.root, ext, MetricParams{});
        CHECK(report.records.size() == 7);
        CHECK(report.violations.size() == 3);
    }

    SUBCASE("unmatched files are flagged") {
        for (const auto& rec : test_entry->corrupted) {
            fs::path stem = fs::path(rec.path).stem();
            fs::copy_file(fx.root / rec.path, ext / (stem.string() + ".png"));
        }
        save_image(ImageBuffer(8, 8, 0.5), (ext / "stray.png").string());
        MetricReport report = score_external(fx.manifest, fx.root, ext, MetricParams{});
        REQUIRE(report.violations.size() == 1);
        CHECK(report.violations[0].find("stray") != std::string::npos);
    }

    SUBCASE("zero matches is an explicit error") {
        fs::path empty = ext / "empty";
        fs::create_directories(empty);
        CHECK_THROWS_AS(score_external(fx.manifest, fx.root, empty, MetricParams{}),
                        std::runtime_error);
    }
}
