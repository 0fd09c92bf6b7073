#include "gauge_dehaze/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "gauge_dehaze/codec.hpp"
#include "gauge_dehaze/parallel.hpp"
#include "gauge_dehaze/rng.hpp"
#include "gauge_dehaze/scenegen.hpp"

namespace gdh {

namespace fs = std::filesystem;
using nlohmann::json;

bool DatasetManifest::is_split() const {
    return !entries.empty() && !entries.front().split.empty();
}

namespace {

std::string scene_id(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scene_%04d", index);
    return buf;
}

std::string level_suffix(int level_index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", level_index + 1);
    return buf;
}

json corruption_to_json(const CorruptionSpec& spec) {
    json j;
    if (const auto* h = std::get_if<HazeSpec>(&spec)) {
        j["type"] = "haze";
        j["beta"] = h->beta;
    } else {
        const auto& s = std::get<SmokeSpec>(spec);
        j["type"] = "smoke";
        j["base_beta"] = s.base_beta;
        j["octaves"] = s.octaves;
        j["lacunarity"] = s.lacunarity;
        j["gain"] = s.gain;
        j["density_scale"] = s.density_scale;
        j["seed"] = s.seed;
    }
    return j;
}

CorruptionSpec corruption_from_json(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "haze") {
        HazeSpec h;
        h.beta = j.at("beta").get<double>();
        return h;
    }
    if (type != "smoke") throw std::runtime_error("unknown corruption type: " + type);
    SmokeSpec s;
    s.base_beta = j.at("base_beta").get<double>();
    s.octaves = j.at("octaves").get<int>();
    s.lacunarity = j.at("lacunarity").get<double>();
    s.gain = j.at("gain").get<double>();
    s.density_scale = j.at("density_scale").get<double>();
    s.seed = j.at("seed").get<uint64_t>();
    return s;
}

}  // namespace

DatasetManifest generate_dataset(int n_scenes, const std::string& kind,
                                 const fs::path& out_root, uint64_t seed,
                                 const GenerateOptions& options) {
    if (n_scenes < 10) throw std::invalid_argument("generate_dataset needs at least 10 scenes");
    if (kind != "haze" && kind != "smoke")
        throw std::invalid_argument("dataset kind must be haze or smoke");

    const std::vector<double>& ladder =
        options.beta_ladder.empty() ? default_beta_ladder() : options.beta_ladder;
    for (size_t k = 1; k < ladder.size(); ++k)
        if (!(ladder[k] > ladder[k - 1]))
            throw std::invalid_argument("beta ladder must be strictly increasing");

    AtmosphericLight airlight =
        kind == "haze" ? default_haze_airlight() : default_smoke_airlight();

    fs::create_directories(out_root / "clear");
    fs::create_directories(out_root / "depth");
    fs::create_directories(out_root / kind);

    DatasetManifest manifest;
    manifest.kind = kind;
    manifest.generator.seed = seed;
    manifest.generator.width = options.width;
    manifest.generator.height = options.height;
    manifest.generator.beta_ladder = ladder;
    manifest.generator.airlight = airlight;
    manifest.generator.octaves = options.octaves;
    manifest.generator.lacunarity = options.lacunarity;
    manifest.generator.gain = options.gain;
    manifest.generator.density_scale = options.density_scale;
    manifest.entries.resize(n_scenes);

    parallel_for(static_cast<size_t>(n_scenes), options.jobs, [&](size_t i) {
        std::string id = scene_id(static_cast<int>(i));
        GaugeSceneSpec spec = random_scene(derive_seed(seed, i));
        RenderResult rr = render_gauge(spec, options.width, options.height);

        DatasetEntry entry;
        entry.clear_id = id;
        entry.clear_path = "clear/" + id + ".png";
        entry.depth_path = "depth/" + id + ".f32";
        save_image(rr.image, (out_root / entry.clear_path).string());
        save_scalar_f32(rr.depth, (out_root / entry.depth_path).string());

        std::vector<CorruptionSpec> levels;
        levels.reserve(ladder.size());
        for (size_t k = 0; k < ladder.size(); ++k) {
            if (kind == "haze") {
                levels.push_back(HazeSpec{ladder[k]});
            } else {
                SmokeSpec s;
                s.base_beta = ladder[k];
                s.octaves = options.octaves;
                s.lacunarity = options.lacunarity;
                s.gain = options.gain;
                s.density_scale = options.density_scale;
                s.seed = derive_seed(seed, i * 1000 + k + 1);
                levels.push_back(s);
            }
        }
        std::vector<ImageBuffer> corrupted = corrupt_levels(rr.image, rr.depth, airlight, levels);
        for (size_t k = 0; k < corrupted.size(); ++k) {
            CorruptedRecord rec;
            rec.level_index = static_cast<int>(k);
            rec.params = levels[k];
            rec.path = kind + "/" + id + "_" + level_suffix(static_cast<int>(k)) + ".png";
            save_image(corrupted[k], (out_root / rec.path).string());
            entry.corrupted.push_back(std::move(rec));
        }
        manifest.entries[i] = std::move(entry);
    });

    return manifest;
}

DatasetManifest split_manifest(const DatasetManifest& manifest,
                               const std::array<double, 3>& ratios, uint64_t seed) {
    double sum = ratios[0] + ratios[1] + ratios[2];
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split ratios must sum to 1");
    for (double r : ratios)
        if (r < 0.0) throw std::invalid_argument("split ratios must be >= 0");

    size_t n = manifest.entries.size();
    size_t n_val = static_cast<size_t>(std::floor(ratios[1] * static_cast<double>(n)));
    size_t n_test = static_cast<size_t>(std::floor(ratios[2] * static_cast<double>(n)));
    if (n_val + n_test > n) throw std::invalid_argument("split ratios exceed the dataset");
    size_t n_train = n - n_val - n_test;  // remainders go to train
    if (n_train == 0 || n_val == 0 || n_test == 0)
        throw std::invalid_argument("too few scenes for nonempty splits");

    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_seed(seed, 0x5917));
    rng.shuffle(order);

    DatasetManifest out = manifest;
    out.generator.split_seed = seed;
    out.generator.split_ratios = ratios;
    for (size_t k = 0; k < n; ++k) {
        const char* split = k < n_train ? "train" : (k < n_train + n_val ? "val" : "test");
        DatasetEntry& e = out.entries[order[k]];
        e.split = split;
        for (CorruptedRecord& rec : e.corrupted) rec.split = split;
    }
    return out;
}

std::vector<std::string> validate_manifest(const DatasetManifest& manifest,
                                           const fs::path& root) {
    std::vector<std::string> violations;
    auto add = [&](const std::string& v) { violations.push_back(v); };

    if (manifest.schema_version != 1) add("unsupported schema_version");
    if (manifest.kind != "haze" && manifest.kind != "smoke") add("kind must be haze or smoke");

    size_t ladder_size = manifest.generator.beta_ladder.size();
    if (ladder_size != 10)
        add("ladder has " + std::to_string(ladder_size) + " levels, expected 10");

    bool any_split = manifest.is_split();
    for (const DatasetEntry& e : manifest.entries) {
        if (!fs::exists(root / e.clear_path)) add(e.clear_id + ": missing file " + e.clear_path);
        if (!fs::exists(root / e.depth_path)) add(e.clear_id + ": missing file " + e.depth_path);

        if (e.corrupted.size() != ladder_size)
            add(e.clear_id + ": expected " + std::to_string(ladder_size) +
                " corrupted images, found " + std::to_string(e.corrupted.size()));

        double prev_beta = -1.0;
        for (size_t k = 0; k < e.corrupted.size(); ++k) {
            const CorruptedRecord& rec = e.corrupted[k];
            if (rec.level_index != static_cast<int>(k))
                add(e.clear_id + ": level_index out of order at position " + std::to_string(k));
            if (!fs::exists(root / rec.path)) add(e.clear_id + ": missing file " + rec.path);
            double beta = nominal_beta(rec.params);
            if (beta <= prev_beta)
                add(e.clear_id + ": levels not strictly increasing at index " +
                    std::to_string(k));
            prev_beta = beta;
        }

        if (any_split) {
            if (e.split != "train" && e.split != "val" && e.split != "test")
                add(e.clear_id + ": invalid split tag '" + e.split + "'");
            for (const CorruptedRecord& rec : e.corrupted)
                if (rec.split != e.split)
                    add(e.clear_id + ": corrupted image " + rec.path +
                        " straddles splits (" + rec.split + " vs " + e.split + ")");
        }
    }
    return violations;
}

namespace {

json manifest_to_json(const DatasetManifest& m) {
    json j;
    j["schema_version"] = m.schema_version;
    j["kind"] = m.kind;

    json gen;
    gen["seed"] = m.generator.seed;
    gen["width"] = m.generator.width;
    gen["height"] = m.generator.height;
    gen["beta_ladder"] = m.generator.beta_ladder;
    gen["airlight"] = {m.generator.airlight.r, m.generator.airlight.g, m.generator.airlight.b};
    gen["octaves"] = m.generator.octaves;
    gen["lacunarity"] = m.generator.lacunarity;
    gen["gain"] = m.generator.gain;
    gen["density_scale"] = m.generator.density_scale;
    if (m.is_split()) {
        gen["split_seed"] = m.generator.split_seed;
        gen["split_ratios"] = m.generator.split_ratios;
    }
    j["generator"] = gen;

    json entries = json::array();
    json split_assignment = json::object();
    for (const DatasetEntry& e : m.entries) {
        json je;
        je["clear_id"] = e.clear_id;
        je["clear_path"] = e.clear_path;
        je["depth_path"] = e.depth_path;
        je["split"] = e.split;
        json corrupted = json::array();
        for (const CorruptedRecord& rec : e.corrupted) {
            json jr;
            jr["path"] = rec.path;
            jr["level_index"] = rec.level_index;
            jr["split"] = rec.split;
            jr["params"] = corruption_to_json(rec.params);
            corrupted.push_back(jr);
        }
        je["corrupted"] = corrupted;
        entries.push_back(je);
        if (!e.split.empty()) split_assignment[e.clear_id] = e.split;
    }
    j["entries"] = entries;
    if (m.is_split()) j["split_assignment"] = split_assignment;
    return j;
}

DatasetManifest manifest_from_json(const json& j) {
    DatasetManifest m;
    m.schema_version = j.at("schema_version").get<int>();
    m.kind = j.at("kind").get<std::string>();

    const json& gen = j.at("generator");
    m.generator.seed = gen.at("seed").get<uint64_t>();
    m.generator.width = gen.at("width").get<int>();
    m.generator.height = gen.at("height").get<int>();
    m.generator.beta_ladder = gen.at("beta_ladder").get<std::vector<double>>();
    auto air = gen.at("airlight").get<std::vector<double>>();
    if (air.size() != 3) throw std::runtime_error("manifest airlight must have 3 channels");
    m.generator.airlight = {air[0], air[1], air[2]};
    m.generator.octaves = gen.at("octaves").get<int>();
    m.generator.lacunarity = gen.at("lacunarity").get<double>();
    m.generator.gain = gen.at("gain").get<double>();
    m.generator.density_scale = gen.at("density_scale").get<double>();
    if (gen.contains("split_seed")) m.generator.split_seed = gen.at("split_seed").get<uint64_t>();
    if (gen.contains("split_ratios"))
        m.generator.split_ratios = gen.at("split_ratios").get<std::array<double, 3>>();

    for (const json& je : j.at("entries")) {
        DatasetEntry e;
        e.clear_id = je.at("clear_id").get<std::string>();
        e.clear_path = je.at("clear_path").get<std::string>();
        e.depth_path = je.at("depth_path").get<std::string>();
        e.split = je.at("split").get<std::string>();
        for (const json& jr : je.at("corrupted")) {
            CorruptedRecord rec;
            rec.path = jr.at("path").get<std::string>();
            rec.level_index = jr.at("level_index").get<int>();
            rec.split = jr.at("split").get<std::string>();
            rec.params = corruption_from_json(jr.at("params"));
            e.corrupted.push_back(std::move(rec));
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

}  // namespace

std::string manifest_to_json_string(const DatasetManifest& manifest) {
    return manifest_to_json(manifest).dump(2) + "\n";
}

DatasetManifest manifest_from_json_string(const std::string& text) {
    return manifest_from_json(json::parse(text));
}

void save_manifest(const DatasetManifest& manifest, const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error(path.string() + ": cannot write manifest");
    f << manifest_to_json_string(manifest);
    if (!f) throw std::runtime_error(path.string() + ": short manifest write");
}

DatasetManifest load_manifest(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error(path.string() + ": cannot open manifest");
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return manifest_from_json_string(text);
}

}  // namespace gdh
