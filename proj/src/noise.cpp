#include "gauge_dehaze/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gauge_dehaze/rng.hpp"

namespace gdh {

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

FbmField::FbmField(uint64_t seed, int octaves, double lacunarity, double gain)
    : octaves_(octaves), lacunarity_(lacunarity), gain_(gain) {
    if (octaves < 1) throw std::invalid_argument("fbm octaves must be >= 1");
    if (lacunarity <= 1.0) throw std::invalid_argument("fbm lacunarity must be > 1");
    if (gain <= 0.0 || gain >= 1.0) throw std::invalid_argument("fbm gain must be in (0,1)");

    Rng rng(derive_seed(seed, 0x6f62));
    for (int i = 0; i < kTableSize; ++i) {
        values_[i] = rng.uniform();
        perm_[i] = i;
    }
    for (int i = kTableSize - 1; i > 0; --i) {
        int j = static_cast<int>(rng.below(static_cast<uint64_t>(i) + 1));
        std::swap(perm_[i], perm_[j]);
    }
    for (int i = 0; i < kTableSize; ++i) perm_[kTableSize + i] = perm_[i];

    norm_ = 0.0;
    double amp = 1.0;
    for (int o = 0; o < octaves_; ++o, amp *= gain_) norm_ += amp;
}

double FbmField::noise(double x, double y) const {
    int xi = static_cast<int>(std::floor(x));
    int yi = static_cast<int>(std::floor(y));
    double tx = smoothstep(x - xi);
    double ty = smoothstep(y - yi);

    int x0 = xi & (kTableSize - 1);
    int x1 = (x0 + 1) & (kTableSize - 1);
    int y0 = yi & (kTableSize - 1);
    int y1 = (y0 + 1) & (kTableSize - 1);

    double c00 = values_[perm_[perm_[x0] + y0]];
    double c10 = values_[perm_[perm_[x1] + y0]];
    double c01 = values_[perm_[perm_[x0] + y1]];
    double c11 = values_[perm_[perm_[x1] + y1]];

    return lerp(lerp(c00, c10, tx), lerp(c01, c11, tx), ty);
}

double FbmField::sample(double x, double y) const {
    double acc = 0.0;
    double amp = 1.0;
    double freq = 1.0;
    for (int o = 0; o < octaves_; ++o) {
        acc += amp * noise(x * freq, y * freq);
        amp *= gain_;
        freq *= lacunarity_;
    }
    return acc / norm_;
}

ScalarMap fbm_map(int width, int height, uint64_t seed, int octaves, double lacunarity,
                  double gain, double cells_across) {
    if (width < 1 || height < 1) throw std::invalid_argument("fbm_map dimensions must be >= 1");
    FbmField field(seed, octaves, lacunarity, gain);
    double scale = cells_across / std::max(width, height);
    ScalarMap out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = field.sample((x + 0.5) * scale, (y + 0.5) * scale);
    return out;
}

}  // namespace gdh
