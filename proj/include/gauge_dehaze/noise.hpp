#pragma once

#include <cstdint>

#include "gauge_dehaze/image.hpp"

namespace gdh {

// Seeded value-noise FBM in [0,1]. Octave frequencies grow by `lacunarity`,
// amplitudes decay by `gain`; the octave sum is renormalized so the range is
// independent of the octave count.
class FbmField {
public:
    FbmField(uint64_t seed, int octaves, double lacunarity, double gain);

    // x, y in lattice cells.
    double sample(double x, double y) const;

private:
    double noise(double x, double y) const;

    static constexpr int kTableSize = 256;
    double values_[kTableSize];
    int perm_[2 * kTableSize];
    int octaves_;
    double lacunarity_;
    double gain_;
    double norm_;
};

// Samples an FBM field over a width x height grid with `cells_across` lattice
// cells along the larger dimension.
ScalarMap fbm_map(int width, int height, uint64_t seed, int octaves, double lacunarity,
                  double gain, double cells_across = 4.0);

}  // namespace gdh
