#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "gauge_dehaze/image.hpp"

namespace gdh {

// Global airlight color; components must stay in (0,1] (recovery divides by
// them).
struct AtmosphericLight {
    double r = 0.85;
    double g = 0.85;
    double b = 0.85;

    double operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
    void validate() const;
};

// Homogeneous extinction coefficient, 1/m.
struct HazeSpec {
    double beta = 0.0;
    void validate() const;
};

// Noise-modulated extinction: beta(x) = base_beta * (1 + density_scale * fbm(x)),
// fbm in [0,1], seeded value-noise octaves.
struct SmokeSpec {
    double base_beta = 0.0;
    int octaves = 4;
    double lacunarity = 2.0;
    double gain = 0.5;
    double density_scale = 1.0;
    uint64_t seed = 0;
    void validate() const;
};

using CorruptionSpec = std::variant<HazeSpec, SmokeSpec>;

// Nominal density of a level (its base beta), used for ladder monotonicity.
double nominal_beta(const CorruptionSpec& spec);

// t(x) = exp(-beta * d(x)). Depth must be strictly positive.
ScalarMap transmission_from_depth(const ScalarMap& depth, const HazeSpec& spec);

// t(x) = exp(-beta(x) * d(x)) with the seeded noise field; for
// density_scale == 0 this equals transmission_from_depth with base_beta.
ScalarMap smoke_transmission(const ScalarMap& depth, const SmokeSpec& spec);

ScalarMap transmission_for(const ScalarMap& depth, const CorruptionSpec& spec);

// I(x) = t(x) J(x) + (1 - t(x)) A; a convex combination, so in-range inputs
// stay in range without clipping.
ImageBuffer apply_scattering(const ImageBuffer& J, const ScalarMap& t, const AtmosphericLight& A);

// J(x) = (I(x) - A) / max(t(x), t_floor) + A, clamped to [0,1].
ImageBuffer invert_scattering(const ImageBuffer& I, const ScalarMap& t, const AtmosphericLight& A,
                              double t_floor = 0.05);

// One corrupted image per level; levels must be strictly increasing in
// nominal beta. Mean transmission decreases down the returned list.
std::vector<ImageBuffer> corrupt_levels(const ImageBuffer& J, const ScalarMap& depth,
                                        const AtmosphericLight& A,
                                        const std::vector<CorruptionSpec>& levels);

// Ten-step extinction ladder spanning light to dense haze at desk scale.
const std::vector<double>& default_beta_ladder();

AtmosphericLight default_haze_airlight();   // bright neutral
AtmosphericLight default_smoke_airlight();  // slightly warm

constexpr double kDefaultTransmissionFloor = 0.05;

}  // namespace gdh
