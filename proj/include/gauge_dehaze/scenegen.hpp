#pragma once

#include <cstdint>

#include "gauge_dehaze/image.hpp"

namespace gdh {

// Procedural analog-gauge scene. Angles are in degrees on the dial arc; the
// arc bisector always points up in image space and positive offsets run
// clockwise. gauge_radius_px is given at the 256x256 reference size and is
// rescaled by min(width,height)/256 at render time.
struct GaugeSceneSpec {
    uint64_t seed = 0;
    double needle_angle = 0.0;   // within [sweep_start, sweep_end]
    double sweep_start = -120.0;
    double sweep_end = 120.0;
    int tick_count = 11;         // >= 2
    double scale_min = 0.0;      // unit-less dial scale range
    double scale_max = 100.0;
    double camera_distance = 2.0;  // meters, in [0.5, 10]
    double camera_yaw = 0.0;       // degrees, dial foreshortening
    double background_brightness = 0.55;  // [0,1]
    double gauge_radius_px = 90.0;

    void validate() const;  // throws std::invalid_argument on violations
};

struct RenderResult {
    ImageBuffer image;  // clear scene radiance
    ScalarMap depth;    // meters, strictly positive
};

// Deterministic flat-shaded render with 2x2 supersampling. The depth map is
// camera_distance on the gauge face with a smooth +20% gradient toward the
// borders. Identical specs render bitwise-identical outputs.
RenderResult render_gauge(const GaugeSceneSpec& spec, int width, int height);

// Samples a spec with all fields inside their invariant bounds; deterministic
// per seed.
GaugeSceneSpec random_scene(uint64_t seed);

}  // namespace gdh
