#pragma once

#include "gauge_dehaze/image.hpp"
#include "gauge_dehaze/scatter.hpp"

namespace gdh {

struct DcpParams {
    int patch_radius = 7;
    double omega = 0.95;              // haze retained for naturalness, (0,1]
    double airlight_fraction = 0.001; // top fraction of dark-channel pixels
    double t_floor = 0.1;
    int guided_radius = 30;
    double guided_eps = 1e-3;

    void validate() const;
};

// Per-pixel channel minimum eroded over the patch.
ScalarMap dark_channel(const ImageBuffer& I, int patch_radius);

// Among the brightest `fraction` of dark-channel pixels, picks the most
// luminous pixel of I; channels clamped to [0.05, 1].
AtmosphericLight estimate_airlight(const ImageBuffer& I, const ScalarMap& dark, double fraction);

// t = 1 - omega * dark_channel(I/A), clamped to [t_floor, 1], then refined
// with a guided filter against I and clamped again.
ScalarMap estimate_transmission(const ImageBuffer& I, const AtmosphericLight& A,
                                const DcpParams& params);

struct DehazeResult {
    ImageBuffer image;
    ScalarMap transmission;
    AtmosphericLight airlight;
};

DehazeResult dehaze_dcp(const ImageBuffer& I, const DcpParams& params = {});

}  // namespace gdh
