#pragma once

#include "gauge_dehaze/image.hpp"

namespace gdh {

struct MetricParams {
    double max_value = 1.0;   // intensity ceiling (MAX in the PSNR formula)
    double k1 = 0.01;
    double k2 = 0.03;
    int window_radius = 5;
    double window_sigma = 1.5;
    double psnr_cap_db = 99.0;  // reported when MSE == 0
    // Default reads k1/k2 as the conventional K constants, c_i = (K_i*MAX)^2;
    // raw mode uses them as additive constants directly.
    bool raw_c_constants = false;
    // SSIM on luminance by default; per-channel scores averaged when set.
    bool per_channel_ssim = false;

    void validate() const;
    double c1() const;
    double c2() const;
};

// Mean squared difference over all H*W*3 values, 64-bit accumulation.
double mse(const ImageBuffer& gt, const ImageBuffer& out);

struct PsnrResult {
    double db = 0.0;
    bool exact = false;  // MSE was 0; db holds the reporting cap
};

double psnr_from_mse(double mse_value, const MetricParams& params = {});
PsnrResult psnr(const ImageBuffer& gt, const ImageBuffer& out, const MetricParams& params = {});

// Single-window SSIM from whole-image means/variances/cross-variance.
double ssim_global(const ImageBuffer& gt, const ImageBuffer& out, const MetricParams& params = {});

// Gaussian-windowed local SSIM averaged uniformly over pixels; the score used
// in all reports.
double ssim_windowed(const ImageBuffer& gt, const ImageBuffer& out,
                     const MetricParams& params = {});

}  // namespace gdh
