#pragma once

#include "gauge_dehaze/image.hpp"

namespace gdh {

// Sliding-window minimum over the (2*radius+1)^2 neighborhood, borders
// replicate. radius 0 is the identity.
ScalarMap min_filter(const ScalarMap& map, int radius);

// Dual of min_filter.
ScalarMap max_filter(const ScalarMap& map, int radius);

// Mean over the (2*radius+1)^2 neighborhood with replicated borders.
ScalarMap box_mean(const ScalarMap& map, int radius);

// Normalized Gaussian window (2*radius+1 taps per axis), borders replicate.
ScalarMap gaussian_blur(const ScalarMap& map, int radius, double sigma);

// Edge-preserving refinement: per window, fit input ~= a * lum(guide) + b and
// evaluate the fit at the window center. Degenerates to box_mean(input) when
// the guide is flat or eps dominates.
ScalarMap guided_filter(const ImageBuffer& guide, const ScalarMap& input, int radius, double eps);

}  // namespace gdh
