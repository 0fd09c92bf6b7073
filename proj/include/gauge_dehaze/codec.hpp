#pragma once

#include <string>

#include "gauge_dehaze/image.hpp"

namespace gdh {

// Decodes an 8-bit raster. PNG (lossless interchange) and JPEG (accepted on
// input only) are supported; values map as v/255. Alpha is discarded, gray is
// expanded to RGB. Throws std::runtime_error with the path on failure.
ImageBuffer load_image(const std::string& path);

// Encodes 8-bit RGB PNG, round(v*255). Round-trip error is at most 1/510 per
// channel.
void save_image(const ImageBuffer& img, const std::string& path);

// Raw float sidecar: 16-byte header (magic "GDHF", u32 version, u32 width,
// u32 height, little-endian) followed by width*height float32 values.
ScalarMap load_scalar_f32(const std::string& path);
void save_scalar_f32(const ScalarMap& map, const std::string& path);

// Single-channel 16-bit PNG, values scaled by 65535 (map values must be in [0,1]).
ScalarMap load_scalar_png16(const std::string& path);
void save_scalar_png16(const ScalarMap& map, const std::string& path);

}  // namespace gdh
