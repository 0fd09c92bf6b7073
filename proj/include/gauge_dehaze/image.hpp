#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gdh {

// H x W x 3 interleaved RGB, values in [0,1]. Row-major, top-left origin.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ImageBuffer() = default;
    ImageBuffer(int w, int h, double fill = 0.0);
    ImageBuffer(int w, int h, double r, double g, double b);

    double& at(int x, int y, int c) {
        return data[(static_cast<size_t>(y) * width + x) * 3 + c];
    }
    double at(int x, int y, int c) const {
        return data[(static_cast<size_t>(y) * width + x) * 3 + c];
    }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }
    bool same_size(const ImageBuffer& o) const { return width == o.width && height == o.height; }

    // Throws std::runtime_error unless all values are finite and in [0,1]
    // and data.size() == width*height*3.
    void validate(const std::string& what = "image") const;
};

// Single-channel row-major float map (depth, transmission, dark channel, ...).
struct ScalarMap {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    ScalarMap() = default;
    ScalarMap(int w, int h, double fill = 0.0);

    double& at(int x, int y) { return data[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<size_t>(y) * width + x]; }

    size_t size() const { return static_cast<size_t>(width) * height; }
    bool same_size(const ScalarMap& o) const { return width == o.width && height == o.height; }
    bool same_size(const ImageBuffer& o) const { return width == o.width && height == o.height; }
};

// Y = 0.299 R + 0.587 G + 0.114 B
ScalarMap luminance(const ImageBuffer& img);

void require_same_size(const ImageBuffer& a, const ImageBuffer& b, const char* where);
void require_same_size(const ImageBuffer& a, const ScalarMap& b, const char* where);
void require_same_size(const ScalarMap& a, const ScalarMap& b, const char* where);

}  // namespace gdh
