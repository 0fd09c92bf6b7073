#include "gauge_dehaze/image.hpp"

#include <cmath>
#include <stdexcept>

namespace gdh {

namespace {

void check_dims(int w, int h) {
    if (w < 1 || h < 1) throw std::invalid_argument("image dimensions must be >= 1");
}

}  // namespace

ImageBuffer::ImageBuffer(int w, int h, double fill) : width(w), height(h) {
    check_dims(w, h);
    data.assign(static_cast<size_t>(w) * h * 3, fill);
}

ImageBuffer::ImageBuffer(int w, int h, double r, double g, double b) : width(w), height(h) {
    check_dims(w, h);
    data.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < data.size(); i += 3) {
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
}

void ImageBuffer::validate(const std::string& what) const {
    if (width < 1 || height < 1 || data.size() != static_cast<size_t>(width) * height * 3)
        throw std::runtime_error(what + ": inconsistent buffer dimensions");
    for (double v : data)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw std::runtime_error(what + ": value outside [0,1]");
}

ScalarMap::ScalarMap(int w, int h, double fill) : width(w), height(h) {
    check_dims(w, h);
    data.assign(static_cast<size_t>(w) * h, fill);
}

ScalarMap luminance(const ImageBuffer& img) {
    ScalarMap out(img.width, img.height);
    const double* p = img.data.data();
    for (size_t i = 0; i < out.size(); ++i, p += 3)
        out.data[i] = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    return out;
}

void require_same_size(const ImageBuffer& a, const ImageBuffer& b, const char* where) {
    if (!a.same_size(b)) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

void require_same_size(const ImageBuffer& a, const ScalarMap& b, const char* where) {
    if (!b.same_size(a)) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

void require_same_size(const ScalarMap& a, const ScalarMap& b, const char* where) {
    if (!a.same_size(b)) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

}  // namespace gdh
