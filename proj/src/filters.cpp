#include "gauge_dehaze/filters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace gdh {

namespace {

// Sliding extremum over fixed windows of a replicate-padded line. Monotone
// deque, O(n) per line.
template <typename Compare>
void slide_line(const double* src, double* dst, int n, int radius, Compare keep) {
    if (radius == 0) {
        std::copy(src, src + n, dst);
        return;
    }
    int window = 2 * radius + 1;
    std::vector<int> deque(n + 2 * radius);
    int head = 0, tail = 0;  // [head, tail)
    auto value = [&](int i) { return src[std::clamp(i - radius, 0, n - 1)]; };

    for (int i = 0; i < n + 2 * radius; ++i) {
        while (tail > head && !keep(value(deque[tail - 1]), value(i))) --tail;
        deque[tail++] = i;
        if (deque[head] <= i - window) ++head;
        if (i >= window - 1) dst[i - window + 1] = value(deque[head]);
    }
}

enum class Extremum { Min, Max };

ScalarMap extremum_filter(const ScalarMap& map, int radius, Extremum kind) {
    if (radius < 0) throw std::invalid_argument("filter radius must be >= 0");
    ScalarMap tmp(map.width, map.height);
    ScalarMap out(map.width, map.height);
    auto less = [](double a, double b) { return a < b; };
    auto greater = [](double a, double b) { return a > b; };

    // horizontal pass
    for (int y = 0; y < map.height; ++y) {
        const double* src = map.data.data() + static_cast<size_t>(y) * map.width;
        double* dst = tmp.data.data() + static_cast<size_t>(y) * map.width;
        if (kind == Extremum::Min)
            slide_line(src, dst, map.width, radius, less);
        else
            slide_line(src, dst, map.width, radius, greater);
    }
    // vertical pass on transposed columns
    std::vector<double> col(map.height), res(map.height);
    for (int x = 0; x < map.width; ++x) {
        for (int y = 0; y < map.height; ++y) col[y] = tmp.at(x, y);
        if (kind == Extremum::Min)
            slide_line(col.data(), res.data(), map.height, radius, less);
        else
            slide_line(col.data(), res.data(), map.height, radius, greater);
        for (int y = 0; y < map.height; ++y) out.at(x, y) = res[y];
    }
    return out;
}

// Replicate-padded row sums for one line: dst[i] = sum of window around i.
void box_line(const double* src, double* dst, int n, int radius) {
    double acc = 0.0;
    for (int i = -radius; i <= radius; ++i) acc += src[std::clamp(i, 0, n - 1)];
    dst[0] = acc;
    for (int i = 1; i < n; ++i) {
        acc += src[std::clamp(i + radius, 0, n - 1)];
        acc -= src[std::clamp(i - radius - 1, 0, n - 1)];
        dst[i] = acc;
    }
}

}  // namespace

ScalarMap min_filter(const ScalarMap& map, int radius) {
    return extremum_filter(map, radius, Extremum::Min);
}

ScalarMap max_filter(const ScalarMap& map, int radius) {
    return extremum_filter(map, radius, Extremum::Max);
}

ScalarMap box_mean(const ScalarMap& map, int radius) {
    if (radius < 0) throw std::invalid_argument("filter radius must be >= 0");
    if (radius == 0) return map;
    ScalarMap tmp(map.width, map.height);
    for (int y = 0; y < map.height; ++y)
        box_line(map.data.data() + static_cast<size_t>(y) * map.width,
                 tmp.data.data() + static_cast<size_t>(y) * map.width, map.width, radius);

    ScalarMap out(map.width, map.height);
    double inv_area = 1.0 / (static_cast<double>(2 * radius + 1) * (2 * radius + 1));
    std::vector<double> col(map.height), res(map.height);
    for (int x = 0; x < map.width; ++x) {
        for (int y = 0; y < map.height; ++y) col[y] = tmp.at(x, y);
        box_line(col.data(), res.data(), map.height, radius);
        for (int y = 0; y < map.height; ++y) out.at(x, y) = res[y] * inv_area;
    }
    return out;
}

ScalarMap gaussian_blur(const ScalarMap& map, int radius, double sigma) {
    if (radius < 0) throw std::invalid_argument("filter radius must be >= 0");
    if (sigma <= 0.0) throw std::invalid_argument("gaussian sigma must be > 0");
    if (radius == 0) return map;

    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += kernel[i + radius];
    }
    for (double& k : kernel) k /= sum;

    ScalarMap tmp(map.width, map.height);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * map.at(std::clamp(x + i, 0, map.width - 1), y);
            tmp.at(x, y) = acc;
        }
    }
    ScalarMap out(map.width, map.height);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * tmp.at(x, std::clamp(y + i, 0, map.height - 1));
            out.at(x, y) = acc;
        }
    }
    return out;
}

ScalarMap guided_filter(const ImageBuffer& guide, const ScalarMap& input, int radius, double eps) {
    require_same_size(guide, input, "guided_filter");
    if (eps <= 0.0) throw std::invalid_argument("guided_filter eps must be > 0");

    ScalarMap g = luminance(guide);
    ScalarMap mean_g = box_mean(g, radius);
    ScalarMap mean_p = box_mean(input, radius);

    ScalarMap gg(g.width, g.height), gp(g.width, g.height);
    for (size_t i = 0; i < g.size(); ++i) {
        gg.data[i] = g.data[i] * g.data[i];
        gp.data[i] = g.data[i] * input.data[i];
    }
    ScalarMap mean_gg = box_mean(gg, radius);
    ScalarMap mean_gp = box_mean(gp, radius);

    ScalarMap out(g.width, g.height);
    for (size_t i = 0; i < g.size(); ++i) {
        double var_g = mean_gg.data[i] - mean_g.data[i] * mean_g.data[i];
        double cov_gp = mean_gp.data[i] - mean_g.data[i] * mean_p.data[i];
        double a = cov_gp / (var_g + eps);
        double b = mean_p.data[i] - a * mean_g.data[i];
        out.data[i] = a * g.data[i] + b;
    }
    return out;
}

}  // namespace gdh
