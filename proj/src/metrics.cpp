#include "gauge_dehaze/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gauge_dehaze/filters.hpp"

namespace gdh {

void MetricParams::validate() const {
    if (!(max_value > 0.0)) throw std::invalid_argument("max_value must be > 0");
    if (!(k1 > 0.0) || !(k2 > 0.0)) throw std::invalid_argument("ssim constants must be > 0");
    if (window_radius < 1) throw std::invalid_argument("window_radius must be >= 1");
    if (!(window_sigma > 0.0)) throw std::invalid_argument("window_sigma must be > 0");
}

double MetricParams::c1() const { return raw_c_constants ? k1 : (k1 * max_value) * (k1 * max_value); }

double MetricParams::c2() const { return raw_c_constants ? k2 : (k2 * max_value) * (k2 * max_value); }

double mse(const ImageBuffer& gt, const ImageBuffer& out) {
    require_same_size(gt, out, "mse");
    double acc = 0.0;
    for (size_t i = 0; i < gt.data.size(); ++i) {
        double d = gt.data[i] - out.data[i];
        acc += d * d;
    }
    return acc / static_cast<double>(gt.data.size());
}

double psnr_from_mse(double mse_value, const MetricParams& params) {
    params.validate();
    if (mse_value < 0.0) throw std::invalid_argument("mse must be >= 0");
    if (mse_value == 0.0) return params.psnr_cap_db;
    double v = 10.0 * std::log10(params.max_value * params.max_value / mse_value);
    return std::min(v, params.psnr_cap_db);
}

PsnrResult psnr(const ImageBuffer& gt, const ImageBuffer& out, const MetricParams& params) {
    double m = mse(gt, out);
    PsnrResult r;
    r.exact = (m == 0.0);
    r.db = psnr_from_mse(m, params);
    return r;
}

namespace {

struct SsimStats {
    double mu_a, mu_b, var_a, var_b, cov;
};

double ssim_from_stats(const SsimStats& s, double c1, double c2) {
    double num = (2.0 * s.mu_a * s.mu_b + c1) * (2.0 * s.cov + c2);
    double den = (s.mu_a * s.mu_a + s.mu_b * s.mu_b + c1) * (s.var_a + s.var_b + c2);
    return num / den;
}

double ssim_global_plane(const ScalarMap& a, const ScalarMap& b, const MetricParams& params) {
    size_t n = a.size();
    double mu_a = 0.0, mu_b = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mu_a += a.data[i];
        mu_b += b.data[i];
    }
    mu_a /= static_cast<double>(n);
    mu_b /= static_cast<double>(n);

    double var_a = 0.0, var_b = 0.0, cov = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double da = a.data[i] - mu_a;
        double db = b.data[i] - mu_b;
        var_a += da * da;
        var_b += db * db;
        cov += da * db;
    }
    var_a /= static_cast<double>(n);
    var_b /= static_cast<double>(n);
    cov /= static_cast<double>(n);

    return ssim_from_stats({mu_a, mu_b, var_a, var_b, cov}, params.c1(), params.c2());
}

double ssim_windowed_plane(const ScalarMap& a, const ScalarMap& b, const MetricParams& params) {
    int r = params.window_radius;
    double sg = params.window_sigma;

    ScalarMap mu_a = gaussian_blur(a, r, sg);
    ScalarMap mu_b = gaussian_blur(b, r, sg);

    ScalarMap aa(a.width, a.height), bb(a.width, a.height), ab(a.width, a.height);
    for (size_t i = 0; i < a.size(); ++i) {
        aa.data[i] = a.data[i] * a.data[i];
        bb.data[i] = b.data[i] * b.data[i];
        ab.data[i] = a.data[i] * b.data[i];
    }
    ScalarMap mu_aa = gaussian_blur(aa, r, sg);
    ScalarMap mu_bb = gaussian_blur(bb, r, sg);
    ScalarMap mu_ab = gaussian_blur(ab, r, sg);

    double c1 = params.c1(), c2 = params.c2();
    double acc = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        SsimStats s;
        s.mu_a = mu_a.data[i];
        s.mu_b = mu_b.data[i];
        s.var_a = mu_aa.data[i] - s.mu_a * s.mu_a;
        s.var_b = mu_bb.data[i] - s.mu_b * s.mu_b;
        s.cov = mu_ab.data[i] - s.mu_a * s.mu_b;
        acc += ssim_from_stats(s, c1, c2);
    }
    return acc / static_cast<double>(a.size());
}

ScalarMap channel_plane(const ImageBuffer& img, int c) {
    ScalarMap out(img.width, img.height);
    for (size_t i = 0; i < out.size(); ++i) out.data[i] = img.data[i * 3 + c];
    return out;
}

}  // namespace

double ssim_global(const ImageBuffer& gt, const ImageBuffer& out, const MetricParams& params) {
    require_same_size(gt, out, "ssim_global");
    params.validate();
    if (params.per_channel_ssim) {
        double acc = 0.0;
        for (int c = 0; c < 3; ++c)
            acc += ssim_global_plane(channel_plane(gt, c), channel_plane(out, c), params);
        return acc / 3.0;
    }
    return ssim_global_plane(luminance(gt), luminance(out), params);
}

double ssim_windowed(const ImageBuffer& gt, const ImageBuffer& out, const MetricParams& params) {
    require_same_size(gt, out, "ssim_windowed");
    params.validate();
    if (gt.width < 2 * params.window_radius + 1 || gt.height < 2 * params.window_radius + 1)
        throw std::invalid_argument("ssim_windowed: image smaller than the window");
    if (params.per_channel_ssim) {
        double acc = 0.0;
        for (int c = 0; c < 3; ++c)
            acc += ssim_windowed_plane(channel_plane(gt, c), channel_plane(out, c), params);
        return acc / 3.0;
    }
    return ssim_windowed_plane(luminance(gt), luminance(out), params);
}

}  // namespace gdh
