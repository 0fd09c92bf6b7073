#include "gauge_dehaze/dcp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gauge_dehaze/filters.hpp"

namespace gdh {

void DcpParams::validate() const {
    if (patch_radius < 0) throw std::invalid_argument("patch_radius must be >= 0");
    if (!(omega >= 0.0) || omega > 1.0) throw std::invalid_argument("omega must be in [0,1]");
    if (!(airlight_fraction > 0.0) || airlight_fraction >= 1.0)
        throw std::invalid_argument("airlight_fraction must be in (0,1)");
    if (!(t_floor > 0.0) || t_floor > 1.0) throw std::invalid_argument("t_floor must be in (0,1]");
    if (guided_radius < 1) throw std::invalid_argument("guided_radius must be >= 1");
    if (!(guided_eps > 0.0)) throw std::invalid_argument("guided_eps must be > 0");
}

ScalarMap dark_channel(const ImageBuffer& I, int patch_radius) {
    if (patch_radius < 0) throw std::invalid_argument("patch_radius must be >= 0");
    ScalarMap channel_min(I.width, I.height);
    for (size_t i = 0; i < channel_min.size(); ++i) {
        const double* p = I.data.data() + i * 3;
        channel_min.data[i] = std::min({p[0], p[1], p[2]});
    }
    return min_filter(channel_min, patch_radius);
}

AtmosphericLight estimate_airlight(const ImageBuffer& I, const ScalarMap& dark, double fraction) {
    require_same_size(I, dark, "estimate_airlight");
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("airlight fraction must be in (0,1]");
    size_t n = dark.size();
    size_t top = std::max<size_t>(1, static_cast<size_t>(fraction * static_cast<double>(n)));

    ScalarMap lum = luminance(I);
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    // brightest dark-channel pixels first; ties broken deterministically
    std::nth_element(idx.begin(), idx.begin() + (top - 1), idx.end(), [&](size_t a, size_t b) {
        if (dark.data[a] != dark.data[b]) return dark.data[a] > dark.data[b];
        if (lum.data[a] != lum.data[b]) return lum.data[a] > lum.data[b];
        return a < b;
    });

    size_t best = idx[0];
    for (size_t k = 0; k < top; ++k) {
        size_t i = idx[k];
        if (lum.data[i] > lum.data[best] || (lum.data[i] == lum.data[best] && i < best)) best = i;
    }

    AtmosphericLight A;
    A.r = std::clamp(I.data[best * 3 + 0], 0.05, 1.0);
    A.g = std::clamp(I.data[best * 3 + 1], 0.05, 1.0);
    A.b = std::clamp(I.data[best * 3 + 2], 0.05, 1.0);
    return A;
}

ScalarMap estimate_transmission(const ImageBuffer& I, const AtmosphericLight& A,
                                const DcpParams& params) {
    params.validate();
    A.validate();

    ImageBuffer normalized(I.width, I.height);
    for (size_t i = 0; i < I.pixel_count(); ++i)
        for (int c = 0; c < 3; ++c) normalized.data[i * 3 + c] = I.data[i * 3 + c] / A[c];

    ScalarMap dark = dark_channel(normalized, params.patch_radius);
    ScalarMap t(I.width, I.height);
    for (size_t i = 0; i < t.size(); ++i)
        t.data[i] = std::clamp(1.0 - params.omega * dark.data[i], params.t_floor, 1.0);

    ScalarMap refined = guided_filter(I, t, params.guided_radius, params.guided_eps);
    for (double& v : refined.data) v = std::clamp(v, params.t_floor, 1.0);
    return refined;
}

DehazeResult dehaze_dcp(const ImageBuffer& I, const DcpParams& params) {
    params.validate();
    ScalarMap dark = dark_channel(I, params.patch_radius);
    AtmosphericLight A = estimate_airlight(I, dark, params.airlight_fraction);
    ScalarMap t = estimate_transmission(I, A, params);
    ImageBuffer restored = invert_scattering(I, t, A, params.t_floor);
    return {std::move(restored), std::move(t), A};
}

}  // namespace gdh
