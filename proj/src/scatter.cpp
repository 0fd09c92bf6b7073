#include "gauge_dehaze/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "gauge_dehaze/noise.hpp"

namespace gdh {

void AtmosphericLight::validate() const {
    for (int c = 0; c < 3; ++c) {
        double v = (*this)[c];
        if (!std::isfinite(v) || v <= 0.0 || v > 1.0)
            throw std::invalid_argument("atmospheric light channels must be in (0,1]");
    }
}

void HazeSpec::validate() const {
    if (!std::isfinite(beta) || beta < 0.0)
        throw std::invalid_argument("haze beta must be finite and >= 0");
}

void SmokeSpec::validate() const {
    if (!std::isfinite(base_beta) || base_beta < 0.0)
        throw std::invalid_argument("smoke base_beta must be finite and >= 0");
    if (octaves < 1) throw std::invalid_argument("smoke octaves must be >= 1");
    if (lacunarity <= 1.0) throw std::invalid_argument("smoke lacunarity must be > 1");
    if (gain <= 0.0 || gain >= 1.0) throw std::invalid_argument("smoke gain must be in (0,1)");
    if (density_scale < 0.0) throw std::invalid_argument("smoke density_scale must be >= 0");
}

double nominal_beta(const CorruptionSpec& spec) {
    if (const auto* h = std::get_if<HazeSpec>(&spec)) return h->beta;
    return std::get<SmokeSpec>(spec).base_beta;
}

namespace {

void require_positive_depth(const ScalarMap& depth, const char* where) {
    for (double d : depth.data)
        if (!(d > 0.0)) throw std::invalid_argument(std::string(where) + ": depth must be > 0");
}

// exp underflows to 0 for extreme beta*d; keep t in (0,1].
double attenuation(double beta_d) {
    return std::max(std::exp(-beta_d), std::numeric_limits<double>::min());
}

}  // namespace

ScalarMap transmission_from_depth(const ScalarMap& depth, const HazeSpec& spec) {
    spec.validate();
    require_positive_depth(depth, "transmission_from_depth");
    ScalarMap t(depth.width, depth.height);
    for (size_t i = 0; i < t.size(); ++i) t.data[i] = attenuation(spec.beta * depth.data[i]);
    return t;
}

ScalarMap smoke_transmission(const ScalarMap& depth, const SmokeSpec& spec) {
    spec.validate();
    require_positive_depth(depth, "smoke_transmission");
    ScalarMap t(depth.width, depth.height);
    if (spec.density_scale == 0.0) {
        for (size_t i = 0; i < t.size(); ++i)
            t.data[i] = attenuation(spec.base_beta * depth.data[i]);
        return t;
    }
    ScalarMap fbm = fbm_map(depth.width, depth.height, spec.seed, spec.octaves, spec.lacunarity,
                            spec.gain);
    for (size_t i = 0; i < t.size(); ++i) {
        double beta = spec.base_beta * (1.0 + spec.density_scale * fbm.data[i]);
        t.data[i] = attenuation(beta * depth.data[i]);
    }
    return t;
}

ScalarMap transmission_for(const ScalarMap& depth, const CorruptionSpec& spec) {
    if (const auto* h = std::get_if<HazeSpec>(&spec)) return transmission_from_depth(depth, *h);
    return smoke_transmission(depth, std::get<SmokeSpec>(spec));
}

ImageBuffer apply_scattering(const ImageBuffer& J, const ScalarMap& t, const AtmosphericLight& A) {
    require_same_size(J, t, "apply_scattering");
    A.validate();
    ImageBuffer I(J.width, J.height);
    for (size_t i = 0; i < t.size(); ++i) {
        double tr = t.data[i];
        if (!(tr > 0.0) || tr > 1.0)
            throw std::invalid_argument("apply_scattering: transmission must be in (0,1]");
        for (int c = 0; c < 3; ++c)
            I.data[i * 3 + c] = tr * J.data[i * 3 + c] + (1.0 - tr) * A[c];
    }
    return I;
}

ImageBuffer invert_scattering(const ImageBuffer& I, const ScalarMap& t, const AtmosphericLight& A,
                              double t_floor) {
    require_same_size(I, t, "invert_scattering");
    A.validate();
    if (!(t_floor > 0.0) || t_floor > 1.0)
        throw std::invalid_argument("invert_scattering: t_floor must be in (0,1]");
    ImageBuffer J(I.width, I.height);
    for (size_t i = 0; i < t.size(); ++i) {
        double tr = std::max(t.data[i], t_floor);
        for (int c = 0; c < 3; ++c) {
            double v = (I.data[i * 3 + c] - A[c]) / tr + A[c];
            J.data[i * 3 + c] = std::clamp(v, 0.0, 1.0);
        }
    }
    return J;
}

std::vector<ImageBuffer> corrupt_levels(const ImageBuffer& J, const ScalarMap& depth,
                                        const AtmosphericLight& A,
                                        const std::vector<CorruptionSpec>& levels) {
    require_same_size(J, depth, "corrupt_levels");
    for (size_t k = 1; k < levels.size(); ++k)
        if (!(nominal_beta(levels[k]) > nominal_beta(levels[k - 1])))
            throw std::invalid_argument("corrupt_levels: levels must be strictly increasing in beta");

    std::vector<ImageBuffer> out;
    out.reserve(levels.size());
    for (const CorruptionSpec& spec : levels) {
        ScalarMap t = transmission_for(depth, spec);
        out.push_back(apply_scattering(J, t, A));
    }
    return out;
}

const std::vector<double>& default_beta_ladder() {
    static const std::vector<double> ladder = {0.05, 0.10, 0.20, 0.30, 0.45,
                                               0.60, 0.80, 1.00, 1.30, 1.60};
    return ladder;
}

AtmosphericLight default_haze_airlight() { return {0.85, 0.85, 0.85}; }

AtmosphericLight default_smoke_airlight() { return {0.70, 0.68, 0.66}; }

}  // namespace gdh
