#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gauge_dehaze/bccr.hpp"
#include "gauge_dehaze/codec.hpp"
#include "gauge_dehaze/dcp.hpp"
#include "gauge_dehaze/metrics.hpp"
#include "gauge_dehaze/scatter.hpp"
#include "gauge_dehaze/scenegen.hpp"

namespace py = pybind11;
using namespace gdh;

namespace {

ImageBuffer image_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3)
        throw py::value_error("expected an (H, W, 3) array");
    ImageBuffer img(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::copy(arr.data(), arr.data() + arr.size(), img.data.begin());
    return img;
}

py::array_t<double> image_to_array(const ImageBuffer& img) {
    py::array_t<double> arr({img.height, img.width, 3});
    std::copy(img.data.begin(), img.data.end(), arr.mutable_data());
    return arr;
}

ScalarMap map_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected an (H, W) array");
    ScalarMap m(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::copy(arr.data(), arr.data() + arr.size(), m.data.begin());
    return m;
}

py::array_t<double> map_to_array(const ScalarMap& m) {
    py::array_t<double> arr({m.height, m.width});
    std::copy(m.data.begin(), m.data.end(), arr.mutable_data());
    return arr;
}

AtmosphericLight airlight_from_tuple(const std::array<double, 3>& a) {
    AtmosphericLight A{a[0], a[1], a[2]};
    A.validate();
    return A;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Synthetic analog-gauge dehazing toolkit";

    py::class_<GaugeSceneSpec>(m, "GaugeSceneSpec")
        .def(py::init<>())
        .def_readwrite("seed", &GaugeSceneSpec::seed)
        .def_readwrite("needle_angle", &GaugeSceneSpec::needle_angle)
        .def_readwrite("sweep_start", &GaugeSceneSpec::sweep_start)
        .def_readwrite("sweep_end", &GaugeSceneSpec::sweep_end)
        .def_readwrite("tick_count", &GaugeSceneSpec::tick_count)
        .def_readwrite("scale_min", &GaugeSceneSpec::scale_min)
        .def_readwrite("scale_max", &GaugeSceneSpec::scale_max)
        .def_readwrite("camera_distance", &GaugeSceneSpec::camera_distance)
        .def_readwrite("camera_yaw", &GaugeSceneSpec::camera_yaw)
        .def_readwrite("background_brightness", &GaugeSceneSpec::background_brightness)
        .def_readwrite("gauge_radius_px", &GaugeSceneSpec::gauge_radius_px);

    m.def("random_scene", &random_scene, py::arg("seed"));
    m.def(
        "render_gauge",
        [](const GaugeSceneSpec& spec, int width, int height) {
            RenderResult rr = render_gauge(spec, width, height);
            return py::make_tuple(image_to_array(rr.image), map_to_array(rr.depth));
        },
        py::arg("spec"), py::arg("width") = 256, py::arg("height") = 256,
        "Render a clear gauge scene; returns (image, depth).");

    m.def(
        "transmission_from_depth",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& depth,
           double beta) {
            return map_to_array(transmission_from_depth(map_from_array(depth), HazeSpec{beta}));
        },
        py::arg("depth"), py::arg("beta"));
    m.def(
        "smoke_transmission",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& depth,
           double base_beta, int octaves, double lacunarity, double gain, double density_scale,
           uint64_t seed) {
            SmokeSpec s;
            s.base_beta = base_beta;
            s.octaves = octaves;
            s.lacunarity = lacunarity;
            s.gain = gain;
            s.density_scale = density_scale;
            s.seed = seed;
            return map_to_array(smoke_transmission(map_from_array(depth), s));
        },
        py::arg("depth"), py::arg("base_beta"), py::arg("octaves") = 4,
        py::arg("lacunarity") = 2.0, py::arg("gain") = 0.5, py::arg("density_scale") = 1.0,
        py::arg("seed") = 0);

    m.def(
        "apply_scattering",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& j,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& t,
           const std::array<double, 3>& airlight) {
            return image_to_array(
                apply_scattering(image_from_array(j), map_from_array(t),
                                 airlight_from_tuple(airlight)));
        },
        py::arg("radiance"), py::arg("transmission"), py::arg("airlight"));
    m.def(
        "invert_scattering",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& i,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& t,
           const std::array<double, 3>& airlight, double t_floor) {
            return image_to_array(
                invert_scattering(image_from_array(i), map_from_array(t),
                                  airlight_from_tuple(airlight), t_floor));
        },
        py::arg("observed"), py::arg("transmission"), py::arg("airlight"),
        py::arg("t_floor") = 0.05);

    py::class_<DcpParams>(m, "DcpParams")
        .def(py::init<>())
        .def_readwrite("patch_radius", &DcpParams::patch_radius)
        .def_readwrite("omega", &DcpParams::omega)
        .def_readwrite("airlight_fraction", &DcpParams::airlight_fraction)
        .def_readwrite("t_floor", &DcpParams::t_floor)
        .def_readwrite("guided_radius", &DcpParams::guided_radius)
        .def_readwrite("guided_eps", &DcpParams::guided_eps);

    py::class_<BccrParams>(m, "BccrParams")
        .def(py::init<>())
        .def_readwrite("c0", &BccrParams::c0)
        .def_readwrite("c1", &BccrParams::c1)
        .def_readwrite("patch_radius", &BccrParams::patch_radius)
        .def_readwrite("lambda_", &BccrParams::lambda)
        .def_readwrite("sigma", &BccrParams::sigma)
        .def_readwrite("outer_iters", &BccrParams::outer_iters)
        .def_readwrite("penalty_init", &BccrParams::penalty_init)
        .def_readwrite("penalty_growth", &BccrParams::penalty_growth)
        .def_readwrite("t_floor", &BccrParams::t_floor)
        .def_readwrite("solver_pad", &BccrParams::solver_pad);

    m.def(
        "dehaze_dcp",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& i,
           const DcpParams& params) {
            DehazeResult r = dehaze_dcp(image_from_array(i), params);
            return py::make_tuple(image_to_array(r.image), map_to_array(r.transmission),
                                  std::array<double, 3>{r.airlight.r, r.airlight.g, r.airlight.b});
        },
        py::arg("image"), py::arg("params") = DcpParams{},
        "Dark-channel-prior restoration; returns (restored, transmission, airlight).");
    m.def(
        "dehaze_bccr",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& i,
           const BccrParams& params) {
            DehazeResult r = dehaze_bccr(image_from_array(i), params);
            return py::make_tuple(image_to_array(r.image), map_to_array(r.transmission),
                                  std::array<double, 3>{r.airlight.r, r.airlight.g, r.airlight.b});
        },
        py::arg("image"), py::arg("params") = BccrParams{},
        "Boundary-constrained contextual-regularization restoration.");

    py::class_<MetricParams>(m, "MetricParams")
        .def(py::init<>())
        .def_readwrite("max_value", &MetricParams::max_value)
        .def_readwrite("k1", &MetricParams::k1)
        .def_readwrite("k2", &MetricParams::k2)
        .def_readwrite("window_radius", &MetricParams::window_radius)
        .def_readwrite("window_sigma", &MetricParams::window_sigma)
        .def_readwrite("psnr_cap_db", &MetricParams::psnr_cap_db)
        .def_readwrite("raw_c_constants", &MetricParams::raw_c_constants)
        .def_readwrite("per_channel_ssim", &MetricParams::per_channel_ssim);

    m.def(
        "mse",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
            return mse(image_from_array(a), image_from_array(b));
        },
        py::arg("gt"), py::arg("out"));
    m.def(
        "psnr",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b,
           const MetricParams& params) {
            PsnrResult r = psnr(image_from_array(a), image_from_array(b), params);
            return py::make_tuple(r.db, r.exact);
        },
        py::arg("gt"), py::arg("out"), py::arg("params") = MetricParams{},
        "Returns (psnr_db, exact_match).");
    m.def(
        "ssim_global",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b,
           const MetricParams& params) {
            return ssim_global(image_from_array(a), image_from_array(b), params);
        },
        py::arg("gt"), py::arg("out"), py::arg("params") = MetricParams{});
    m.def(
        "ssim_windowed",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<double, py::array::c_style | py::array::forcecast>& b,
           const MetricParams& params) {
            return ssim_windowed(image_from_array(a), image_from_array(b), params);
        },
        py::arg("gt"), py::arg("out"), py::arg("params") = MetricParams{});

    m.def(
        "load_image", [](const std::string& path) { return image_to_array(load_image(path)); },
        py::arg("path"));
    m.def(
        "save_image",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& img,
           const std::string& path) { save_image(image_from_array(img), path); },
        py::arg("image"), py::arg("path"));
    m.def(
        "load_scalar_f32",
        [](const std::string& path) { return map_to_array(load_scalar_f32(path)); },
        py::arg("path"));
    m.def(
        "save_scalar_f32",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& map,
           const std::string& path) { save_scalar_f32(map_from_array(map), path); },
        py::arg("map"), py::arg("path"));

    m.def("default_beta_ladder", [] { return default_beta_ladder(); });
    m.def("default_haze_airlight", [] {
        AtmosphericLight a = default_haze_airlight();
        return std::array<double, 3>{a.r, a.g, a.b};
    });
    m.def("default_smoke_airlight", [] {
        AtmosphericLight a = default_smoke_airlight();
        return std::array<double, 3>{a.r, a.g, a.b};
    });

    m.attr("__version__") = "0.1.0";
}
