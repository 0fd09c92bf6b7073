#include "gauge_dehaze/scenegen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gauge_dehaze/rng.hpp"

namespace gdh {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rgb {
    double r, g, b;
};

// Dial geometry is evaluated in offsets from the image center so that a
// symmetric sweep renders mirror-exact pixel sets: the sign of every angular
// quantity is factored out before sin/cos and only flips dx-linear terms, and
// all other primitives (radii, pegboard cells, the arc band) are even in dx.
struct Segment {
    double ux, uy;   // unit direction from the dial center
    double r0, r1;   // extent along the direction
    double half_w;   // half width in pixels
};

// Direction for a signed angular offset from the vertical bisector, positive
// clockwise. sin/cos see only the magnitude, so mirrored offsets produce
// exactly negated x components.
void direction_from_offset(double offset_deg, double& ux, double& uy) {
    double a = std::abs(offset_deg) * (kPi / 180.0);
    double s = std::sin(a);
    double c = std::cos(a);
    ux = offset_deg < 0 ? -s : s;
    uy = -c;  // image y grows downward, bisector points up
}

double segment_dist_sq(double px, double py, const Segment& seg) {
    double dot = px * seg.ux + py * seg.uy;
    double s = std::clamp(dot, seg.r0, seg.r1);
    double u2 = seg.ux * seg.ux + seg.uy * seg.uy;
    return px * px + py * py - 2.0 * s * dot + s * s * u2;
}

struct DialLayout {
    double cos_yaw;
    double radius;       // bezel outer radius, pixels
    double face_radius;  // dial face radius
    double half_diag_sq;

    // pegboard wall behind the gauge
    double peg_spacing;
    double peg_radius_sq;

    // dial furniture
    double arc_r_lo, arc_r_hi;  // printed scale arc annulus
    double cos_half_sweep;
    double tick_r_lo, tick_r_hi;
    double label_r_lo, label_r_hi;
    double logo_y, logo_half_len, logo_half_w;
    double hub_radius_sq;
    double needle_reach;

    Rgb face_base, bezel, ink, hub, needle, hole;

    std::vector<Segment> ticks;   // majors, minors and label dashes
    Segment needle_seg;
};

DialLayout make_layout(const GaugeSceneSpec& spec, int width, int height) {
    DialLayout lay;
    lay.cos_yaw = std::cos(std::abs(spec.camera_yaw) * (kPi / 180.0));
    double scale = std::min(width, height) / 256.0;
    lay.radius = spec.gauge_radius_px * scale;
    lay.face_radius = 0.86 * lay.radius;
    lay.half_diag_sq =
        0.25 * (static_cast<double>(width) * width + static_cast<double>(height) * height);

    lay.peg_spacing = 12.0 * scale;
    double peg_r = std::max(1.1, 1.9 * scale);
    lay.peg_radius_sq = peg_r * peg_r;

    // matte-black housing and dial with light markings; the true-black face,
    // bezel and holes put a zero inside every dark-channel patch, which is
    // exactly the regime the classical priors assume
    lay.face_base = {0.0, 0.0, 0.0};
    lay.bezel = {0.0, 0.0, 0.0};
    lay.ink = {0.92, 0.92, 0.90};
    lay.hub = {0.78, 0.78, 0.80};
    lay.needle = {0.85, 0.13, 0.11};
    lay.hole = {0.0, 0.0, 0.0};

    double fr = lay.face_radius;
    double half_sweep = 0.5 * (spec.sweep_end - spec.sweep_start);
    double bisector = 0.5 * (spec.sweep_start + spec.sweep_end);

    lay.arc_r_lo = 0.955 * fr;
    lay.arc_r_hi = 0.985 * fr;
    lay.cos_half_sweep = std::cos(half_sweep * (kPi / 180.0));

    lay.tick_r_lo = 0.80 * fr;
    lay.tick_r_hi = 0.95 * fr;
    lay.label_r_lo = 0.64 * fr;
    lay.label_r_hi = 0.71 * fr;
    lay.logo_y = 0.40 * fr;
    lay.logo_half_len = 0.085 * fr;
    lay.logo_half_w = std::max(0.8, 0.012 * lay.radius);
    double hub_r = 0.075 * fr;
    lay.hub_radius_sq = hub_r * hub_r;

    int n = spec.tick_count;
    double major_w = std::max(0.9, 0.016 * lay.radius);
    double minor_w = std::max(0.55, 0.008 * lay.radius);
    double label_w = std::max(0.8, 0.013 * lay.radius);

    // every angular offset is (integer) * (half_sweep / subdivisions), so a
    // mirrored position negates the integer and the offset exactly
    const int kMinorsPerGap = 5;
    int subdivisions = kMinorsPerGap * (n - 1);
    for (int p = 0; p <= subdivisions; ++p) {
        int m = 2 * p - subdivisions;
        double offset = m * (half_sweep / subdivisions);
        bool is_major = (p % kMinorsPerGap) == 0;

        Segment seg;
        direction_from_offset(offset, seg.ux, seg.uy);
        seg.r0 = is_major ? lay.tick_r_lo : 0.885 * fr;
        seg.r1 = lay.tick_r_hi;
        seg.half_w = is_major ? major_w : minor_w;
        lay.ticks.push_back(seg);

        if (is_major) {
            Segment dash;
            dash.ux = seg.ux;
            dash.uy = seg.uy;
            dash.r0 = lay.label_r_lo;
            dash.r1 = lay.label_r_hi;
            dash.half_w = label_w;
            lay.ticks.push_back(dash);
        }
    }

    Segment ns;
    direction_from_offset(spec.needle_angle - bisector, ns.ux, ns.uy);
    ns.r0 = -0.22 * fr;  // counterweight tail
    ns.r1 = 0.78 * fr;
    ns.half_w = std::max(1.0, 0.016 * lay.radius);
    lay.needle_seg = ns;
    lay.needle_reach = ns.r1 + ns.half_w;
    return lay;
}

// squared distance (in cells) to the nearest pegboard hole center; centers
// sit at half-integer grid positions so the grid is symmetric about dx = 0
double peg_cell_dist_sq(double u, double v) {
    double tu = u - std::floor(u);
    double tv = v - std::floor(v);
    double du = std::abs(tu - 0.5);
    double dv = std::abs(tv - 0.5);
    return du * du + dv * dv;
}

Rgb shade_sample(const GaugeSceneSpec& spec, const DialLayout& lay, double dx, double dy) {
    double img_r_sq = dx * dx + dy * dy;
    double vignette = 1.0 - 0.18 * (img_r_sq / lay.half_diag_sq);
    double bg = spec.background_brightness * vignette;
    Rgb color = {bg, bg * 0.99, bg * 0.97};

    // pegboard holes on the wall
    double cell = peg_cell_dist_sq(dx / lay.peg_spacing, dy / lay.peg_spacing);
    if (cell * lay.peg_spacing * lay.peg_spacing <= lay.peg_radius_sq) color = lay.hole;

    // dial-plane coordinates undo the yaw foreshortening
    double px = dx / lay.cos_yaw;
    double py = dy;
    double r_sq = px * px + py * py;

    if (r_sq <= lay.radius * lay.radius) {
        double fr = lay.face_radius;
        double r = std::sqrt(r_sq);
        color = r_sq <= fr * fr ? lay.face_base : lay.bezel;

        // rim ring separating the housing from the dial face
        if (std::abs(r - fr) <= std::max(1.0, 0.012 * lay.radius)) color = lay.ink;

        if (r_sq <= fr * fr) {
            // printed scale arc, chopped at the sweep limits
            if (r >= lay.arc_r_lo && r <= lay.arc_r_hi && -py >= r * lay.cos_half_sweep)
                color = lay.ink;

            if (r >= lay.label_r_lo - 2.0 && r <= lay.tick_r_hi + 2.0) {
                for (const Segment& t : lay.ticks) {
                    if (segment_dist_sq(px, py, t) <= t.half_w * t.half_w) {
                        color = lay.ink;
                        break;
                    }
                }
            }

            // maker's mark below the hub
            if (std::abs(px) <= lay.logo_half_len && std::abs(py - lay.logo_y) <= lay.logo_half_w)
                color = lay.ink;

            if (r <= lay.needle_reach) {
                const Segment& n = lay.needle_seg;
                if (segment_dist_sq(px, py, n) <= n.half_w * n.half_w) color = lay.needle;
            }
            if (r_sq <= lay.hub_radius_sq) color = lay.hub;
        }
    }
    return color;
}

}  // namespace

void GaugeSceneSpec::validate() const {
    if (!(sweep_end > sweep_start) || sweep_end - sweep_start >= 360.0)
        throw std::invalid_argument("dial sweep must satisfy start < end, width < 360");
    if (needle_angle < sweep_start || needle_angle > sweep_end)
        throw std::invalid_argument("needle_angle outside dial sweep");
    if (tick_count < 2) throw std::invalid_argument("tick_count must be >= 2");
    if (!(scale_max > scale_min)) throw std::invalid_argument("scale range must be increasing");
    if (camera_distance < 0.5 || camera_distance > 10.0)
        throw std::invalid_argument("camera_distance must be in [0.5, 10] meters");
    if (std::abs(camera_yaw) > 60.0) throw std::invalid_argument("camera_yaw must be in [-60, 60]");
    if (background_brightness < 0.0 || background_brightness > 1.0)
        throw std::invalid_argument("background_brightness must be in [0,1]");
    if (gauge_radius_px < 16.0 || gauge_radius_px > 128.0)
        throw std::invalid_argument("gauge_radius_px must be in [16, 128]");
}

RenderResult render_gauge(const GaugeSceneSpec& spec, int width, int height) {
    spec.validate();
    if (width < 64 || height < 64)
        throw std::invalid_argument("render size must be at least 64x64");

    DialLayout lay = make_layout(spec, width, height);
    double cx = width / 2.0;
    double cy = height / 2.0;

    RenderResult out{ImageBuffer(width, height), ScalarMap(width, height)};

    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            // 2x2 supersampling; vertical pairs are summed first so that a
            // horizontal mirror reduces to one commutative addition.
            Rgb cols[2];
            for (int sx = 0; sx < 2; ++sx) {
                double fx = x + 0.25 + 0.5 * sx;
                Rgb acc{0, 0, 0};
                for (int sy = 0; sy < 2; ++sy) {
                    double fy = y + 0.25 + 0.5 * sy;
                    Rgb c = shade_sample(spec, lay, fx - cx, fy - cy);
                    acc.r += c.r;
                    acc.g += c.g;
                    acc.b += c.b;
                }
                cols[sx] = acc;
            }
            out.image.at(x, y, 0) = 0.25 * (cols[0].r + cols[1].r);
            out.image.at(x, y, 1) = 0.25 * (cols[0].g + cols[1].g);
            out.image.at(x, y, 2) = 0.25 * (cols[0].b + cols[1].b);

            // depth: flat gauge body, receding wall toward the borders
            double dx = (x + 0.5 - cx) / lay.cos_yaw;
            double dy = y + 0.5 - cy;
            double r = std::sqrt(dx * dx + dy * dy);
            if (r <= lay.radius) {
                out.depth.at(x, y) = spec.camera_distance;
            } else {
                double half_diag = std::sqrt(lay.half_diag_sq);
                double m = std::clamp((r - lay.radius) / (half_diag - lay.radius), 0.0, 1.0);
                double s = m * m * (3.0 - 2.0 * m);
                out.depth.at(x, y) = spec.camera_distance * (1.0 + 0.2 * s);
            }
        }
    }
    return out;
}

GaugeSceneSpec random_scene(uint64_t seed) {
    Rng rng(derive_seed(seed, 0x5ce2e));
    GaugeSceneSpec spec;
    spec.seed = seed;
    double sweep_width = rng.uniform(180.0, 280.0);
    spec.sweep_start = -0.5 * sweep_width;
    spec.sweep_end = 0.5 * sweep_width;
    spec.needle_angle = rng.uniform(spec.sweep_start, spec.sweep_end);
    spec.tick_count = rng.uniform_int(7, 13);
    spec.scale_min = std::floor(rng.uniform(0.0, 50.0));
    spec.scale_max = spec.scale_min + std::floor(rng.uniform(50.0, 200.0));
    // transmissions stay workable across the whole beta ladder at this range
    spec.camera_distance = rng.uniform(0.8, 2.2);
    spec.camera_yaw = rng.uniform(-25.0, 25.0);
    spec.background_brightness = rng.uniform(0.35, 0.80);
    spec.gauge_radius_px = rng.uniform(78.0, 108.0);
    return spec;
}

}  // namespace gdh
