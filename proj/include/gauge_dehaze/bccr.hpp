#pragma once

#include <array>
#include <vector>

#include "gauge_dehaze/dcp.hpp"
#include "gauge_dehaze/image.hpp"
#include "gauge_dehaze/scatter.hpp"

namespace gdh {

struct BccrParams {
    std::array<double, 3> c0 = {0.08, 0.08, 0.08};  // radiance cube lower bound
    std::array<double, 3> c1 = {0.95, 0.95, 0.95};  // radiance cube upper bound
    int patch_radius = 3;         // boundary closing window
    double lambda = 2.0;          // data-fidelity weight
    double sigma = 0.5;           // edge-weight bandwidth
    int outer_iters = 8;
    double penalty_init = 1.0;
    double penalty_growth = 2.8284271247461903;  // 2*sqrt(2)
    double t_floor = 0.05;
    int solver_pad = 16;          // reflect padding around the FFT solve

    void validate() const;
};

// Small differencing kernel as (dx, dy, weight) taps; every kernel in the
// bank sums to zero so constants are annihilated.
struct DiffKernel {
    struct Tap {
        int dx;
        int dy;
        double w;
    };
    std::vector<Tap> taps;
};

using OperatorBank = std::vector<DiffKernel>;

// Horizontal, vertical and two diagonal first-order differences plus their
// four second-order variants.
const OperatorBank& default_operator_bank();

// Per-pixel transmission lower bound from requiring recovered radiance inside
// [c0, c1], clamped to [t_floor, 1], then dilated by patch_radius.
ScalarMap boundary_transmission(const ImageBuffer& I, const AtmosphericLight& A,
                                const BccrParams& params);

// W_j(x) = exp(-|(D_j * I)(x)|^2 / (2 sigma^2)), channel squared differences
// summed; replicate borders.
std::vector<ScalarMap> contextual_weights(const ImageBuffer& I, const OperatorBank& bank,
                                          double sigma);

// Per-outer-iteration snapshots on the solver's working (padded) domain,
// including the initial iterate; exposed so tests can audit the objective.
struct SolveTrace {
    ScalarMap t_b;                    // working-domain data term target
    std::vector<ScalarMap> weights;   // working-domain weights
    std::vector<ScalarMap> iterates;  // t_0 (init), t_1, ..., t_outer_iters
};

// Soft shrinkage toward zero: |result| <= |v| and sign(result) is 0 or
// sign(v). The per-pixel update for the split variables.
double soft_shrink(double v, double threshold);

// Half-quadratic splitting for
//   min_t lambda/2 |t - t_b|^2 + sum_j |W_j o (D_j * t)|_1
// alternating per-pixel shrinkage with an FFT solve under periodic boundary
// handling. An iterate is kept only if the exact objective does not increase,
// so the objective is non-increasing across outer iterations. Final result is
// clamped to [t_floor, 1]. Throws std::runtime_error if NaNs appear.
ScalarMap optimize_transmission(const ScalarMap& t_b, const std::vector<ScalarMap>& weights,
                                const OperatorBank& bank, const BccrParams& params,
                                SolveTrace* trace = nullptr);

// Airlight estimation is shared with the DCP module so the two baselines see
// the same A.
DehazeResult dehaze_bccr(const ImageBuffer& I, const BccrParams& params = {});

}  // namespace gdh
