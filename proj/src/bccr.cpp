#include "gauge_dehaze/bccr.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "gauge_dehaze/filters.hpp"

namespace gdh {

void BccrParams::validate() const {
    for (int c = 0; c < 3; ++c) {
        if (!(c0[c] >= 0.0) || !(c0[c] < c1[c]) || !(c1[c] <= 1.0))
            throw std::invalid_argument("radiance bounds must satisfy 0 <= C0 < C1 <= 1");
    }
    if (patch_radius < 0) throw std::invalid_argument("patch_radius must be >= 0");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    if (outer_iters < 1) throw std::invalid_argument("outer_iters must be >= 1");
    if (!(penalty_init > 0.0)) throw std::invalid_argument("penalty_init must be > 0");
    if (!(penalty_growth > 1.0)) throw std::invalid_argument("penalty_growth must be > 1");
    if (!(t_floor > 0.0) || t_floor > 1.0) throw std::invalid_argument("t_floor must be in (0,1]");
    if (solver_pad < 0) throw std::invalid_argument("solver_pad must be >= 0");
}

const OperatorBank& default_operator_bank() {
    static const OperatorBank bank = {
        // first-order differences
        {{{0, 0, -1.0}, {1, 0, 1.0}}},
        {{{0, 0, -1.0}, {0, 1, 1.0}}},
        {{{0, 0, -1.0}, {1, 1, 1.0}}},
        {{{0, 0, -1.0}, {1, -1, 1.0}}},
        // second-order variants
        {{{-1, 0, 1.0}, {0, 0, -2.0}, {1, 0, 1.0}}},
        {{{0, -1, 1.0}, {0, 0, -2.0}, {0, 1, 1.0}}},
        {{{-1, -1, 1.0}, {0, 0, -2.0}, {1, 1, 1.0}}},
        {{{1, -1, 1.0}, {0, 0, -2.0}, {-1, 1, 1.0}}},
    };
    return bank;
}

ScalarMap boundary_transmission(const ImageBuffer& I, const AtmosphericLight& A,
                                const BccrParams& params) {
    params.validate();
    A.validate();
    for (int c = 0; c < 3; ++c) {
        if (std::abs(A[c] - params.c0[c]) < 1e-9 || std::abs(A[c] - params.c1[c]) < 1e-9)
            throw std::invalid_argument("airlight coincides with a radiance bound");
    }

    ScalarMap t(I.width, I.height);
    for (size_t i = 0; i < t.size(); ++i) {
        double bound = 1.0;
        for (int c = 0; c < 3; ++c) {
            double num = A[c] - I.data[i * 3 + c];
            double lo = num / (A[c] - params.c0[c]);
            double hi = num / (A[c] - params.c1[c]);
            bound = std::min(bound, std::max(lo, hi));
        }
        t.data[i] = std::clamp(bound, params.t_floor, 1.0);
    }
    return max_filter(t, params.patch_radius);
}

std::vector<ScalarMap> contextual_weights(const ImageBuffer& I, const OperatorBank& bank,
                                          double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be > 0");
    std::vector<ScalarMap> weights;
    weights.reserve(bank.size());
    double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);

    for (const DiffKernel& k : bank) {
        ScalarMap w(I.width, I.height);
        for (int y = 0; y < I.height; ++y) {
            for (int x = 0; x < I.width; ++x) {
                double mag_sq = 0.0;
                for (int c = 0; c < 3; ++c) {
                    double acc = 0.0;
                    for (const auto& tap : k.taps) {
                        int sx = std::clamp(x + tap.dx, 0, I.width - 1);
                        int sy = std::clamp(y + tap.dy, 0, I.height - 1);
                        acc += tap.w * I.at(sx, sy, c);
                    }
                    mag_sq += acc * acc;
                }
                w.at(x, y) = std::exp(-mag_sq * inv_two_sigma_sq);
            }
        }
        weights.push_back(std::move(w));
    }
    return weights;
}

namespace {

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// r2c/c2r pair for one working size; plan creation is serialized (FFTW's
// planner is not thread-safe), execution is not.
class Fft2D {
public:
    Fft2D(int height, int width)
        : h_(height), w_(width), wc_(width / 2 + 1),
          real_(static_cast<size_t>(height) * width),
          cplx_(static_cast<size_t>(height) * (width / 2 + 1)) {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fwd_ = fftw_plan_dft_r2c_2d(h_, w_, real_.data(),
                                    reinterpret_cast<fftw_complex*>(cplx_.data()), FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_2d(h_, w_, reinterpret_cast<fftw_complex*>(cplx_.data()),
                                    real_.data(), FFTW_ESTIMATE);
        if (!fwd_ || !inv_) throw std::runtime_error("fftw plan creation failed");
    }

    ~Fft2D() {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
    }

    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    std::vector<std::complex<double>> forward(const std::vector<double>& src) {
        std::copy(src.begin(), src.end(), real_.begin());
        fftw_execute(fwd_);
        return cplx_;
    }

    // destroys the spectrum argument's aliasing; output scaled by 1/(h*w)
    std::vector<double> inverse(const std::vector<std::complex<double>>& spec) {
        std::copy(spec.begin(), spec.end(), cplx_.begin());
        fftw_execute(inv_);
        std::vector<double> out(real_);
        double scale = 1.0 / (static_cast<double>(h_) * w_);
        for (double& v : out) v *= scale;
        return out;
    }

    size_t spectrum_size() const { return cplx_.size(); }

private:
    int h_, w_, wc_;
    std::vector<double> real_;
    std::vector<std::complex<double>> cplx_;
    fftw_plan fwd_ = nullptr;
    fftw_plan inv_ = nullptr;
};

int reflect101(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

ScalarMap reflect_pad(const ScalarMap& m, int pad) {
    if (pad == 0) return m;
    ScalarMap out(m.width + 2 * pad, m.height + 2 * pad);
    for (int y = 0; y < out.height; ++y) {
        int sy = reflect101(y - pad, m.height);
        for (int x = 0; x < out.width; ++x) out.at(x, y) = m.at(reflect101(x - pad, m.width), sy);
    }
    return out;
}

ScalarMap crop(const ScalarMap& m, int pad, int width, int height) {
    if (pad == 0) return m;
    ScalarMap out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) out.at(x, y) = m.at(x + pad, y + pad);
    return out;
}

// circular convolution with a small tap kernel
void conv_circular(const std::vector<double>& src, int w, int h, const DiffKernel& k,
                   std::vector<double>& dst) {
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (const auto& tap : k.taps) {
                int sx = x + tap.dx;
                int sy = y + tap.dy;
                if (sx < 0) sx += w;
                if (sx >= w) sx -= w;
                if (sy < 0) sy += h;
                if (sy >= h) sy -= h;
                acc += tap.w * src[static_cast<size_t>(sy) * w + sx];
            }
            dst[static_cast<size_t>(y) * w + x] = acc;
        }
    }
}

// exact objective lambda/2 |t-t_b|^2 + sum_j |W_j o (D_j * t)|_1 under the
// solver's periodic boundary convention
double exact_objective(const std::vector<double>& t, const std::vector<double>& t_b,
                       const std::vector<std::vector<double>>& weights, int w, int h,
                       const OperatorBank& bank, double lambda) {
    double data = 0.0;
    for (size_t i = 0; i < t.size(); ++i) {
        double d = t[i] - t_b[i];
        data += d * d;
    }
    double reg = 0.0;
    std::vector<double> buf(t.size());
    for (size_t j = 0; j < bank.size(); ++j) {
        conv_circular(t, w, h, bank[j], buf);
        for (size_t i = 0; i < buf.size(); ++i) reg += weights[j][i] * std::abs(buf[i]);
    }
    return 0.5 * lambda * data + reg;
}

}  // namespace

double soft_shrink(double v, double threshold) {
    if (v > threshold) return v - threshold;
    if (v < -threshold) return v + threshold;
    return 0.0;
}

ScalarMap optimize_transmission(const ScalarMap& t_b, const std::vector<ScalarMap>& weights,
                                const OperatorBank& bank, const BccrParams& params,
                                SolveTrace* trace) {
    params.validate();
    if (weights.size() != bank.size())
        throw std::invalid_argument("one weight map per operator is required");
    for (const ScalarMap& w : weights) require_same_size(t_b, w, "optimize_transmission");

    int pad = std::min({params.solver_pad, t_b.height - 1, t_b.width - 1});
    ScalarMap tb_work = reflect_pad(t_b, pad);
    int w = tb_work.width, h = tb_work.height;
    size_t n = tb_work.size();

    std::vector<std::vector<double>> ws(bank.size());
    for (size_t j = 0; j < bank.size(); ++j) ws[j] = reflect_pad(weights[j], pad).data;

    Fft2D fft(h, w);

    // kernel spectra from circular embedding
    std::vector<std::vector<std::complex<double>>> kernel_spec(bank.size());
    std::vector<double> embed(n);
    for (size_t j = 0; j < bank.size(); ++j) {
        std::fill(embed.begin(), embed.end(), 0.0);
        for (const auto& tap : bank[j].taps) {
            int x = ((tap.dx % w) + w) % w;
            int y = ((tap.dy % h) + h) % h;
            embed[static_cast<size_t>(y) * w + x] += tap.w;
        }
        kernel_spec[j] = fft.forward(embed);
    }
    std::vector<double> kernel_power(fft.spectrum_size(), 0.0);
    for (size_t j = 0; j < bank.size(); ++j)
        for (size_t i = 0; i < kernel_power.size(); ++i)
            kernel_power[i] += std::norm(kernel_spec[j][i]);

    std::vector<std::complex<double>> tb_hat = fft.forward(tb_work.data);

    std::vector<double> t_cur = tb_work.data;
    double obj_cur = exact_objective(t_cur, tb_work.data, ws, w, h, bank, params.lambda);

    if (trace) {
        trace->t_b = tb_work;
        trace->weights.clear();
        for (const auto& wj : ws) {
            ScalarMap m(w, h);
            m.data = wj;
            trace->weights.push_back(std::move(m));
        }
        ScalarMap init(w, h);
        init.data = t_cur;
        trace->iterates = {std::move(init)};
    }

    std::vector<double> diff(n), u(n);
    std::vector<std::complex<double>> rhs(fft.spectrum_size());
    double rho = params.penalty_init;

    for (int iter = 0; iter < params.outer_iters; ++iter, rho *= params.penalty_growth) {
        std::fill(rhs.begin(), rhs.end(), std::complex<double>(0.0, 0.0));
        for (size_t j = 0; j < bank.size(); ++j) {
            conv_circular(t_cur, w, h, bank[j], diff);
            for (size_t i = 0; i < n; ++i) u[i] = soft_shrink(diff[i], ws[j][i] / rho);
            std::vector<std::complex<double>> u_hat = fft.forward(u);
            for (size_t i = 0; i < rhs.size(); ++i)
                rhs[i] += std::conj(kernel_spec[j][i]) * u_hat[i];
        }
        for (size_t i = 0; i < rhs.size(); ++i) {
            rhs[i] = (params.lambda * tb_hat[i] + rho * rhs[i]) /
                     (params.lambda + rho * kernel_power[i]);
        }
        std::vector<double> t_next = fft.inverse(rhs);

        for (double v : t_next)
            if (!std::isfinite(v))
                throw std::runtime_error("bccr solver produced a non-finite iterate");

        // keep the iterate only when the exact objective does not increase
        double obj_next = exact_objective(t_next, tb_work.data, ws, w, h, bank, params.lambda);
        if (obj_next <= obj_cur) {
            t_cur = std::move(t_next);
            obj_cur = obj_next;
        }
        if (trace) {
            ScalarMap snap(w, h);
            snap.data = t_cur;
            trace->iterates.push_back(std::move(snap));
        }
    }

    ScalarMap result(w, h);
    result.data = std::move(t_cur);
    ScalarMap cropped = crop(result, pad, t_b.width, t_b.height);
    for (double& v : cropped.data) v = std::clamp(v, params.t_floor, 1.0);
    return cropped;
}

DehazeResult dehaze_bccr(const ImageBuffer& I, const BccrParams& params) {
    params.validate();
    DcpParams shared;  // airlight estimation shared with the DCP baseline
    ScalarMap dark = dark_channel(I, shared.patch_radius);
    AtmosphericLight A = estimate_airlight(I, dark, shared.airlight_fraction);

    ScalarMap t_b = boundary_transmission(I, A, params);
    const OperatorBank& bank = default_operator_bank();
    std::vector<ScalarMap> weights = contextual_weights(I, bank, params.sigma);
    ScalarMap t = optimize_transmission(t_b, weights, bank, params);
    ImageBuffer restored = invert_scattering(I, t, A, params.t_floor);
    return {std::move(restored), std::move(t), A};
}

}  // namespace gdh
