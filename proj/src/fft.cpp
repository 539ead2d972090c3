// SPDX-License-Identifier: Apache-2.0
#include "fft.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <vector>

#include <fftw3.h>

#include "tfqkd/error.hpp"

namespace tfqkd::detail {
namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class Plan {
public:
    Plan(int rank, int n, cplx* data, int sign)
    {
        auto* buf = reinterpret_cast<fftw_complex*>(data);
        std::lock_guard lock(planner_mutex());
        plan_ = rank == 1 ? fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE)
                          : fftw_plan_dft_2d(n, n, buf, buf, sign, FFTW_ESTIMATE);
        require(plan_ != nullptr, ErrorCode::Numerical, "FFTW failed to create a plan");
    }
    ~Plan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_ = nullptr;
};

struct Phases {
    std::vector<cplx> pre;
    std::vector<cplx> post;
    double scale;
};

// x_k y_m = x_c y_m + (k-c) dx y_c + (k-c)(m-c) 2pi/n with c = (n-1)/2; the
// last term expands to km - c(k+m) + c^2, leaving a plain DFT in km.
Phases make_phases(const UniformGrid& from, const UniformGrid& to, FourierSign sign)
{
    const std::size_t n = from.size();
    require(to.size() == n, ErrorCode::GridMismatch, "dual grids must have equal size");
    const double two_pi = 2.0 * std::numbers::pi;
    const double product = static_cast<double>(n) * from.step() * to.step();
    require(std::abs(product - two_pi) <= 1e-9 * two_pi, ErrorCode::GridMismatch,
            "grids are not Fourier duals (n*dx*dy != 2pi)");

    const double s = static_cast<double>(static_cast<int>(sign));
    const double c = 0.5 * (static_cast<double>(n) - 1.0);
    const double nn = static_cast<double>(n);
    const cplx global = std::polar(1.0, s * two_pi * c * c / nn);

    Phases ph;
    ph.pre.resize(n);
    ph.post.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double kk = static_cast<double>(k);
        ph.pre[k] = std::polar(1.0, s * ((kk - c) * from.step() * to.center() - two_pi * c * kk / nn));
        ph.post[k] = global * std::polar(1.0, s * (from.center() * to.at(k) - two_pi * c * kk / nn));
    }
    ph.scale = from.step() / std::sqrt(two_pi);
    return ph;
}

}  // namespace

void grid_dft(std::span<cplx> data, const UniformGrid& from, const UniformGrid& to, FourierSign sign)
{
    require(data.size() == from.size(), ErrorCode::GridMismatch, "data length does not match grid");
    const Phases ph = make_phases(from, to, sign);
    const std::size_t n = data.size();
    for (std::size_t k = 0; k < n; ++k) data[k] *= ph.pre[k];
    Plan plan(1, static_cast<int>(n), data.data(), static_cast<int>(sign));
    plan.execute();
    for (std::size_t m = 0; m < n; ++m) data[m] *= ph.post[m] * ph.scale;
}

void grid_dft_2d(ComplexMatrix& data, const UniformGrid& from, const UniformGrid& to, FourierSign sign)
{
    const auto n = static_cast<Eigen::Index>(from.size());
    require(data.rows() == n && data.cols() == n, ErrorCode::GridMismatch,
            "matrix shape does not match grid");
    const Phases ph = make_phases(from, to, sign);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) data(i, j) *= ph.pre[i] * ph.pre[j];
    // Square matrix and separable phases: storage order does not matter.
    Plan plan(2, static_cast<int>(n), data.data(), static_cast<int>(sign));
    plan.execute();
    const double scale2 = ph.scale * ph.scale;
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) data(i, j) *= ph.post[i] * ph.post[j] * scale2;
}

}  // namespace tfqkd::detail
