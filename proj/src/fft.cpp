#include "anyon/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace anyon {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
} // namespace

Fft2D::Fft2D(int n) : n_(n) {
    // Planning with FFTW_ESTIMATE does not touch the arrays.
    std::vector<cplx> scratch(static_cast<std::size_t>(n) * n);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
    inverse_plan_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
}

Fft2D::~Fft2D() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

const Fft2D& Fft2D::get(int n) {
    // The mutex must outlive the cache: plan destructors lock it at exit.
    auto& mutex = planner_mutex();
    static std::map<int, std::unique_ptr<Fft2D>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::unique_ptr<Fft2D>(new Fft2D(n))).first;
    return *it->second;
}

void Fft2D::forward(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t total = static_cast<std::size_t>(n_) * n_;
    if (in.size() != total || out.size() != total)
        throw ShapeError("Fft2D::forward: array size does not match plan");
    if (in.data() != out.data())
        std::copy(in.begin(), in.end(), out.begin());
    auto* buf = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void Fft2D::inverse(std::span<const cplx> in, std::span<cplx> out) const {
    const std::size_t total = static_cast<std::size_t>(n_) * n_;
    if (in.size() != total || out.size() != total)
        throw ShapeError("Fft2D::inverse: array size does not match plan");
    if (in.data() != out.data())
        std::copy(in.begin(), in.end(), out.begin());
    auto* buf = reinterpret_cast<fftw_complex*>(out.data());
    fftw_execute_dft(static_cast<fftw_plan>(inverse_plan_), buf, buf);
    const double scale = 1.0 / static_cast<double>(total);
    for (auto& v : out) v *= scale;
}

std::vector<cplx> Fft2D::forward(std::span<const cplx> in) const {
    std::vector<cplx> out(in.size());
    forward(in, out);
    return out;
}

std::vector<cplx> Fft2D::inverse(std::span<const cplx> in) const {
    std::vector<cplx> out(in.size());
    inverse(in, out);
    return out;
}

std::vector<cplx> Fft2D::forward_real(std::span<const double> in) const {
    std::vector<cplx> out(in.begin(), in.end());
    forward(out, out);
    return out;
}

} // namespace anyon
