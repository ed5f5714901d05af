#include "vcarl/fft.hpp"
#include "vcarl/error.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace vcarl {

const char* error_kind_name(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::config: return "config";
    case ErrorKind::exponent: return "exponent";
    case ErrorKind::ordering: return "ordering";
    case ErrorKind::scale: return "scale";
    case ErrorKind::input: return "input";
    case ErrorKind::grid_mismatch: return "grid-mismatch";
    case ErrorKind::incoverable: return "incoverable";
    case ErrorKind::construction: return "construction";
    case ErrorKind::assertion: return "assertion";
    }
    return "unknown";
}

int exit_code_for(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::config:
    case ErrorKind::exponent:
    case ErrorKind::ordering:
    case ErrorKind::scale:
        return 2;
    case ErrorKind::input:
    case ErrorKind::grid_mismatch:
        return 3;
    case ErrorKind::incoverable:
    case ErrorKind::construction:
    case ErrorKind::assertion:
        return 4;
    }
    return 4;
}

namespace {

struct Plan {
    std::size_t n = 0;
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit Plan(std::size_t size) : n(size)
    {
        buf = fftw_alloc_complex(n);
        fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    ~Plan()
    {
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
        fftw_free(buf);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

std::mutex g_mutex;
std::map<std::size_t, std::unique_ptr<Plan>> g_plans;

// FFTW planning is not thread safe; execution on a plan's own buffer is
// serialized by the same lock, which keeps the wrapper simple.
void run(std::vector<cplx>& data, bool forward)
{
    if (data.empty()) return;
    std::lock_guard<std::mutex> lock(g_mutex);
    auto& slot = g_plans[data.size()];
    if (!slot) slot = std::make_unique<Plan>(data.size());
    std::memcpy(slot->buf, data.data(), data.size() * sizeof(cplx));
    fftw_execute(forward ? slot->fwd : slot->bwd);
    std::memcpy(static_cast<void*>(data.data()), slot->buf, data.size() * sizeof(cplx));
}

} // namespace

void fft_forward(std::vector<cplx>& data) { run(data, true); }
void fft_backward(std::vector<cplx>& data) { run(data, false); }

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace vcarl
