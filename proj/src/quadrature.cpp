#include "revend/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "revend/errors.hpp"

namespace revend::quad {

namespace {

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

struct Workspace {
    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ptr;
    std::size_t size = 0;
};

// Integrands may themselves integrate, so each nesting level owns a workspace.
thread_local std::vector<Workspace> pool;
thread_local std::size_t depth = 0;

class WorkspaceLease {
public:
    explicit WorkspaceLease(std::size_t size) {
        if (pool.size() <= depth) pool.resize(depth + 1);
        Workspace& ws = pool[depth];
        if (ws.size < size) {
            ws.ptr.reset(gsl_integration_workspace_alloc(size));
            if (!ws.ptr) throw QuadratureError("cannot allocate integration workspace");
            ws.size = size;
        }
        ptr_ = ws.ptr.get();
        ++depth;
    }
    ~WorkspaceLease() { --depth; }
    WorkspaceLease(const WorkspaceLease&) = delete;
    WorkspaceLease& operator=(const WorkspaceLease&) = delete;

    gsl_integration_workspace* get() const noexcept { return ptr_; }

private:
    gsl_integration_workspace* ptr_ = nullptr;
};

struct Trampoline {
    const std::function<double(double)>* f;
    std::exception_ptr failure;
};

double call(double x, void* params) {
    auto* tr = static_cast<Trampoline*>(params);
    if (tr->failure) return 0.0;
    try {
        return (*tr->f)(x);
    } catch (...) {
        tr->failure = std::current_exception();
        return 0.0;
    }
}

struct ErrorHandlerOff {
    ErrorHandlerOff() { gsl_set_error_handler_off(); }
};

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b, const Tolerance& tol) {
    static const ErrorHandlerOff handler_off;
    if (a == b) return {};
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw QuadratureError("integration bounds must be finite");
    }

    Trampoline tr{&f, nullptr};
    gsl_function gf{&call, &tr};
    const auto limit = static_cast<std::size_t>(tol.max_intervals);
    double value = 0.0;
    double err = 0.0;
    int status = 0;
    {
        WorkspaceLease lease(limit);
        status = gsl_integration_qag(&gf, a, b, tol.abs, tol.rel, limit, GSL_INTEG_GAUSS15, lease.get(), &value,
                                     &err);
    }
    if (tr.failure) std::rethrow_exception(tr.failure);
    if (!std::isfinite(value)) {
        throw QuadratureError("non-finite integral on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
    }
    if (status != GSL_SUCCESS) {
        // Roundoff-limited or budget-limited results are accepted when the
        // estimate is still small in absolute or relative terms.
        const double loose = std::max(1e3 * tol.abs, 1e3 * tol.rel * std::abs(value));
        if (err > loose) {
            throw QuadratureError(std::string("quadrature did not converge: ") +
                                  gsl_strerror(status) + ", error estimate " +
                                  std::to_string(err));
        }
    }
    return {value, err};
}

Result integrate_best_effort(const std::function<double(double)>& f, double a, double b,
                             const Tolerance& tol, double max_rel) {
    Tolerance current = tol;
    while (true) {
        try {
            return integrate(f, a, b, current);
        } catch (const QuadratureError&) {
            if (current.rel * 100.0 > max_rel * (1.0 + 1e-12)) throw;
            current.rel *= 100.0;
            current.abs *= 100.0;
        }
    }
}

}  // namespace revend::quad
