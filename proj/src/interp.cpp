#include "tfshe/interp.hpp"

#include <gsl/gsl_interp.h>

#include <algorithm>

#include "tfshe/errors.hpp"

namespace tfshe {

struct MonotoneSpline::Impl {
    std::vector<double> x, y;
    gsl_interp* interp = nullptr;
    ~Impl() {
        if (interp) gsl_interp_free(interp);
    }
};

MonotoneSpline::MonotoneSpline(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 3) throw DomainError("MonotoneSpline: need >= 3 matching nodes");
    auto impl = std::make_shared<Impl>();
    impl->x = std::move(x);
    impl->y = std::move(y);
    impl->interp = gsl_interp_alloc(gsl_interp_steffen, impl->x.size());
    if (gsl_interp_init(impl->interp, impl->x.data(), impl->y.data(), impl->x.size()) != 0)
        throw DomainError("MonotoneSpline: nodes must be strictly increasing");
    impl_ = std::move(impl);
}

double MonotoneSpline::operator()(double x) const {
    const auto& m = *impl_;
    x = std::clamp(x, m.x.front(), m.x.back());
    return gsl_interp_eval(m.interp, m.x.data(), m.y.data(), x, nullptr);
}

double MonotoneSpline::x_min() const { return impl_->x.front(); }
double MonotoneSpline::x_max() const { return impl_->x.back(); }

} // namespace tfshe
