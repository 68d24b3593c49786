#include "tfshe/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tfshe/errors.hpp"

namespace tfshe {

void FracOrder::validate() const {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("0 < alpha <= 2 violated");
    if (classical) {
        if (beta != 1.0) throw DomainError("classical-limit flag requires beta = 1");
    } else if (!(beta > 0.0 && beta < 1.0)) {
        throw DomainError("0 < beta < 1 violated (use the classical-limit flag for beta = 1)");
    }
}

SigmaSpec SigmaSpec::linear(double slope) {
    if (!(slope > 0.0)) throw DomainError("sigma: slope > 0 required");
    SigmaSpec s;
    s.kind_ = Kind::Linear;
    s.a_ = slope;
    s.l_ = slope;
    s.L_ = slope;
    return s;
}

SigmaSpec SigmaSpec::clipped_affine(double a, double b, double l, double L) {
    if (!(L > 0.0) || !(l >= 0.0) || !(l <= L)) throw DomainError("sigma: 0 <= l_sigma <= L_sigma, L_sigma > 0 required");
    SigmaSpec s;
    s.kind_ = Kind::ClippedAffine;
    s.a_ = a;
    s.b_ = b;
    s.l_ = l;
    s.L_ = L;
    return s;
}

SigmaSpec SigmaSpec::table(std::vector<double> xs, std::vector<double> ys, double l, double L) {
    if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("sigma table: need >= 2 matching nodes");
    if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end())
        throw DomainError("sigma table: abscissae must be strictly increasing");
    if (!(L > 0.0) || !(l >= 0.0) || !(l <= L)) throw DomainError("sigma: 0 <= l_sigma <= L_sigma, L_sigma > 0 required");
    if (xs.front() >= 0.0 || xs.back() <= 0.0) throw DomainError("sigma table: nodes must straddle 0");
    SigmaSpec s;
    s.kind_ = Kind::CustomTable;
    s.xs_ = std::move(xs);
    s.ys_ = std::move(ys);
    s.l_ = l;
    s.L_ = L;
    s.validate();
    return s;
}

double SigmaSpec::operator()(double x) const {
    switch (kind_) {
    case Kind::Linear: return a_ * x;
    case Kind::ClippedAffine: {
        const double ax = std::abs(x);
        const double v = std::clamp(a_ + b_ * ax, l_ * ax, L_ * ax);
        return x < 0.0 ? -v : v;
    }
    case Kind::CustomTable: {
        if (x <= xs_.front()) return ys_.front() * (x / xs_.front());
        if (x >= xs_.back()) return ys_.back() * (x / xs_.back());
        auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - xs_.begin()) - 1;
        const double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
        return (1.0 - w) * ys_[i] + w * ys_[i + 1];
    }
    }
    return 0.0;
}

std::string SigmaSpec::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::Linear: os << "linear(slope=" << a_ << ")"; break;
    case Kind::ClippedAffine: os << "clipped-affine(a=" << a_ << ",b=" << b_ << ")"; break;
    case Kind::CustomTable: os << "custom-table(" << xs_.size() << " nodes)"; break;
    }
    os << " L=" << L_ << " l=" << l_;
    return os.str();
}

nlohmann::json SigmaSpec::to_json() const {
    switch (kind_) {
    case Kind::Linear: return {{"kind", "linear"}, {"slope", a_}};
    case Kind::ClippedAffine:
        return {{"kind", "clipped-affine"}, {"a", a_}, {"b", b_}, {"l", l_}, {"L", L_}};
    case Kind::CustomTable: return {{"kind", "table"}, {"x", xs_}, {"y", ys_}, {"l", l_}, {"L", L_}};
    }
    return {};
}

SigmaSpec SigmaSpec::from_json(const nlohmann::json& j) {
    const std::string k = j.at("kind").get<std::string>();
    if (k == "linear") return linear(j.at("slope").get<double>());
    if (k == "clipped-affine")
        return clipped_affine(j.at("a").get<double>(), j.at("b").get<double>(), j.at("l").get<double>(),
                              j.at("L").get<double>());
    if (k == "table")
        return table(j.at("x").get<std::vector<double>>(), j.at("y").get<std::vector<double>>(),
                     j.at("l").get<double>(), j.at("L").get<double>());
    throw DomainError("sigma: unknown kind " + k);
}

void SigmaSpec::validate(double range, int points) const {
    const double tol = 1e-12;
    double prev_x = -range, prev_y = (*this)(prev_x);
    for (int i = 1; i < points; ++i) {
        const double x = -range + 2.0 * range * i / (points - 1);
        const double y = (*this)(x);
        const double ax = std::abs(x);
        if (std::abs(y) > L_ * ax * (1 + tol) + tol)
            throw DomainError("sigma: |sigma(x)| <= L_sigma |x| violated at x = " + std::to_string(x));
        if (l_ > 0.0 && std::abs(y) < l_ * ax * (1 - tol) - tol)
            throw DomainError("sigma: |sigma(x)| >= l_sigma |x| violated at x = " + std::to_string(x));
        if (std::abs(y - prev_y) > L_ * (x - prev_x) * (1 + 1e-9) + tol)
            throw DomainError("sigma: Lipschitz constant exceeds L_sigma near x = " + std::to_string(x));
        prev_x = x;
        prev_y = y;
    }
}

bool white_noise_valid(const ModelParams& p, std::string* why) {
    const double bound = std::min(2.0, 1.0 / p.beta()) * p.alpha();
    const bool ok = p.d < bound;
    if (!ok && why) {
        std::ostringstream os;
        os << "d < (2∧β^{−1})α violated: d = " << p.d << ", (2∧β^{−1})α = " << bound;
        *why = os.str();
    }
    return ok;
}

bool colored_noise_valid(const ModelParams& p, std::string* why) {
    if (!p.gamma) return false;
    const double g = *p.gamma;
    const double bound = std::min(p.alpha(), static_cast<double>(p.d));
    const bool ok = g > 0.0 && g < bound;
    if (!ok && why) {
        std::ostringstream os;
        os << "0 < γ < α∧d violated: γ = " << g << ", α∧d = " << bound;
        *why = os.str();
    }
    return ok;
}

void ModelParams::validate() const {
    frac.validate();
    if (!(nu > 0.0)) throw DomainError("nu > 0 violated");
    if (d < 1) throw DomainError("d >= 1 violated");
    if (!(lambda >= 0.0)) throw DomainError("lambda >= 0 violated");
    std::string why;
    if (white()) {
        if (!white_noise_valid(*this, &why)) throw DomainError(why);
    } else if (!colored_noise_valid(*this, &why)) {
        throw DomainError(why);
    }
}

InitialData InitialData::constant(double c) {
    InitialData u;
    u.kind_ = Kind::Constant;
    u.c_ = c;
    u.validate();
    return u;
}

InitialData InitialData::step(std::vector<Interval> pieces) {
    InitialData u;
    u.kind_ = Kind::Step;
    u.pieces_ = std::move(pieces);
    if (!u.pieces_.empty()) {
        u.lo_ = u.pieces_.front().a;
        u.hi_ = u.pieces_.front().b;
        for (const auto& p : u.pieces_) {
            u.lo_ = std::min(u.lo_, p.a);
            u.hi_ = std::max(u.hi_, p.b);
        }
    }
    u.validate();
    return u;
}

InitialData InitialData::callable(std::function<double(double)> f, double lo, double hi, double bound) {
    InitialData u;
    u.kind_ = Kind::Callable;
    u.f_ = std::move(f);
    u.lo_ = lo;
    u.hi_ = hi;
    u.bound_ = bound;
    u.validate();
    return u;
}

double InitialData::operator()(double x) const {
    switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::Step: {
        double v = 0.0;
        for (const auto& p : pieces_)
            if (x > p.a && x < p.b) v += p.value;
        return v;
    }
    case Kind::Callable: return (x >= lo_ && x <= hi_) ? f_(x) : 0.0;
    }
    return 0.0;
}

double InitialData::sup() const {
    switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::Step: {
        double s = 0.0;
        for (const auto& p : pieces_) s += p.value;
        return s;
    }
    case Kind::Callable: return bound_;
    }
    return 0.0;
}

std::string InitialData::describe() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::Constant: os << "constant(" << c_ << ")"; break;
    case Kind::Step:
        os << "step(";
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            os << (i ? "," : "") << "[" << pieces_[i].a << "," << pieces_[i].b << "]:" << pieces_[i].value;
        os << ")";
        break;
    case Kind::Callable: os << "callable[" << lo_ << "," << hi_ << "]"; break;
    }
    return os.str();
}

void InitialData::validate() const {
    switch (kind_) {
    case Kind::Constant:
        if (!(c_ > 0.0) || !std::isfinite(c_)) throw DomainError("initial data: constant must be positive and finite");
        return;
    case Kind::Step: {
        double measure = 0.0;
        for (const auto& p : pieces_) {
            if (!(p.b > p.a)) throw DomainError("initial data: step interval with b <= a");
            if (!(p.value >= 0.0) || !std::isfinite(p.value)) throw DomainError("initial data: step values must be finite and >= 0");
            if (p.value > 0.0) measure += p.b - p.a;
        }
        if (!(measure > 0.0)) throw DomainError("initial data: must be positive on a set of positive measure");
        return;
    }
    case Kind::Callable: {
        if (!f_) throw DomainError("initial data: empty callable");
        if (!(hi_ > lo_) || !(bound_ > 0.0)) throw DomainError("initial data: callable needs lo < hi and bound > 0");
        bool positive = false;
        for (int i = 0; i <= 1000; ++i) {
            const double x = lo_ + (hi_ - lo_) * i / 1000.0;
            const double v = f_(x);
            if (!(v >= 0.0) || v > bound_ * (1 + 1e-12)) throw DomainError("initial data: callable must satisfy 0 <= f <= bound");
            positive = positive || v > 0.0;
        }
        if (!positive) throw DomainError("initial data: must be positive on a set of positive measure");
        return;
    }
    }
}

nlohmann::json ModelParams::to_json() const {
    nlohmann::json j{{"alpha", frac.alpha}, {"beta", frac.beta}, {"classical", frac.classical}, {"nu", nu},
                     {"d", d}, {"lambda", lambda}, {"sigma", sigma.to_json()}};
    j["gamma"] = gamma ? nlohmann::json(*gamma) : nlohmann::json(nullptr);
    return j;
}

ModelParams ModelParams::from_json(const nlohmann::json& j) {
    ModelParams p;
    p.frac = {j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("classical").get<bool>()};
    p.nu = j.at("nu").get<double>();
    p.d = j.at("d").get<int>();
    p.lambda = j.at("lambda").get<double>();
    p.sigma = SigmaSpec::from_json(j.at("sigma"));
    if (!j.at("gamma").is_null()) p.gamma = j.at("gamma").get<double>();
    return p;
}

} // namespace tfshe
