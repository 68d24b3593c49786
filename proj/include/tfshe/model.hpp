#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tfshe {

struct FracOrder {
    double alpha = 2.0;
    double beta = 0.5;
    // beta == 1 is admitted only with this flag set: the kernel collapses to the stable density.
    bool classical = false;

    static FracOrder classical_limit(double alpha) { return {alpha, 1.0, true}; }
    void validate() const;
};

// Diffusion coefficient sigma with machine-checkable cone/Lipschitz data:
//   l |x| <= |sigma(x)| <= L |x|,  |sigma(x) - sigma(y)| <= L |x - y|.
class SigmaSpec {
public:
    enum class Kind { Linear, ClippedAffine, CustomTable };

    // sigma(x) = slope * x
    static SigmaSpec linear(double slope = 1.0);
    // sigma(x) = sign(x) clamp(a + b|x|, l|x|, L|x|)
    static SigmaSpec clipped_affine(double a, double b, double l, double L);
    // Piecewise linear through (xs, ys), extended by rays through the origin.
    static SigmaSpec table(std::vector<double> xs, std::vector<double> ys, double l, double L);

    double operator()(double x) const;
    Kind kind() const { return kind_; }
    double L_sigma() const { return L_; }
    double l_sigma() const { return l_; }
    bool is_linear() const { return kind_ == Kind::Linear; }
    double slope() const { return a_; }
    std::string describe() const;
    nlohmann::json to_json() const;
    static SigmaSpec from_json(const nlohmann::json& j);

    // Cone and Lipschitz checks on a dense grid of [-range, range]; throws DomainError.
    void validate(double range = 100.0, int points = 20001) const;

private:
    Kind kind_ = Kind::Linear;
    double a_ = 1.0, b_ = 0.0;
    double l_ = 1.0, L_ = 1.0;
    std::vector<double> xs_, ys_;
};

struct ModelParams {
    FracOrder frac;
    double nu = 1.0;
    int d = 1;
    std::optional<double> gamma; // Riesz exponent; absent means space-time white noise
    double lambda = 1.0;
    SigmaSpec sigma = SigmaSpec::linear(1.0);

    double alpha() const { return frac.alpha; }
    double beta() const { return frac.beta; }
    bool white() const { return !gamma.has_value(); }
    // d for white noise, gamma for colored noise.
    double noise_exponent() const { return gamma ? *gamma : static_cast<double>(d); }
    // 1 - beta d / alpha (white) or 1 - beta gamma / alpha (colored)
    double rho() const { return 1.0 - beta() * noise_exponent() / alpha(); }

    // Throws DomainError naming the violated inequality.
    void validate() const;

    nlohmann::json to_json() const;
    static ModelParams from_json(const nlohmann::json& j);
};

// "d < (2 ^ 1/beta) alpha" for white noise.
bool white_noise_valid(const ModelParams& p, std::string* why = nullptr);
// "gamma < alpha ^ d" for colored noise.
bool colored_noise_valid(const ModelParams& p, std::string* why = nullptr);

// Bounded, non-negative initial data.
class InitialData {
public:
    enum class Kind { Constant, Step, Callable };
    struct Interval {
        double a, b, value;
    };

    static InitialData constant(double c);
    // Sum of value * 1_{(a, b)}; one-dimensional.
    static InitialData step(std::vector<Interval> pieces);
    static InitialData indicator(double a, double b) { return step({{a, b, 1.0}}); }
    // f supported in [lo, hi] with |f| <= bound; one-dimensional.
    static InitialData callable(std::function<double(double)> f, double lo, double hi, double bound);

    Kind kind() const { return kind_; }
    double constant_value() const { return c_; }
    const std::vector<Interval>& pieces() const { return pieces_; }
    double operator()(double x) const;
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    double sup() const;
    std::string describe() const;

    // Throws DomainError unless bounded, non-negative and positive on a set of positive measure.
    void validate() const;

private:
    Kind kind_ = Kind::Constant;
    double c_ = 1.0;
    std::vector<Interval> pieces_;
    std::function<double(double)> f_;
    double lo_ = 0.0, hi_ = 0.0, bound_ = 0.0;
};

} // namespace tfshe
