#include "trigbf/range_kernel.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "trigbf/errors.hpp"

namespace trigbf {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ParameterError(std::string(name) + " must be positive and finite");
    }
}

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

}  // namespace

double TrigKernel::operator()(double s) const { return trig_eval(*this, s); }

double PolyKernel::operator()(double s) const { return poly_eval(*this, s); }

int degree_estimate(double sigma_r, double T) {
    require_positive(sigma_r, "sigma_r");
    require_positive(T, "T");
    const double rho = std::numbers::pi / (2.0 * T) * sigma_r;
    return static_cast<int>(std::ceil(1.0 / (rho * rho)));
}

int select_degree(double sigma_r, double T, DegreeLookup lookup) {
    require_positive(sigma_r, "sigma_r");
    require_positive(T, "T");
    if (lookup == DegreeLookup::Table && T == 255.0) {
        for (const auto& e : kDegreeTable) {
            if (e.sigma == sigma_r) return e.degree;
        }
    }
    const double rho = std::numbers::pi / (2.0 * T) * sigma_r;
    if (rho >= 1.0) return kDefaultWideDegree;
    return degree_estimate(sigma_r, T);
}

TrigKernel make_raised_cosine(double T, double rho, int degree) {
    require_positive(T, "T");
    require_positive(rho, "rho");
    if (degree < 0) throw ParameterError("degree must be nonnegative");

    TrigKernel k;
    k.T = T;
    k.gamma = std::numbers::pi / (2.0 * T);
    k.rho = rho;
    k.N = degree;
    k.omega = degree == 0 ? 0.0 : k.gamma / (rho * std::sqrt(static_cast<double>(degree)));
    k.coeffs.resize(static_cast<std::size_t>(degree) + 1);
    k.freqs.resize(static_cast<std::size_t>(degree) + 1);
    const double scale = std::ldexp(1.0, -degree);
    for (int n = 0; n <= degree; ++n) {
        k.coeffs[n] = scale * binomial(degree, n);
        k.freqs[n] = static_cast<double>(2 * n - degree) * k.omega;
    }
    return k;
}

TrigKernel make_trig_kernel(double sigma_r, double T, std::optional<int> degree, DegreeLookup lookup) {
    require_positive(sigma_r, "sigma_r");
    require_positive(T, "T");
    if (degree && *degree < 0) throw ParameterError("degree must be nonnegative");
    const int n = degree ? *degree : select_degree(sigma_r, T, lookup);
    return make_raised_cosine(T, std::numbers::pi / (2.0 * T) * sigma_r, n);
}

double trig_eval(const TrigKernel& k, double s) {
    double acc = 0.0;
    for (std::size_t n = 0; n < k.coeffs.size(); ++n) acc += k.coeffs[n] * std::cos(k.freqs[n] * s);
    return acc;
}

double gaussian_eval(double sigma, double s) { return std::exp(-s * s / (2.0 * sigma * sigma)); }

PolyKernel make_taylor_kernel(double sigma, int terms) {
    require_positive(sigma, "sigma");
    if (terms < 1) throw ParameterError("taylor kernel needs at least one term");
    PolyKernel p;
    p.sigma = sigma;
    p.coeffs_even.resize(static_cast<std::size_t>(terms));
    // (-1)^k / (k! (2 sigma^2)^k), built up term by term.
    double c = 1.0;
    const double two_var = 2.0 * sigma * sigma;
    for (int k = 0; k < terms; ++k) {
        p.coeffs_even[k] = c;
        c *= -1.0 / (static_cast<double>(k + 1) * two_var);
    }
    return p;
}

double poly_eval(const PolyKernel& p, double s) {
    // Horner in s^2.
    const double s2 = s * s;
    double acc = 0.0;
    for (auto it = p.coeffs_even.rbegin(); it != p.coeffs_even.rend(); ++it) acc = acc * s2 + *it;
    return acc;
}

double sup_error(const RangeFunction& kernel, double sigma, double T, int grid_points) {
    if (grid_points < 2) throw ParameterError("sup_error needs at least two grid points");
    require_positive(sigma, "sigma");
    require_positive(T, "T");
    double worst = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double s = -T + 2.0 * T * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        worst = std::max(worst, std::abs(kernel(s) - gaussian_eval(sigma, s)));
    }
    return worst;
}

void write_kernel_curves(std::ostream& os, const KernelCurveSpec& spec) {
    if (spec.grid_points < 2) throw ParameterError("kernel curves need at least two grid points");
    const double gamma = std::numbers::pi / (2.0 * spec.T);
    os << "s";
    for (int n : spec.raw_degrees) os << ",raised_cos_" << n;
    os << ",trig_value,gaussian_value,taylor_value\n";
    const auto old_precision = os.precision(12);
    for (int i = 0; i < spec.grid_points; ++i) {
        const double s = -spec.T + 2.0 * spec.T * static_cast<double>(i) / static_cast<double>(spec.grid_points - 1);
        os << s;
        for (int n : spec.raw_degrees) os << ',' << std::pow(std::cos(gamma * s), n);
        os << ',' << trig_eval(spec.trig, s) << ',' << gaussian_eval(spec.sigma, s) << ','
           << poly_eval(spec.taylor, s) << '\n';
    }
    os.precision(old_precision);
}

}  // namespace trigbf
