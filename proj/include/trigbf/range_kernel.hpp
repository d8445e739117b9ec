#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace trigbf {

using RangeFunction = std::function<double(double)>;

/// Raised-cosine range kernel [cos(omega s)]^N written as a sum of N+1
/// complex exponentials with binomial weights.
///
/// coeffs[n] = 2^-N C(N, n) and freqs[n] = (2n - N) omega, so coeffs is
/// palindromic, freqs is antisymmetric and the coefficients sum to one.
/// omega = gamma / (rho sqrt N) with gamma = pi / 2T. A degree-0 kernel is
/// the constant 1 (omega = 0).
struct TrigKernel {
    double T = 255.0;
    double gamma = 0.0;
    double rho = 1.0;
    int N = 0;
    double omega = 0.0;
    std::vector<double> coeffs;
    std::vector<double> freqs;

    double operator()(double s) const;

    // The kernel stays on the half period of the cosine over [-T, T].
    bool monotone_on_range() const { return N == 0 || rho * std::sqrt(static_cast<double>(N)) >= 1.0; }
};

/// Even polynomial sum_k coeffs_even[k] s^(2k): the truncated Taylor series
/// of exp(-s^2 / 2 sigma^2).
struct PolyKernel {
    double sigma = 1.0;
    std::vector<double> coeffs_even;

    double operator()(double s) const;
    int terms() const { return static_cast<int>(coeffs_even.size()); }
};

// Minimum degrees for T = 255 at selected range sigmas.
struct DegreeTableEntry {
    double sigma;
    int degree;
};
inline constexpr DegreeTableEntry kDegreeTable[] = {
    {200.0, 1}, {150.0, 2}, {100.0, 3}, {80.0, 4}, {60.0, 5}, {50.0, 7}, {40.0, 9},
};
inline constexpr int kDefaultWideDegree = 5;

enum class DegreeLookup { None, Table };

// ceil((gamma sigma)^-2) with gamma = pi / 2T.
int degree_estimate(double sigma_r, double T);

/// Degree of the raised cosine approximating a Gaussian of width sigma_r on
/// [-T, T].
///
/// With DegreeLookup::Table and T = 255, the tabulated minimum degree is
/// returned at the listed sigmas. Otherwise, when gamma sigma_r < 1 the
/// degree is ceil((gamma sigma_r)^-2); when gamma sigma_r >= 1 any degree
/// keeps the kernel on the half period and kDefaultWideDegree is used.
int select_degree(double sigma_r, double T, DegreeLookup lookup = DegreeLookup::None);

// Raised cosine with an explicit scale rho: [cos(gamma s / (rho sqrt N))]^N.
TrigKernel make_raised_cosine(double T, double rho, int degree);

// Gaussian-approximating kernel: rho = gamma sigma_r, degree from the
// argument or from select_degree.
TrigKernel make_trig_kernel(double sigma_r, double T, std::optional<int> degree = std::nullopt,
                            DegreeLookup lookup = DegreeLookup::None);

double trig_eval(const TrigKernel& k, double s);
double gaussian_eval(double sigma, double s);

PolyKernel make_taylor_kernel(double sigma, int terms);
double poly_eval(const PolyKernel& p, double s);

// Largest |kernel(s) - exp(-s^2/2 sigma^2)| over a uniform grid on [-T, T].
double sup_error(const RangeFunction& kernel, double sigma, double T, int grid_points = 10001);

struct KernelCurveSpec {
    double T = 255.0;
    double sigma = 80.0;
    TrigKernel trig;
    PolyKernel taylor;
    std::vector<int> raw_degrees;  // extra [cos(pi s / 2T)]^N columns
    int grid_points = 511;
};

// CSV with header "s,[raised_cos_N,...]trig_value,gaussian_value,taylor_value".
void write_kernel_curves(std::ostream& os, const KernelCurveSpec& spec);

}  // namespace trigbf
