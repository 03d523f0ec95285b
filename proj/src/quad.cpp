#include "isac/quad.hpp"

#include <cmath>

namespace isac::num {

namespace {

constexpr int kMaxIter = 500;
const double kEps = std::numeric_limits<double>::epsilon();
const double kFpMin = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();

// Series representation of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps)
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
    throw ConvergenceError("gamma_p_series: no convergence", sum, std::abs(del));
}

// Continued fraction for Q(a,x), valid for x >= a+1.
double gamma_q_contfrac(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kFpMin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = b + an / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps)
            return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
    }
    throw ConvergenceError("gamma_q_contfrac: no convergence", h, 0.0);
}

// Continued fraction for the regularized incomplete beta (Lentz).
double betacf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    throw ConvergenceError("betacf: no convergence", h, 0.0);
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw DomainError("regularized_gamma_p: need a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_contfrac(a, x);
}

double lower_incomplete_gamma(double a, double b) {
    if (!(a > 0.0)) throw DomainError("lower_incomplete_gamma: need a > 0");
    if (b < 0.0) throw DomainError("lower_incomplete_gamma: need b >= 0");
    if (b == 0.0) return 0.0;
    return regularized_gamma_p(a, b) * std::exp(std::lgamma(a));
}

double regularized_beta(double x, double a, double b) {
    if (x < 0.0 || x > 1.0) throw DomainError("regularized_beta: x outside [0,1]");
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("regularized_beta: need a, b > 0");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double front =
        std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x));
    // Use the symmetry relation where the continued fraction converges fastest.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double incomplete_beta(double a, double b, double c) {
    if (!(a >= 0.0 && a <= 1.0)) throw DomainError("incomplete_beta: upper limit outside [0,1]");
    if (!(b > 0.0)) throw DomainError("incomplete_beta: need b > 0");
    if (a == 0.0) return 0.0;
    if (c > 0.0) return regularized_beta(a, b, c) * complete_beta(b, c);
    // c <= 0: the (1-t)^(c-1) factor is only integrable away from t = 1.
    if (a == 1.0) throw DomainError("incomplete_beta: divergent at a = 1 with c <= 0");
    // Substitute t = u^(1/b) to remove the endpoint singularity at t = 0.
    const double ub = std::pow(a, b);
    auto g = [b, c](double u) { return std::pow(1.0 - std::pow(u, 1.0 / b), c - 1.0); };
    return integrate(g, 0.0, ub, QuadSpec::special_function()) / b;
}

} // namespace isac::num
