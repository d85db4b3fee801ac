#include "ppq/predictor.hpp"

#include <cmath>

#include "ppq/errors.hpp"

namespace ppq {
namespace {

constexpr double kDamping = 1e-9;

/// Solves (A + damping*I) x = b for a symmetric positive semidefinite A via
/// Cholesky. A is k*k row-major.
std::vector<double> solve_damped(std::vector<double> a, std::vector<double> b, int k) {
    for (int i = 0; i < k; ++i) a[i * k + i] += kDamping;
    // in-place Cholesky A = L L^T
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[i * k + j];
            for (int m = 0; m < j; ++m) s -= a[i * k + m] * a[j * k + m];
            if (i == j) {
                a[i * k + i] = std::sqrt(std::max(s, kDamping * kDamping));
            } else {
                a[i * k + j] = s / a[j * k + j];
            }
        }
    }
    // forward then backward substitution
    for (int i = 0; i < k; ++i) {
        double s = b[i];
        for (int m = 0; m < i; ++m) s -= a[i * k + m] * b[m];
        b[i] = s / a[i * k + i];
    }
    for (int i = k - 1; i >= 0; --i) {
        double s = b[i];
        for (int m = i + 1; m < k; ++m) s -= a[m * k + i] * b[m];
        b[i] = s / a[i * k + i];
    }
    return b;
}

} // namespace

CoefficientVector fit_coefficients(std::span<const PredictionWindow> windows, int k) {
    if (windows.empty()) throw UsageError("fit_coefficients: no training data");
    std::vector<double> ata(static_cast<size_t>(k) * k, 0.0);
    std::vector<double> atb(k, 0.0);
    for (const auto& w : windows) {
        if (static_cast<int>(w.history.size()) != k) {
            throw UsageError("fit_coefficients: window history length != k");
        }
        // regression row j holds history[k-1-j]; one row per component
        for (int i = 0; i < k; ++i) {
            const Point& pi = w.history[k - 1 - i];
            for (int j = 0; j < k; ++j) {
                const Point& pj = w.history[k - 1 - j];
                ata[i * k + j] += pi.x * pj.x + pi.y * pj.y;
            }
            atb[i] += pi.x * w.target.x + pi.y * w.target.y;
        }
    }
    return {solve_damped(std::move(ata), std::move(atb), k)};
}

Point predict(const CoefficientVector& coeffs, std::span<const Point> history) {
    const int k = static_cast<int>(coeffs.coeffs.size());
    if (static_cast<int>(history.size()) != k) {
        throw UsageError("predict: history length does not match coefficient count");
    }
    Point p{0.0, 0.0};
    for (int j = 0; j < k; ++j) {
        // coeffs[0] applies to the newest point
        p = p + history[k - 1 - j] * coeffs.coeffs[j];
    }
    return p;
}

ArFeature fit_ar_feature(std::span<const Point> history, int k) {
    if (static_cast<int>(history.size()) < k + 1) {
        return {std::vector<double>(k, 0.0), true};
    }
    // mean-remove the window so a constant trajectory maps to the zero vector
    Point mean{0.0, 0.0};
    for (const auto& p : history) mean = mean + p;
    mean = mean * (1.0 / static_cast<double>(history.size()));

    std::vector<Point> z;
    z.reserve(history.size());
    for (const auto& p : history) z.push_back(p - mean);

    std::vector<double> ata(static_cast<size_t>(k) * k, 0.0);
    std::vector<double> atb(k, 0.0);
    for (size_t t = k; t < z.size(); ++t) {
        for (int i = 0; i < k; ++i) {
            const Point& pi = z[t - 1 - i];
            for (int j = 0; j < k; ++j) {
                const Point& pj = z[t - 1 - j];
                ata[i * k + j] += pi.x * pj.x + pi.y * pj.y;
            }
            atb[i] += pi.x * z[t].x + pi.y * z[t].y;
        }
    }
    return {solve_damped(std::move(ata), std::move(atb), k), false};
}

} // namespace ppq
