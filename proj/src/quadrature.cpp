#include "dwell/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwell {

std::vector<QuadraturePoint1D> gauss_legendre(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
    std::vector<QuadraturePoint1D> rule(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev-like initial guess.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * static_cast<double>(k) - 1.0) * z * p1 -
                      (static_cast<double>(k) - 1.0) * p2) /
                     static_cast<double>(k);
            }
            dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule[n - 1 - i] = {0.5 * (1.0 - z), 0.5 * w};
    }
    return rule;
}

std::vector<QuadraturePoint2D> triangle_rule(std::size_t n)
{
    const auto g = gauss_legendre(n);
    std::vector<QuadraturePoint2D> rule;
    rule.reserve(n * n);
    for (const auto& u : g) {
        for (const auto& v : g) {
            rule.push_back({u.x, v.x * (1.0 - u.x), u.w * v.w * (1.0 - u.x)});
        }
    }
    return rule;
}

std::vector<PhysicalPoint> map_rule(const std::vector<QuadraturePoint2D>& rule, const Point2& a,
                                    const Point2& b, const Point2& c)
{
    const double jac = std::abs((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
    std::vector<PhysicalPoint> out;
    out.reserve(rule.size());
    for (const auto& q : rule) {
        const double s = 1.0 - q.xi - q.eta;
        out.push_back({{s * a[0] + q.xi * b[0] + q.eta * c[0], s * a[1] + q.xi * b[1] + q.eta * c[1]},
                       q.w * jac});
    }
    return out;
}

std::vector<Point2> clip_half_plane(const std::vector<Point2>& polygon, int axis, double cut,
                                    double sign)
{
    std::vector<Point2> out;
    if (polygon.empty()) return out;
    auto inside = [&](const Point2& p) { return sign * (p[axis] - cut) <= 0.0; };
    for (std::size_t k = 0; k < polygon.size(); ++k) {
        const Point2& cur = polygon[k];
        const Point2& prev = polygon[(k + polygon.size() - 1) % polygon.size()];
        const bool in_cur = inside(cur);
        const bool in_prev = inside(prev);
        if (in_cur != in_prev) {
            const double t = (cut - prev[axis]) / (cur[axis] - prev[axis]);
            Point2 x{prev[0] + t * (cur[0] - prev[0]), prev[1] + t * (cur[1] - prev[1])};
            x[axis] = cut;
            out.push_back(x);
        }
        if (in_cur) out.push_back(cur);
    }
    return out;
}

}  // namespace dwell
