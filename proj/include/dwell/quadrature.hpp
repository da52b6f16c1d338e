#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace dwell {

struct QuadraturePoint1D {
    double x;  // on [0, 1]
    double w;
};

/// Gauss-Legendre rule with n points mapped to [0, 1].
std::vector<QuadraturePoint1D> gauss_legendre(std::size_t n);

struct QuadraturePoint2D {
    double xi;   // barycentric-style reference coordinates on
    double eta;  // the triangle (0,0), (1,0), (0,1)
    double w;    // weights sum to 1/2
};

/// Collapsed (Duffy) tensor Gauss rule on the reference triangle. All points
/// lie strictly inside the triangle.
std::vector<QuadraturePoint2D> triangle_rule(std::size_t n);

using Point2 = std::array<double, 2>;

/// Maps a reference rule onto the triangle (a, b, c) and returns physical
/// points with weights scaled by the (unsigned) area Jacobian.
struct PhysicalPoint {
    Point2 x;
    double w;
};
std::vector<PhysicalPoint> map_rule(const std::vector<QuadraturePoint2D>& rule,
                                    const Point2& a, const Point2& b, const Point2& c);

/// Sutherland-Hodgman clip of a convex polygon against the half-plane
/// sign * (p[axis] - cut) <= 0.
std::vector<Point2> clip_half_plane(const std::vector<Point2>& polygon, int axis, double cut,
                                    double sign);

}  // namespace dwell
