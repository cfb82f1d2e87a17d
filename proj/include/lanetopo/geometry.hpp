#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "lanetopo/config.hpp"

namespace lanetopo {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
constexpr bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
double norm(Point2 p);
double dist(Point2 a, Point2 b);

/// Directed quadratic Bezier; traffic flows from p0 to p2. Construction
/// rejects a zero-length control polygon (the curve would carry no
/// direction).
struct QuadBezier {
  QuadBezier(Point2 a, Point2 b, Point2 c);

  Point2 p0, p1, p2;
};

bool operator==(const QuadBezier& a, const QuadBezier& b);

Point2 eval_bezier(const QuadBezier& c, double t);    // t in [0,1]
Point2 bezier_derivative(const QuadBezier& c, double t);

/// n >= 2 points at uniform parameter spacing, endpoints included.
std::vector<Point2> sample_polyline(const QuadBezier& c, int n);

/// De Casteljau split at interior t; both halves reproduce the original
/// geometry exactly (up to floating point).
std::pair<QuadBezier, QuadBezier> split_bezier(const QuadBezier& c, double t);

std::array<double, 6> control_array(const QuadBezier& c);

struct IntersectionHit {
  double t_a = 0.0;
  double t_b = 0.0;
  Point2 pos;
};

/// Single transversal (or endpoint) contact between two curves, or nullopt
/// when they stay further than geom_tol apart. More than one distinct
/// contact, or an extended overlap, throws AssumptionViolation
/// (MultipleIntersections) -- such inputs break the one-intersection
/// contract and have no canonical answer.
std::optional<IntersectionHit> intersect_curves(const QuadBezier& a, const QuadBezier& b,
                                                double geom_tol = kGeomTol);

}  // namespace lanetopo
