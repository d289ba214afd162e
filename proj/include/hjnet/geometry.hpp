#ifndef HJNET_GEOMETRY_HPP
#define HJNET_GEOMETRY_HPP

#include <cmath>

namespace hjnet {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double t, Vec2 a) { return {t * a.x, t * a.y}; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double norm2(Vec2 a) { return a.x * a.x + a.y * a.y; }

// Point on the embedded segment [p,q] at fraction t in [0,1].
inline Vec2 lerp(Vec2 p, Vec2 q, double t) { return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)}; }

} // namespace hjnet

#endif
