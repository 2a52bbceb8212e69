#ifndef UAVSIM_VEC2_HPP
#define UAVSIM_VEC2_HPP

#include <cmath>

namespace uavsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

    double norm() const { return std::hypot(x, y); }
};

inline double horizontal_distance(const Vec2& a, const Vec2& b) {
    return (a - b).norm();
}

} // namespace uavsim

#endif
