#pragma once

#include <cmath>

namespace gravdec {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
    friend double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
};

} // namespace gravdec
