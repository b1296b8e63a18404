#pragma once

#include <array>
#include <cmath>

namespace nearunit {

struct Vec2 {
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Row-major 2x2 matrix [[xx, xy], [yx, yy]].
struct Mat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yx = 0.0;
    double yy = 0.0;

    [[nodiscard]] double det() const noexcept { return xx * yy - xy * yx; }

    [[nodiscard]] Mat2 inverse() const noexcept {
        const double d = det();
        return {yy / d, -xy / d, -yx / d, xx / d};
    }

    [[nodiscard]] Mat2 transpose() const noexcept { return {xx, yx, xy, yy}; }

    [[nodiscard]] Vec2 operator*(const Vec2& v) const noexcept {
        return {xx * v.a + xy * v.b, yx * v.a + yy * v.b};
    }

    [[nodiscard]] Mat2 operator*(const Mat2& o) const noexcept {
        return {xx * o.xx + xy * o.yx, xx * o.xy + xy * o.yy,
                yx * o.xx + yy * o.yx, yx * o.xy + yy * o.yy};
    }

    [[nodiscard]] Mat2 operator*(double s) const noexcept { return {xx * s, xy * s, yx * s, yy * s}; }

    [[nodiscard]] std::array<std::array<double, 2>, 2> rows() const { return {{{xx, xy}, {yx, yy}}}; }

    friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// A^{-1} B A^{-1}; the sandwich form shared by the plug-in and robust variances.
[[nodiscard]] inline Mat2 sandwich(const Mat2& bread, const Mat2& meat) {
    const Mat2 inv = bread.inverse();
    return inv * meat * inv;
}

}  // namespace nearunit
