#ifndef RODCTL_SAMPLED_FUNCTION_HPP
#define RODCTL_SAMPLED_FUNCTION_HPP

#include "rodctl/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace rodctl {

/// A scalar function on a closed interval [a, b] held as P uniform samples,
/// endpoints included. P is odd and at least 5, so composite Simpson applies
/// and the reflection x -> a + b - x maps samples onto samples.
template <typename Scalar>
class BasicSampledFunction {
  public:
    using VectorType = VectorX<Scalar>;

    BasicSampledFunction() = default;

    BasicSampledFunction(Scalar lower, Scalar upper, VectorType values)
        : lower_(lower), upper_(upper), values_(std::move(values)) {
        if (!(upper_ > lower_))
            throw InvalidArgument("sampled function: empty interval");
        if (values_.size() < 5 || values_.size() % 2 == 0)
            throw InvalidArgument("sampled function: sample count must be odd and >= 5, got " +
                                  std::to_string(values_.size()));
    }

    template <typename F>
    static BasicSampledFunction from_function(Scalar lower, Scalar upper, Index samples, F&& f) {
        VectorType values(samples);
        const Scalar h = (upper - lower) / Scalar(samples - 1);
        for (Index i = 0; i < samples; ++i) values(i) = f(lower + h * Scalar(i));
        return BasicSampledFunction(lower, upper, std::move(values));
    }

    static BasicSampledFunction constant(Scalar lower, Scalar upper, Index samples, Scalar c) {
        return BasicSampledFunction(lower, upper, VectorType::Constant(samples, c));
    }

    Scalar lower() const { return lower_; }
    Scalar upper() const { return upper_; }
    Index size() const { return values_.size(); }
    Scalar step() const { return (upper_ - lower_) / Scalar(values_.size() - 1); }
    Scalar abscissa(Index i) const { return lower_ + step() * Scalar(i); }

    const VectorType& values() const { return values_; }
    VectorType& values() { return values_; }
    Scalar operator[](Index i) const { return values_(i); }
    Scalar& operator[](Index i) { return values_(i); }
    Scalar front() const { return values_(0); }
    Scalar back() const { return values_(values_.size() - 1); }

    /// Piecewise-linear evaluation between samples.
    Scalar at(Scalar x) const {
        const Scalar h = step();
        const Scalar slack = h * Scalar(1e-9);
        if (x < lower_ - slack || x > upper_ + slack)
            throw DomainError("sampled function: abscissa outside [" + std::to_string(double(lower_)) +
                              ", " + std::to_string(double(upper_)) + "]");
        Scalar s = (x - lower_) / h;
        Index i = static_cast<Index>(std::floor(double(s)));
        if (i < 0) i = 0;
        if (i >= size() - 1) i = size() - 2;
        const Scalar theta = s - Scalar(i);
        return (Scalar(1) - theta) * values_(i) + theta * values_(i + 1);
    }

    VectorType abscissae() const {
        VectorType x(size());
        for (Index i = 0; i < size(); ++i) x(i) = abscissa(i);
        return x;
    }

  private:
    Scalar lower_ = Scalar(0);
    Scalar upper_ = Scalar(1);
    VectorType values_;
};

using SampledFunction = BasicSampledFunction<double>;

/// Second-order finite-difference derivative: central inside, one-sided
/// three-point stencils at both ends.
template <typename Scalar>
BasicSampledFunction<Scalar> derivative(const BasicSampledFunction<Scalar>& f) {
    const Index n = f.size();
    const Scalar inv2h = Scalar(1) / (Scalar(2) * f.step());
    const auto& v = f.values();
    VectorX<Scalar> d(n);
    d(0) = (Scalar(-3) * v(0) + Scalar(4) * v(1) - v(2)) * inv2h;
    for (Index i = 1; i + 1 < n; ++i) d(i) = (v(i + 1) - v(i - 1)) * inv2h;
    d(n - 1) = (Scalar(3) * v(n - 1) - Scalar(4) * v(n - 2) + v(n - 3)) * inv2h;
    return BasicSampledFunction<Scalar>(f.lower(), f.upper(), std::move(d));
}

/// Finite-difference weights for the first derivative at 0 from samples at
/// integer offsets (in units of the step). Fornberg's recursion.
inline Vector fd_weights(const std::vector<double>& offsets, double step) {
    const Index n = static_cast<Index>(offsets.size());
    Matrix c = Matrix::Zero(n, 2);
    double c1 = 1.0, c4 = offsets[0];
    c(0, 0) = 1.0;
    for (Index i = 1; i < n; ++i) {
        const Index mn = std::min<Index>(i, 1);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = offsets[i];
        for (Index j = 0; j < i; ++j) {
            const double c3 = offsets[i] - offsets[j];
            c2 *= c3;
            if (j == i - 1) {
                for (Index k = mn; k >= 1; --k) c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (Index k = mn; k >= 1; --k) c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(1) / step;
}

/// Derivative at sample i from `width` consecutive samples starting at
/// `first` (the window must contain i).
inline double derivative_at(const Vector& values, double step, Index i, Index first, Index width) {
    std::vector<double> offsets(width);
    for (Index j = 0; j < width; ++j) offsets[j] = double(first + j - i);
    return fd_weights(offsets, step).dot(values.segment(first, width));
}

/// Derivative of the given accuracy order (even, >= 2): centered windows
/// inside, shifted one-sided windows near the ends.
inline SampledFunction derivative(const SampledFunction& f, int accuracy) {
    if (accuracy == 2) return derivative<double>(f);
    if (accuracy < 2 || accuracy % 2 != 0 || accuracy + 1 > f.size())
        throw InvalidArgument("derivative: unsupported accuracy order " + std::to_string(accuracy));
    const Index n = f.size();
    const Index width = accuracy + 1;
    Vector d(n);
    for (Index i = 0; i < n; ++i) {
        const Index first = std::clamp<Index>(i - accuracy / 2, 0, n - width);
        d(i) = derivative_at(f.values(), f.step(), i, first, width);
    }
    return SampledFunction(f.lower(), f.upper(), std::move(d));
}

/// Derivative along a sampled line with known kink positions. Stencils stay
/// inside the smooth pieces between kinks (accuracy reduced on short
/// pieces); at a kink the two one-sided values are averaged.
Vector piecewise_derivative(const Vector& values, double step, std::vector<Index> kinks, int accuracy);

/// d/d(row index) of every column, second order.
inline Matrix derivative_columns(const Matrix& values, double step) {
    const Index n = values.rows();
    Matrix d(n, values.cols());
    const double inv = 1.0 / (2.0 * step);
    d.row(0) = (-3.0 * values.row(0) + 4.0 * values.row(1) - values.row(2)) * inv;
    for (Index i = 1; i + 1 < n; ++i) d.row(i) = (values.row(i + 1) - values.row(i - 1)) * inv;
    d.row(n - 1) = (3.0 * values.row(n - 1) - 4.0 * values.row(n - 2) + values.row(n - 3)) * inv;
    return d;
}

/// Four-point Lagrange interpolation; windows shift inward at the ends.
inline double interpolate_cubic(const SampledFunction& f, double x) {
    const double h = f.step();
    const double s = (x - f.lower()) / h;
    if (s < -1e-9 || s > double(f.size() - 1) + 1e-9)
        throw DomainError("interpolate_cubic: abscissa outside the sampled interval");
    const Index first = std::clamp<Index>(static_cast<Index>(std::floor(s)) - 1, 0, f.size() - 4);
    double out = 0.0;
    for (Index a = 0; a < 4; ++a) {
        double basis = 1.0;
        for (Index b = 0; b < 4; ++b)
            if (b != a) basis *= (s - double(first + b)) / double(a - b);
        out += basis * f[first + a];
    }
    return out;
}

/// Composite Simpson weights for an odd number of uniform samples.
template <typename Scalar>
VectorX<Scalar> simpson_weights(Index samples, Scalar step) {
    if (samples < 3 || samples % 2 == 0)
        throw InvalidArgument("simpson weights need an odd sample count");
    VectorX<Scalar> w(samples);
    for (Index i = 0; i < samples; ++i) w(i) = (i % 2 == 1) ? Scalar(4) : Scalar(2);
    w(0) = w(samples - 1) = Scalar(1);
    return w * (step / Scalar(3));
}

template <typename Scalar>
Scalar simpson(const BasicSampledFunction<Scalar>& f) {
    return simpson_weights<Scalar>(f.size(), f.step()).dot(f.values());
}

/// g(x) = f(a + b - x).
template <typename Scalar>
BasicSampledFunction<Scalar> reflect(const BasicSampledFunction<Scalar>& f) {
    return BasicSampledFunction<Scalar>(f.lower(), f.upper(), f.values().reverse());
}

/// F(x) = integral of f from a to x, third-order per interval.
template <typename Scalar>
BasicSampledFunction<Scalar> cumulative_integral(const BasicSampledFunction<Scalar>& f,
                                                 Scalar initial = Scalar(0)) {
    const Index n = f.size();
    const Scalar h = f.step();
    const auto& v = f.values();
    VectorX<Scalar> out(n);
    out(0) = initial;
    for (Index i = 0; i + 1 < n; ++i) {
        Scalar piece;
        if (i + 2 < n)
            piece = h * (Scalar(5) * v(i) + Scalar(8) * v(i + 1) - v(i + 2)) / Scalar(12);
        else
            piece = h * (-v(i - 1) + Scalar(8) * v(i) + Scalar(5) * v(i + 1)) / Scalar(12);
        out(i + 1) = out(i) + piece;
    }
    return BasicSampledFunction<Scalar>(f.lower(), f.upper(), std::move(out));
}

/// Samples [first, first + count) re-wrapped as a function on their own span.
template <typename Scalar>
BasicSampledFunction<Scalar> slice(const BasicSampledFunction<Scalar>& f, Index first, Index count) {
    if (first < 0 || first + count > f.size())
        throw DomainError("sampled function: slice out of range");
    return BasicSampledFunction<Scalar>(f.abscissa(first), f.abscissa(first + count - 1),
                                        f.values().segment(first, count));
}

/// Linear resampling onto a new uniform grid over the same interval.
template <typename Scalar>
BasicSampledFunction<Scalar> resample(const BasicSampledFunction<Scalar>& f, Index samples) {
    return BasicSampledFunction<Scalar>::from_function(f.lower(), f.upper(), samples,
                                                       [&](Scalar x) { return f.at(x); });
}

}  // namespace rodctl

#endif
