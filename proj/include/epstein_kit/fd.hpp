#pragma once

// Fourth-order central difference stencils on callables of an offset.

#include <complex>
#include <type_traits>

namespace ek::fd {

// Results are materialized as the callable's value type so that expression
// templates (Eigen) never outlive their operands.
template <class F>
auto d1(const F& f, double h) {
    using T = std::decay_t<decltype(f(0.0))>;
    const T a = f(-2 * h), b = f(-h), c = f(h), d = f(2 * h);
    T r = (a - 8.0 * b + 8.0 * c - d) * (1.0 / (12 * h));
    return r;
}

template <class F>
auto d2(const F& f, double h) {
    using T = std::decay_t<decltype(f(0.0))>;
    const T a = f(-2 * h), b = f(-h), c = f(0.0), d = f(h), e = f(2 * h);
    T r = (-a + 16.0 * b - 30.0 * c + 16.0 * d - e) * (1.0 / (12 * h * h));
    return r;
}

// Partial derivatives of g(z) at z0 along x and y.
template <class G>
auto dx(const G& g, std::complex<double> z0, double h) {
    return d1([&](double s) { return g(z0 + std::complex<double>(s, 0)); }, h);
}

template <class G>
auto dy(const G& g, std::complex<double> z0, double h) {
    return d1([&](double s) { return g(z0 + std::complex<double>(0, s)); }, h);
}

template <class G>
auto dxx(const G& g, std::complex<double> z0, double h) {
    return d2([&](double s) { return g(z0 + std::complex<double>(s, 0)); }, h);
}

template <class G>
auto dyy(const G& g, std::complex<double> z0, double h) {
    return d2([&](double s) { return g(z0 + std::complex<double>(0, s)); }, h);
}

template <class G>
auto dxy(const G& g, std::complex<double> z0, double h) {
    return d1([&](double s) { return dy(g, z0 + std::complex<double>(s, 0), h); }, h);
}

}  // namespace ek::fd
