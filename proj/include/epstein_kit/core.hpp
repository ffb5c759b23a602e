#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace ek {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

// Real 2-jet of a scalar field: value, gradient and Hessian in (x, y).
struct Jet2 {
    double v = 0, x = 0, y = 0, xx = 0, xy = 0, yy = 0;

    // Wirtinger derivatives from real partials (the field is real-valued).
    cplx dz() const { return 0.5 * cplx(x, -y); }
    cplx dzz() const { return 0.25 * cplx(xx - yy, -2.0 * xy); }
    double dzzbar() const { return 0.25 * (xx + yy); }

    Jet2& operator+=(const Jet2& o) {
        v += o.v; x += o.x; y += o.y; xx += o.xx; xy += o.xy; yy += o.yy;
        return *this;
    }
    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator*(double s, Jet2 a) {
        a.v *= s; a.x *= s; a.y *= s; a.xx *= s; a.xy *= s; a.yy *= s;
        return a;
    }
    friend Jet2 operator-(const Jet2& a) { return -1.0 * a; }
    friend Jet2 operator-(const Jet2& a, const Jet2& b) { return a + (-b); }

    static Jet2 constant(double c) { return {c, 0, 0, 0, 0, 0}; }

    // 2-jet of Re g for a holomorphic g with derivatives g1 = g', g2 = g''.
    static Jet2 real_part(cplx g0, cplx g1, cplx g2) {
        return {g0.real(), g1.real(), -g1.imag(), g2.real(), -g2.imag(), -g2.real()};
    }
};

// Composition s(u) of a smooth scalar function with a jet, given s, s', s''.
inline Jet2 compose(const Jet2& u, double s0, double s1, double s2) {
    return {s0,
            s1 * u.x,
            s1 * u.y,
            s2 * u.x * u.x + s1 * u.xx,
            s2 * u.x * u.y + s1 * u.xy,
            s2 * u.y * u.y + s1 * u.yy};
}

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input rejected by a precondition (non-conformal metric, asymmetric B, ...).
struct InputError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

struct DegeneratePair : Error {
    using Error::Error;
};

struct DegenerateDual : Error {
    double eigenvalue;
    DegenerateDual(const std::string& what, double ev) : Error(what), eigenvalue(ev) {}
};

struct SingularTime : Error {
    double t;
    SingularTime(const std::string& what, double t_) : Error(what), t(t_) {}
};

struct CriticalPoint : Error {
    using Error::Error;
};

struct EnvelopeDegenerate : Error {
    using Error::Error;
};

struct NoSurface : Error {
    using Error::Error;
};

struct QuadratureError : Error {
    int i, j;
    QuadratureError(const std::string& what, int i_, int j_) : Error(what), i(i_), j(j_) {}
};

struct CriterionUnavailable : Error {
    using Error::Error;
};

struct InversionFailure : Error {
    using Error::Error;
};

struct StepRejected : Error {
    using Error::Error;
};

struct PreconditionFailed : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace ek
