#pragma once

#include <Eigen/Dense>

#include "epstein_kit/core.hpp"

namespace ek {

using Mat2 = Eigen::Matrix2d;

// Endomorphism of the tangent plane, stored in the real basis (d/dx, d/dy).
struct Endo2 {
    Mat2 m = Mat2::Identity();

    static Endo2 identity() { return {Mat2::Identity()}; }
    static Endo2 scalar(double s) { return {s * Mat2::Identity()}; }

    double trace() const { return m.trace(); }
    double det() const { return m.determinant(); }
    Endo2 traceless() const { return {m - 0.5 * m.trace() * Mat2::Identity()}; }
    Endo2 inverse() const;
};

// Symmetric bilinear form, matrix of T(d_i, d_j).
struct SymTensor2 {
    Mat2 m = Mat2::Identity();

    static SymTensor2 euclidean() { return {Mat2::Identity()}; }
    static SymTensor2 conformal(double lambda) { return {lambda * Mat2::Identity()}; }
};

struct Beltrami {
    cplx nu;
};

inline Endo2 operator*(const Endo2& a, const Endo2& b) { return {a.m * b.m}; }

// Change of basis to (d/dz, d/dzbar).
Eigen::Matrix2cd basis_change();
// Complex-basis matrix of an endomorphism (conjugation by the basis change).
Eigen::Matrix2cd complex_matrix(const Endo2& e);
// Complex-basis matrix of a bilinear form, T(d_a, d_b) for a, b in {z, zbar}.
Eigen::Matrix2cd complex_matrix(const SymTensor2& t);

struct Complexified {
    cplx q;
    double sigma;
};

// T = q dz^2 + conj(q) dzbar^2 + sigma * g_euc.
Complexified complexify(const SymTensor2& t);
SymTensor2 reconstruct(const Complexified& c);

// Matrix of the bilinear form (T.E)(X, Y) = T(EX, Y); not symmetric in general.
Mat2 dot(const SymTensor2& t, const Endo2& e);
// A^* g, the form (X, Y) -> g(AX, AY).
SymTensor2 pullback(const Endo2& a, const SymTensor2& g);

bool is_conformal(const SymTensor2& g);

// 1/2 Tr_g(T.E) dA_g as a density against dx^dy, for any positive definite g.
double metric_pairing(const Mat2& t, const Endo2& e, const SymTensor2& g);
// The conformal pairing; rejects g that is not a positive multiple of the identity.
double pairing(const SymTensor2& t, const Endo2& e, const SymTensor2& g);

double area_form(const SymTensor2& g);

struct Strain {
    Endo2 eta;
    Beltrami mu;
};

// Solves dg = 2 g.eta and reads the dz-bar coefficient of the traceless part.
Strain strain(const SymTensor2& g, const SymTensor2& dg);
// The d/dz (x) dzbar coefficient of an endomorphism.
cplx beltrami_coefficient(const Endo2& e);

struct InvertVariation {
    SymTensor2 ghat;
    Endo2 phat;
    SymTensor2 dghat;
    Endo2 dphat;
};

// Induced (ghat, phat) = (P^* g, P^-1) and their exact first variations.
InvertVariation invert_variation(const SymTensor2& g, const Endo2& p, const SymTensor2& dg,
                                 const Endo2& dp);
// Same quantities with the variations taken by central differences of step h.
InvertVariation invert_variation_fd(const SymTensor2& g, const Endo2& p, const SymTensor2& dg,
                                    const Endo2& dp, double h = 1e-5);

// |LHS - RHS| of the variational duality between (g, P) and (P^* g, P^-1).
double variation_duality_residual(const SymTensor2& g, const Endo2& p, const SymTensor2& dg,
                                  const Endo2& dp);
double variation_duality_residual(const SymTensor2& g, const Endo2& p, const SymTensor2& dg,
                                  const Endo2& dp, const InvertVariation& induced);

}  // namespace ek
