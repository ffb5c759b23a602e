#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "epstein_kit/core.hpp"

namespace ek {

// Real scalar field with a 2-jet at every point of its domain.
class ScalarField {
public:
    virtual ~ScalarField() = default;
    virtual Jet2 jet(cplx z) const = 0;
    // Distance over which the field changes appreciably; sizes difference steps.
    virtual double length_scale(cplx) const { return 1.0; }
};

using ScalarFieldPtr = std::shared_ptr<const ScalarField>;

class ConstantField : public ScalarField {
public:
    explicit ConstantField(double c) : c_(c) {}
    Jet2 jet(cplx) const override { return Jet2::constant(c_); }

private:
    double c_;
};

// Field given by an explicit jet function.
class LambdaField : public ScalarField {
public:
    LambdaField(std::function<Jet2(cplx)> f, double scale = 1.0) : f_(std::move(f)), scale_(scale) {}
    Jet2 jet(cplx z) const override { return f_(z); }
    double length_scale(cplx) const override { return scale_; }

private:
    std::function<Jet2(cplx)> f_;
    double scale_;
};

class SumField : public ScalarField {
public:
    SumField(ScalarFieldPtr a, ScalarFieldPtr b, double sb = 1.0) : a_(std::move(a)), b_(std::move(b)), sb_(sb) {}
    Jet2 jet(cplx z) const override { return a_->jet(z) + sb_ * b_->jet(z); }
    double length_scale(cplx z) const override;

private:
    ScalarFieldPtr a_, b_;
    double sb_;
};

class ScaledField : public ScalarField {
public:
    ScaledField(ScalarFieldPtr a, double s) : a_(std::move(a)), s_(s) {}
    Jet2 jet(cplx z) const override { return s_ * a_->jet(z); }
    double length_scale(cplx z) const override { return a_->length_scale(z); }

private:
    ScalarFieldPtr a_;
    double s_;
};

// One term amp * cos(2 pi (m x + n y) + phase) of a doubly periodic polynomial.
struct TrigTerm {
    double amp = 0;
    int m = 0, n = 0;
    double phase = 0;
};

// Constant plus a trigonometric polynomial, periodic on the unit square.
class TrigField : public ScalarField {
public:
    TrigField(double offset, std::vector<TrigTerm> terms);
    Jet2 jet(cplx z) const override;
    double length_scale(cplx) const override;
    double offset() const { return offset_; }
    const std::vector<TrigTerm>& terms() const { return terms_; }

private:
    double offset_;
    std::vector<TrigTerm> terms_;
};

ScalarFieldPtr constant_field(double c);
ScalarFieldPtr sum(ScalarFieldPtr a, ScalarFieldPtr b);
ScalarFieldPtr difference(ScalarFieldPtr a, ScalarFieldPtr b);
ScalarFieldPtr scaled(ScalarFieldPtr a, double s);

// Angular profile h(theta) on (0, pi) with two derivatives.
class AngularProfile {
public:
    virtual ~AngularProfile() = default;
    struct Jet {
        double h, h1, h2;
    };
    virtual Jet at(double theta) const = 0;
    virtual std::string name() const = 0;
};

using AngularProfilePtr = std::shared_ptr<const AngularProfile>;

// h = -a log sin(theta); a = 1 is the hyperbolic profile, a = 2 the doubled one.
AngularProfilePtr log_sin_profile(double a);
// Cubic B-spline through samples h_k at equally spaced interior angles.
AngularProfilePtr table_profile(double theta0, double dtheta, std::vector<double> samples);

enum class Domain { plane, disk, uhp, torus, box };

// Conformal metric e^{2 phi} |dz|^2 on a planar domain.
class MetricField {
public:
    MetricField() = default;
    MetricField(std::string name, ScalarFieldPtr phi, Domain domain, bool complete = false);

    const std::string& name() const { return name_; }
    Domain domain() const { return domain_; }
    bool complete() const { return complete_; }
    const ScalarFieldPtr& phi() const { return phi_; }

    bool inside(cplx z) const;
    // Throws DomainError outside the domain.
    Jet2 jet(cplx z) const;
    double density(cplx z) const;
    double length_scale(cplx z) const;

    // Bounded rectangle for Domain::box metrics (sampled grids).
    MetricField& with_box(double x0, double x1, double y0, double y1);

private:
    std::string name_;
    ScalarFieldPtr phi_;
    Domain domain_ = Domain::plane;
    bool complete_ = false;
    double bx0_ = 0, bx1_ = 0, by0_ = 0, by1_ = 0;
};

namespace catalog {
MetricField euclidean();
MetricField hyperbolic_disk();
MetricField hyperbolic_uhp();
MetricField spherical();
MetricField power_cone(AngularProfilePtr h);
MetricField torus_bump(double offset, std::vector<TrigTerm> terms);
// Default torus bump used by tests and the CLI.
MetricField torus_bump();
// Hyperbolic disk metric times e^{2b} with b the default bump without its offset.
MetricField disk_bump();
// Metric by catalog name; params are name specific (see config docs).
MetricField by_name(const std::string& name);
std::vector<std::string> names();
}  // namespace catalog

double curvature(const MetricField& m, cplx z);
double curvature(const Jet2& phi);
double laplacian(const MetricField& m, const ScalarField& u, cplx z);
double gradient_norm_sq(const MetricField& m, const ScalarField& u, cplx z);
MetricField conformal_change(const MetricField& m, ScalarFieldPtr u);

// Evaluation grid with quadrature weights against dx dy.
struct Chart {
    enum class Kind { rectangle, disk, uhp, torus };
    Kind kind = Kind::rectangle;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    cplx center = 0;
    double radius = 1;
    int nx = 64, ny = 64;  // disk: nx radial, ny angular

    static Chart rectangle(double x0, double x1, double y0, double y1, int nx, int ny);
    static Chart uhp(double x0, double x1, double y0, double y1, int nx, int ny);
    static Chart disk(cplx center, double radius, int nr, int ntheta);
    static Chart torus(int nx, int ny);

    struct Node {
        cplx z;
        double w;
        int i, j;
    };
    // Row-major nodes (i fastest). For disk charts over complete metrics the
    // radius is clamped to radius * (1 - 3 / nr).
    std::vector<Node> nodes(bool clamp_disk = false) const;
    Chart refined(int factor = 2) const;
    Chart transposed() const;
};

// Integral of f dA_m over the chart by the composite rule of its kind.
double quadrature(const MetricField& m, const Chart& chart, const std::function<double(cplx)>& f);
// Weighted sum over precomputed samples (aligned with chart.nodes()); NaN/Inf rejected.
double quadrature_samples(const std::vector<Chart::Node>& nodes, const std::vector<double>& f);
// Two-level Richardson extrapolation for a rule of the given order.
double richardson(double coarse, double fine, int order = 2);

// Log-density sampled on a rectangular grid; jets by 4th-order differences
// (one-sided at the margins), bicubic interpolation between nodes.
class GridField : public ScalarField {
public:
    GridField(int nx, int ny, double x0, double x1, double y0, double y1, std::vector<double> values);
    Jet2 jet(cplx z) const override;
    double length_scale(cplx) const override;
    Jet2 node_jet(int i, int j) const { return jets_[static_cast<std::size_t>(j) * nx_ + i]; }
    cplx node(int i, int j) const;
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double x0() const { return x0_; }
    double x1() const { return x1_; }
    double y0() const { return y0_; }
    double y1() const { return y1_; }
    const std::vector<double>& values() const { return values_; }

private:
    int nx_, ny_;
    double x0_, x1_, y0_, y1_, hx_, hy_;
    std::vector<double> values_;
    std::vector<Jet2> jets_;
};

MetricField sampled_metric(std::string name, std::shared_ptr<const GridField> grid);
// Samples phi of m on a rectangle grid (for round-trips and FD comparisons).
std::shared_ptr<GridField> sample_phi(const MetricField& m, int nx, int ny, double x0, double x1,
                                      double y0, double y1);

}  // namespace ek
