#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "epstein_kit/duality.hpp"

namespace ek {

// Point of R^{3,1} with <x, y> = x1 y1 + x2 y2 + x3 y3 - x4 y4.
using MinkVec = Eigen::Vector4d;

double mink(const MinkVec& a, const MinkVec& b);
// Hyperbolic distance between hyperboloid points, stable for nearby points.
double hyperbolic_distance(const MinkVec& a, const MinkVec& b);

// (2 Re w, 2 Im w, |w|^2 - 1, |w|^2 + 1) / (1 + |w|^2).
MinkVec sphere_lift(cplx w);

struct NullLift {
    MinkVec xi, xi_x, xi_y;
};

// xi = lambda nu(f(z)) with lambda = e^phi (1 + |f|^2) / (2 |f'|).
NullLift null_lift(const MetricField& m, cplx z);
NullLift null_lift(const ProjectiveStructure& s, const MetricField& m, cplx z);

struct EpsteinJet {
    cplx z;
    MinkVec p, n;
    FundamentalPair hat;   // (m, Bhat)
    FundamentalPair pair;  // dual (g, B)
};

EpsteinJet epstein_point(const MetricField& m, cplx z);
EpsteinJet epstein_point(const ProjectiveStructure& s, const MetricField& m, cplx z);

struct BoundaryPoint {
    cplx z;
    bool infinity = false;
};

struct GaussMaps {
    BoundaryPoint plus, minus;
};

// Boundary point of a future null (or timelike) direction, in the stereographic chart.
BoundaryPoint boundary_point(const MinkVec& v);
GaussMaps gauss_maps(const EpsteinJet& j);

// cosh t p + sinh t n
MinkVec geodesic_flow(const MinkVec& p, const MinkVec& n, double t);

Eigen::Vector3d to_ball(const MinkVec& p);
MinkVec from_ball(const Eigen::Vector3d& b);
// Upper half space with boundary identified to C by the same stereographic chart
// as sphere_lift: the ball is inverted in the sphere of radius sqrt 2 about the
// north pole, then reflected in the boundary plane.
Eigen::Vector3d to_uhs(const MinkVec& p);
MinkVec from_uhs(const Eigen::Vector3d& x);

// Boost taking p to (0, 0, 0, 1).
Eigen::Matrix4d boost_to_origin(const MinkVec& p);
// Pullback to the chart of the visual metric seen from p, through w -> nu(f(w)).
SymTensor2 visual_metric_pullback(const MinkVec& p, const ProjectiveStructure& s, cplx z, double h);

// Parallel transport of the flat connection on TS + R + R along the segment
// [z0, z1] by classical RK4 with the given number of steps.
Eigen::Matrix4d bonnet_transport(const PairField& pf, const MetricField& m, cplx z0, cplx z1, int steps);

struct BonnetOptions {
    int grid_resolution = 0;  // step = path length / max(64, 8 * grid_resolution)
    double gc_tolerance = 1e-6;
};

// Section (0, sinh t, cosh t) at the path end, expressed in the basepoint frame
// (g-orthonormal tangent frame, normal, position) as a vector of R^{3,1}.
MinkVec bonnet_integrate(const MetricField& m, const ProjectiveStructure& s, const std::vector<cplx>& path,
                         double t, const BonnetOptions& opts = {});

// Lorentz frame [dp(e1), dp(e2), n, p] of the envelope surface at z0; multiplying
// a bonnet_integrate result by it aligns the two constructions.
Eigen::Matrix4d epstein_frame(const MetricField& m, const ProjectiveStructure& s, cplx z0);

// Bonnet points over a rectangular grid of nodes, transporting along the basepoint
// row and then along columns, with `steps_per_cell` RK4 steps per grid cell.
std::vector<MinkVec> bonnet_grid(const MetricField& m, const ProjectiveStructure& s, const Chart& chart,
                                 int base_i, int base_j, double t, int steps_per_cell = 8);

enum class Model { ball, uhs };

struct MeshVertex {
    bool valid = false;
    cplx z;
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    MinkVec p = MinkVec::Zero();
    double lambda1 = 0, lambda2 = 0, K = 0, H = 0;
    std::string failure;
};

struct Mesh {
    int nx = 0, ny = 0;
    Model model = Model::ball;
    std::vector<MeshVertex> vertices;          // row-major grid order
    std::vector<std::array<int, 3>> faces;     // indices into vertices
    int failures() const;
};

// Epstein surface of e^{2t} m over a rectangle or UHP chart; failures are holes.
Mesh epstein_mesh(const MetricField& m, const ProjectiveStructure& s, const Chart& chart, Model model,
                  double t = 0);
// OBJ with valid vertices numbered 1.. in row-major order.
std::string mesh_obj(const Mesh& mesh, const std::string& header = "");
std::string mesh_csv(const Mesh& mesh);

}  // namespace ek
