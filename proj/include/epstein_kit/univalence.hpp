#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "epstein_kit/epstein.hpp"

namespace ek {

enum class Classification { no_conclusion, univalent_continuous, homeomorphic_extension, qc_extension };

const char* classification_name(Classification c);

struct CriterionReport {
    // sup of 4 ||Q|| / (-K); 1 where K = Q = 0, +inf where K >= 0 otherwise.
    double sup_ratio = 0;
    Classification classification = Classification::no_conclusion;
    double k = 0;  // dilatation bound, meaningful for qc_extension
    cplx witness = 0;
    std::size_t points = 0;
    bool negatively_curved = true;  // K < 0 at every grid point
};

struct ClassifyOptions {
    bool want_qc = true;  // throws CriterionUnavailable if K >= 0 somewhere
    double slack = 1e-9;
};

// Pointwise ratio 4 ||Q|| / (-K) with the conventions above.
double criterion_ratio(const ProjectiveStructure& s, const MetricField& m, cplx z);

// Requires a complete metric on the disk or upper half plane. Disk charts are
// clamped away from the boundary as in quadrature.
CriterionReport classify(const ProjectiveStructure& s, const MetricField& m, const Chart& chart,
                         const ClassifyOptions& opts = {});

// |h'^2 + c^2 - h''| <= h'' + slack at theta.
bool zc_pointwise(cplx c, const AngularProfile& h, double theta, double slack = 1e-9);

struct CGrid {
    double re0 = -0.2, re1 = 2.2, im0 = -1.2, im1 = 1.2;
    int nre = 400, nim = 400;
    cplx at(int i, int j) const;
    double dre() const { return (re1 - re0) / (nre - 1); }
    double dim() const { return (im1 - im0) / (nim - 1); }
};

struct RegionMask {
    CGrid grid;
    std::vector<std::uint8_t> mask;  // row-major, Re c fastest
    bool at(int i, int j) const { return mask[std::size_t(j) * grid.nre + i] != 0; }
    std::size_t count() const;
};

// theta_k = pi k / ntheta for k = 1 .. ntheta - 1; ntheta is rounded up to an even
// number so that pi / 2 is a sample.
RegionMask region_scan(const AngularProfile& h, const CGrid& grid, int ntheta = 512, double slack = 1e-9);

std::string region_csv(const RegionMask& r);
// Outline of the mask as polylines along cell edges between set and unset nodes.
std::vector<std::vector<cplx>> region_outline(const RegionMask& r);
std::string region_svg(const RegionMask& r);

// Second Gauss map at 1/conj(z), for |z| > 1 with (s, m) on the unit disk; (inf, inf)
// where the extension takes the value infinity.
cplx qc_extension(const ProjectiveStructure& s, const MetricField& m, cplx z);

// Complex dilatation f_zbar / f_z of a planar map by central differences.
cplx beltrami_fd(const std::function<cplx(cplx)>& f, cplx z, double h);

// H = F o C o F^{-1} with C(z) = 1/conj(z) and F = f on the disk, f_ext outside.
// F^{-1} starts from the nearest sample of a polar table and refines by Newton
// steps with a difference Jacobian.
class QcReflection {
public:
    QcReflection(ProjectiveStructure s, MetricField m, double rmax = 3.0, int nr = 96, int ntheta = 192);
    cplx extended(cplx z) const;  // F
    cplx preimage(cplx w) const;  // F^{-1}, throws InversionFailure
    cplx operator()(cplx w) const;

private:
    ProjectiveStructure s_;
    MetricField m_;
    double rmax_;
    std::vector<cplx> nodes_, values_;
};

cplx qc_reflection(const ProjectiveStructure& s, const MetricField& m, cplx z);

}  // namespace ek
