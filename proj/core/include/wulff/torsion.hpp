#pragma once

#include <cstdint>
#include <optional>

#include "wulff/anisotropy.hpp"
#include "wulff/fields.hpp"
#include "wulff/geometry.hpp"

namespace wulff {

/// Radial minimizer of the penalized torsion functional on a Wulff ball:
/// dead core W_{r0}, annulus profile with phi'(r) = -(r^n - r0^n)/(n r^(n-1)),
/// phi(R) = 0.
struct RadialMinimizer {
    int dimension = 2;
    double R = 1.0;
    double lambda = 0.0;
    double kappa = 0.0;
    double dead_core_radius = 0.0;
    double value = 0.0;   // minimal functional value
    double torsion = 0.0; // T_F = -value
    bool dense_scan_fallback = false;
    std::vector<double> r_samples, phi_samples;

    double phi(double r) const;
    double phi_prime(double r) const;
};

/// Penalized torsion energy of the annulus profile with dead core r0; the
/// dead-core block integrates in closed form, the annulus by composite
/// Simpson with grid_m intervals.
double radial_torsion_energy(const WulffGeometry& geom, double R, double lambda, double r0,
                             int grid_m = 512);

/// Minimize over the dead-core radius by golden-section search (dense scan
/// fallback when the sampled values are not unimodal).
RadialMinimizer radial_torsion_minimizer(const WulffGeometry& geom, double R, double lambda,
                                         int grid_m = 512);

/// F_Lambda(psi) = 1/2 int H(grad psi)^2 - int psi + Lambda |{H(grad psi) > eta}|
/// on the masked grid, with eta = 1e-8 max(1, max H(grad psi)).
double eval_penalized_functional(const GridField& psi, const AnisotropicNorm& norm,
                                 double lambda);

/// Per-cell weights of the linearized boundary trace functional
/// psi -> integral over the polygon boundary of psi H(nu) dH^1
/// (composite trapezoid along each edge; trace by linear extrapolation from
/// two inward bilinear probes).
std::vector<double> boundary_trace_weights(const GridField& grid, const Polygon& polygon,
                                           const AnisotropicNorm& norm,
                                           int samples_per_edge = 64);

/// |D^s of the zero extension|_H = boundary integral of psi d H_H^1.
double zero_extension_jump(const GridField& psi, const Polygon& polygon,
                           const AnisotropicNorm& norm, int samples_per_edge = 64);

/// G_m(psi) = [int H(grad psi)^2 + (1/m)(boundary integral)^2] / (int |psi|)^2.
double eval_insulation_functional(const GridField& psi, const Polygon& polygon,
                                  const AnisotropicNorm& norm, double m);

enum class TorsionMode { Penalized, Insulation };

struct SaintVenantOptions {
    TorsionMode mode = TorsionMode::Penalized;
    double lambda = 0.0; // penalized
    double m = 1.0;      // insulation
    int trials = 3;
    int max_iterations = 1500;
    std::uint64_t seed = 12345;
    int radial_grid = 512;
    double tol = 1e-6;
    double tol_scale = 1.0;
};

/// Rearranged-competitor relations per trial: Dirichlet equality and support
/// equality at staircase level, boundary equality, L1 comparison.
struct CompetitorRelations {
    double energy_lhs = 0.0, energy_rhs = 0.0;
    double support_lhs = 0.0, support_rhs = 0.0;
    double boundary_dev = 0.0;
    double l1_lhs = 0.0, l1_rhs = 0.0, l1_tol = 0.0;
    bool pass = false;
};

struct TorsionTrial {
    double objective = 0.0; // best F or G value found on Omega
    int iterations = 0;
    bool converged = true;
    CompetitorRelations relations;
};

struct TorsionReport {
    TorsionMode mode = TorsionMode::Penalized;
    double parameter = 0.0;   // lambda or m
    double omega_value = 0.0; // -best F (penalized) or 1/best G (insulation)
    double star_value = 0.0;  // radial value on the area-matched Wulff ball
    double wulff_radius = 0.0;
    double inequality_tol = 0.0;
    bool inequality_pass = false;
    std::vector<TorsionTrial> trials;
    std::optional<RadialMinimizer> radial;

    bool all_pass() const;
};

/// Corollary harness: heuristic grid descent on Omega against the trusted
/// radial value on the area-matched Wulff ball, plus the per-trial competitor
/// relations that drive both corollaries.
TorsionReport saint_venant_compare(const GridField& domain, const Polygon& boundary,
                                   const AnisotropicNorm& norm, const WulffGeometry& geom,
                                   const SaintVenantOptions& opts);

/// Cell-center rasterization of a polygon onto a resolution^2 grid over its
/// padded bounding box.
GridField rasterize_polygon(const Polygon& polygon, int resolution);

} // namespace wulff
