#pragma once

#include <optional>
#include <variant>

#include "wulff/anisotropy.hpp"
#include "wulff/fields.hpp"

namespace wulff {

/// Decreasing rearrangement of the gradient symmetrization: on each piece of
/// the underlying nondecreasing gradient staircase g_* the profile is
///   value(s) = a_i - (w_i / kappa^(1/n)) s^(1/n),  s in [breaks[i], breaks[i+1]),
/// continuous across pieces, with value(|Omega|) = c0. Stored analytically so
/// every downstream integral is closed-form.
class GradientProfile {
public:
    GradientProfile(const StaircaseProfile& gstar, double singular_mass, int dimension,
                    double kappa);

    int dimension() const { return n_; }
    double domain() const { return breaks_.back(); }
    double boundary_value() const { return c0_; }

    double eval(double s) const;       // clamps to [0, domain]
    double sup_value() const { return offsets_.front(); } // value at s = 0
    double integral() const;           // L1 norm of the symmetrized function
    /// integral of g_*^p over [0, domain] = anisotropic Dirichlet energy of
    /// the symmetrized function with exponent p.
    double gradient_energy(double p) const;

    /// The underlying gradient staircase (equidistributed with H(grad u)).
    StaircaseProfile gradient_staircase() const;
    /// g_*(s), the H(grad)-value the profile realizes at measure s.
    double gradient_value(double s) const;

private:
    int n_ = 2;
    double kappa_ = 0.0, c0_ = 0.0;
    std::vector<double> breaks_;  // k + 1
    std::vector<double> slopes_;  // k, the staircase values w_i
    std::vector<double> offsets_; // k, the a_i
};

enum class Direction { Decreasing, Increasing };

/// A function on the Wulff ball W_R given by a one-dimensional profile in the
/// measure coordinate s = kappa_n Hpolar(x)^n. Plain symmetrizations carry a
/// staircase profile; gradient rearrangements carry a GradientProfile.
class SymmetrizedFunction {
public:
    SymmetrizedFunction(AnisotropicNorm norm, WulffGeometry geom, double omega,
                        StaircaseProfile profile);
    SymmetrizedFunction(AnisotropicNorm norm, WulffGeometry geom, double omega,
                        GradientProfile profile);

    const AnisotropicNorm& norm() const { return norm_; }
    const WulffGeometry& geometry() const { return geom_; }
    double omega() const { return omega_; }     // |Omega| = |Omega*|
    double radius() const { return radius_; }   // kappa_n R^n = |Omega|
    double boundary_value() const;              // c0, or 0 for plain staircases

    bool has_gradient_profile() const;
    const GradientProfile& gradient_profile() const;
    const StaircaseProfile& staircase_profile() const;

    double value_at_measure(double s) const;
    /// Pointwise evaluation via profile(kappa Hpolar(x)^n); zero extension
    /// outside the closed Wulff ball.
    double value_at(double x, double y) const;

    double l1_norm() const;
    /// integral over W_R of H(grad)^p; exact for gradient profiles.
    double gradient_energy(double p) const;

    /// Sampled grid over the bounding box of W_R with mask {Hpolar < R}.
    GridField sample_to_grid(int resolution) const;

private:
    AnisotropicNorm norm_;
    WulffGeometry geom_;
    double omega_ = 0.0, radius_ = 0.0;
    std::variant<StaircaseProfile, GradientProfile> profile_;
};

/// u-sharp: the plain anisotropic symmetrization u*(kappa_n Hpolar(x)^n)
/// (or the increasing variant).
SymmetrizedFunction anisotropic_symmetrization(const GridField& field,
                                               const AnisotropicNorm& norm,
                                               const WulffGeometry& geom,
                                               Direction direction = Direction::Decreasing);

/// |D^s u|_H = sum over segments of |amplitude| length H(normal).
double singular_mass(const JumpSet& jumps, const AnisotropicNorm& norm);

/// The central construction: profile
///   (u*)^*(s) = integral_s^{|Omega|} g_*(t) / (n kappa^(1/n) t^(1-1/n)) dt
///             + M / (n kappa^(1/n) |Omega|^(1-1/n)),
/// evaluated in closed form per staircase piece.
SymmetrizedFunction gradient_symmetrization(const StaircaseProfile& gstar, double singular_mass,
                                            double omega_measure, const AnisotropicNorm& norm,
                                            const WulffGeometry& geom);

/// Full pipeline: g = H(grad^a u) per cell, g_* by increasing rearrangement,
/// M from the declared jumps, then gradient_symmetrization.
SymmetrizedFunction symmetrize_bv(const BVComposite& u, const AnisotropicNorm& norm,
                                  const WulffGeometry& geom);

/// The gradient staircase the pipeline would feed into the construction
/// (increasing rearrangement of H(grad^a u)).
StaircaseProfile gradient_staircase_of(const BVComposite& u, const AnisotropicNorm& norm);

} // namespace wulff
