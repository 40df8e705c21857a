#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace wulff {

enum class NormKind { PNorm, WeightedEuclidean, Polytope };

/// Description of an anisotropic norm H. Three families are supported:
///   - PNorm(p) with p in [1, inf]: H(xi) = ||xi||_p
///   - WeightedEuclidean(A), A symmetric positive definite: H(xi) = sqrt(xi' A xi)
///   - Polytope(directions): H(xi) = max_i <d_i, xi>, the support function of
///     the symmetric polytope spanned by the direction set.
struct NormSpec {
    NormKind kind = NormKind::PNorm;
    int dimension = 2;
    double p = 2.0; // PNorm only; infinity() for the max norm
    Eigen::MatrixXd weight;                       // WeightedEuclidean only
    std::vector<std::vector<double>> directions;  // Polytope only

    static NormSpec pnorm(double p, int dimension = 2);
    static NormSpec weighted(const Eigen::MatrixXd& A);
    static NormSpec polytope(std::vector<std::vector<double>> directions);

    /// Textual syntax used by the CLI and config files:
    ///   p:2   p:inf   weighted:a11,a12,a22   polytope:<path>
    static NormSpec parse(const std::string& text, int dimension = 2);

    std::string describe() const;
};

/// Evaluator for a NormSpec. Construction validates the spec and caches the
/// data needed for polar evaluation (dual exponent, inverse weight matrix,
/// vertices of the polar polytope). Immutable and cheap to copy.
class AnisotropicNorm {
public:
    explicit AnisotropicNorm(NormSpec spec);

    int dimension() const { return spec_.dimension; }
    const NormSpec& spec() const { return spec_; }

    /// True when H is differentiable away from 0 (PNorm with 1 < p < inf,
    /// WeightedEuclidean). Crystalline norms evaluate but have no gradient.
    bool smooth() const { return smooth_; }

    double value(std::span<const double> xi) const;
    double polar(std::span<const double> x) const;

    /// Gradient of H at xi != 0. Throws for non-smooth norms.
    std::vector<double> gradient(std::span<const double> xi) const;
    /// Gradient of the polar norm H-degree at x != 0.
    std::vector<double> polar_gradient(std::span<const double> x) const;
    /// Gradient where smooth, a maximizing direction for polytope norms.
    std::vector<double> subgradient(std::span<const double> xi) const;

    /// Equivalence constants alpha <= beta with alpha|xi| <= H(xi) <= beta|xi|.
    /// Exact for all three norm kinds.
    std::pair<double, double> bounds() const { return {alpha_, beta_}; }

    // n = 2 conveniences used by the grid pipelines.
    double value2(double x, double y) const;
    double polar2(double x, double y) const;

private:
    NormSpec spec_;
    bool smooth_ = true;
    double alpha_ = 1.0, beta_ = 1.0;
    double dual_p_ = 2.0;                  // PNorm
    Eigen::MatrixXd weight_inv_;           // WeightedEuclidean
    std::vector<std::vector<double>> polar_vertices_; // Polytope: vertices of {H <= 1}

    void validate_and_prepare();
    double pvalue(std::span<const double> v, double p) const;
};

/// Per-identity maximum deviations over the random sample. The identities are
/// H(grad Hpolar(xi)) = 1, Hpolar(grad H(xi)) = 1 and
/// Hpolar(xi) * grad H(grad Hpolar(xi)) = xi.
struct DualityReport {
    int num_samples = 0;
    double tol = 0.0;
    double max_dev_polar_of_grad = 0.0;   // |Hpolar(grad H) - 1|
    double max_dev_norm_of_polar_grad = 0.0; // |H(grad Hpolar) - 1|
    double max_dev_inversion = 0.0;       // |Hpolar(xi) grad H(grad Hpolar(xi)) - xi| / |xi|
    bool pass = false;
};

DualityReport verify_duality_identities(const AnisotropicNorm& norm, int num_samples,
                                        double tol, std::uint64_t seed = 12345);

/// Geometric constants of the unit Wulff ball {Hpolar < 1}.
struct WulffGeometry {
    int dimension = 2;
    double kappa_n = 0.0;             // Lebesgue measure of the unit Wulff ball
    int quadrature_resolution = 0;
    double kappa_error_estimate = 0.0;

    /// Radius R with kappa_n R^n = volume.
    double radius_for_volume(double volume) const;
};

/// Measure of {Hpolar < 1} by cell counting with 4x-subsampled boundary
/// cells; the error estimate comes from comparing against half resolution.
/// resolution <= 0 selects the default (1024 in n=2, 256 in n=3).
WulffGeometry wulff_constant(const AnisotropicNorm& norm, int resolution = 0);

/// P_H(W_R) = n kappa_n R^(n-1).
double wulff_perimeter(const WulffGeometry& geom, double R);

/// Sampled boundary of {Hpolar = R} in n = 2, counterclockwise.
std::vector<std::array<double, 2>> wulff_boundary(const AnisotropicNorm& norm, double R,
                                                  int num_vertices = 256);

} // namespace wulff
