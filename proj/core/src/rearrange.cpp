#include "wulff/rearrange.hpp"

#include <algorithm>
#include <cmath>

#include "wulff/error.hpp"

namespace wulff {

GradientProfile::GradientProfile(const StaircaseProfile& gstar, double singular_mass,
                                 int dimension, double kappa)
    : n_(dimension), kappa_(kappa) {
    if (gstar.nonincreasing() && gstar.pieces() > 1 && gstar.min_value() != gstar.max_value())
        throw_error("domain:not-monotone", "gradient staircase must be nondecreasing");
    if (gstar.min_value() < 0.0)
        throw_error("domain:negative-values", "gradient staircase must be nonnegative");
    if (!(singular_mass >= 0.0))
        throw_error("domain:negative-measure", "singular mass must be nonnegative");
    if (!(kappa > 0.0))
        throw_error("domain:out-of-range", "kappa_n must be positive");

    breaks_ = gstar.breaks();
    slopes_ = gstar.piece_values();
    const double omega = breaks_.back();
    const double nd = static_cast<double>(n_);
    const double kroot = std::pow(kappa_, 1.0 / nd);
    c0_ = singular_mass / (nd * kroot * std::pow(omega, 1.0 - 1.0 / nd));

    // Backward accumulation of the piece offsets: the profile value at the
    // right end of piece i is T_i, with T_k = c0 and
    // T_{i-1} = T_i + w_i (tau_i^(1/n) - tau_{i-1}^(1/n)) / kappa^(1/n).
    const std::size_t k = slopes_.size();
    offsets_.assign(k, 0.0);
    double tail = c0_;
    for (std::size_t i = k; i-- > 0;) {
        const double ri = std::pow(breaks_[i + 1], 1.0 / nd);
        offsets_[i] = tail + slopes_[i] * ri / kroot;
        const double rl = std::pow(breaks_[i], 1.0 / nd);
        tail += slopes_[i] * (ri - rl) / kroot;
    }
}

double GradientProfile::eval(double s) const {
    const double omega = breaks_.back();
    if (s <= 0.0) return offsets_.front();
    if (s >= omega) return c0_;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    const std::size_t i = static_cast<std::size_t>((it - breaks_.begin()) - 1);
    const double kroot = std::pow(kappa_, 1.0 / static_cast<double>(n_));
    return offsets_[i] - slopes_[i] * std::pow(s, 1.0 / static_cast<double>(n_)) / kroot;
}

double GradientProfile::integral() const {
    // Per piece: a (s2 - s1) - b n/(n+1) (s2^((n+1)/n) - s1^((n+1)/n)).
    const double nd = static_cast<double>(n_);
    const double kroot = std::pow(kappa_, 1.0 / nd);
    const double q = (nd + 1.0) / nd;
    double acc = 0.0;
    for (std::size_t i = 0; i < slopes_.size(); ++i) {
        const double s1 = breaks_[i], s2 = breaks_[i + 1];
        acc += offsets_[i] * (s2 - s1) -
               slopes_[i] / kroot * (std::pow(s2, q) - std::pow(s1, q)) / q;
    }
    return acc;
}

double GradientProfile::gradient_energy(double p) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < slopes_.size(); ++i)
        acc += std::pow(slopes_[i], p) * (breaks_[i + 1] - breaks_[i]);
    return acc;
}

StaircaseProfile GradientProfile::gradient_staircase() const {
    return StaircaseProfile(breaks_, slopes_, /*nonincreasing=*/false);
}

double GradientProfile::gradient_value(double s) const {
    if (s < 0.0 || s >= domain()) return 0.0;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    return slopes_[static_cast<std::size_t>((it - breaks_.begin()) - 1)];
}

namespace {

double radius_for(const WulffGeometry& geom, double omega) {
    if (!(omega > 0.0))
        throw_error("domain:empty-domain", "|Omega| must be positive");
    return geom.radius_for_volume(omega);
}

} // namespace

SymmetrizedFunction::SymmetrizedFunction(AnisotropicNorm norm, WulffGeometry geom, double omega,
                                         StaircaseProfile profile)
    : norm_(std::move(norm)), geom_(geom), omega_(omega), radius_(radius_for(geom, omega)),
      profile_(std::move(profile)) {}

SymmetrizedFunction::SymmetrizedFunction(AnisotropicNorm norm, WulffGeometry geom, double omega,
                                         GradientProfile profile)
    : norm_(std::move(norm)), geom_(geom), omega_(omega), radius_(radius_for(geom, omega)),
      profile_(std::move(profile)) {}

bool SymmetrizedFunction::has_gradient_profile() const {
    return std::holds_alternative<GradientProfile>(profile_);
}

const GradientProfile& SymmetrizedFunction::gradient_profile() const {
    if (!has_gradient_profile())
        throw_error("domain:out-of-range", "symmetrization carries a staircase profile");
    return std::get<GradientProfile>(profile_);
}

const StaircaseProfile& SymmetrizedFunction::staircase_profile() const {
    if (has_gradient_profile())
        throw_error("domain:out-of-range", "symmetrization carries a gradient profile");
    return std::get<StaircaseProfile>(profile_);
}

double SymmetrizedFunction::boundary_value() const {
    return has_gradient_profile() ? std::get<GradientProfile>(profile_).boundary_value() : 0.0;
}

double SymmetrizedFunction::value_at_measure(double s) const {
    if (has_gradient_profile()) return std::get<GradientProfile>(profile_).eval(s);
    return std::get<StaircaseProfile>(profile_).threshold(s);
}

double SymmetrizedFunction::value_at(double x, double y) const {
    const double hp = norm_.polar2(x, y);
    if (hp > radius_ * (1.0 + 1e-12)) return 0.0; // zero extension
    const double s = geom_.kappa_n * std::pow(hp, geom_.dimension);
    return value_at_measure(std::min(s, omega_));
}

double SymmetrizedFunction::l1_norm() const {
    if (has_gradient_profile()) return std::get<GradientProfile>(profile_).integral();
    return std::get<StaircaseProfile>(profile_).integral();
}

double SymmetrizedFunction::gradient_energy(double p) const {
    return gradient_profile().gradient_energy(p);
}

GridField SymmetrizedFunction::sample_to_grid(int resolution) const {
    if (resolution < 4)
        throw_error("domain:out-of-range", "sampling resolution too small");
    const double L = norm_.bounds().second * radius_ * (1.0 + 2.0 / resolution);
    const double h = 2.0 * L / resolution;
    GridField f = GridField::full(resolution, resolution, -L, -L, h);
    for (int iy = 0; iy < resolution; ++iy)
        for (int ix = 0; ix < resolution; ++ix) {
            const double x = f.cx(ix), y = f.cy(iy);
            const std::size_t id = f.index(ix, iy);
            if (norm_.polar2(x, y) < radius_) {
                f.values[id] = value_at(x, y);
            } else {
                f.mask[id] = 0;
                f.values[id] = 0.0;
            }
        }
    return f;
}

SymmetrizedFunction anisotropic_symmetrization(const GridField& field,
                                               const AnisotropicNorm& norm,
                                               const WulffGeometry& geom, Direction direction) {
    if (norm.dimension() != 2 || geom.dimension != 2)
        throw_error("unsupported:dimension", "grid symmetrization is n = 2 only");
    StaircaseProfile prof = decreasing_rearrangement(field);
    if (direction == Direction::Increasing) prof = prof.reflected();
    return SymmetrizedFunction(norm, geom, field.omega_measure(), std::move(prof));
}

double singular_mass(const JumpSet& jumps, const AnisotropicNorm& norm) {
    jumps.validate();
    double acc = 0.0;
    for (const auto& s : jumps.segments) {
        const Vec2 nu = segment_normal(s.a, s.b);
        acc += std::abs(s.amplitude) * norm2(s.b - s.a) * norm.value2(nu[0], nu[1]);
    }
    return acc;
}

SymmetrizedFunction gradient_symmetrization(const StaircaseProfile& gstar, double singular_mass,
                                            double omega_measure, const AnisotropicNorm& norm,
                                            const WulffGeometry& geom) {
    if (std::abs(gstar.domain() - omega_measure) > 1e-9 * std::max(1.0, omega_measure))
        throw_error("domain:out-of-range", "gradient staircase domain must equal |Omega|");
    return SymmetrizedFunction(
        norm, geom, omega_measure,
        GradientProfile(gstar, singular_mass, geom.dimension, geom.kappa_n));
}

StaircaseProfile gradient_staircase_of(const BVComposite& u, const AnisotropicNorm& norm) {
    const auto grad = ac_gradient(u.ac, u.jumps);
    std::vector<double> g;
    g.reserve(u.ac.cells_inside());
    for (std::size_t i = 0; i < grad.size(); ++i)
        if (u.ac.mask[i]) g.push_back(norm.value2(grad[i][0], grad[i][1]));
    return decreasing_rearrangement(std::move(g), u.ac.cell_area()).reflected();
}

SymmetrizedFunction symmetrize_bv(const BVComposite& u, const AnisotropicNorm& norm,
                                  const WulffGeometry& geom) {
    u.ac.validate();
    u.ac.validate_nonnegative();
    const StaircaseProfile gstar = gradient_staircase_of(u, norm);
    const double mass = singular_mass(u.jumps, norm);
    return gradient_symmetrization(gstar, mass, u.ac.omega_measure(), norm, geom);
}

} // namespace wulff
