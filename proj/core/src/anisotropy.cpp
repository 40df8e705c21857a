#include "wulff/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "wulff/error.hpp"

namespace wulff {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double euclid(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void check_vector(const NormSpec& spec, std::span<const double> v) {
    if (static_cast<int>(v.size()) != spec.dimension)
        throw_error("invalid:dimension-mismatch", "vector dimension does not match norm");
    if (!finite(v))
        throw_error("invalid:non-finite", "non-finite vector component");
}

double dual_exponent(double p) {
    if (p == 1.0) return kInf;
    if (p == kInf) return 1.0;
    return p / (p - 1.0);
}

} // namespace

NormSpec NormSpec::pnorm(double p, int dimension) {
    NormSpec s;
    s.kind = NormKind::PNorm;
    s.p = p;
    s.dimension = dimension;
    return s;
}

NormSpec NormSpec::weighted(const Eigen::MatrixXd& A) {
    NormSpec s;
    s.kind = NormKind::WeightedEuclidean;
    s.weight = A;
    s.dimension = static_cast<int>(A.rows());
    return s;
}

NormSpec NormSpec::polytope(std::vector<std::vector<double>> directions) {
    NormSpec s;
    s.kind = NormKind::Polytope;
    s.directions = std::move(directions);
    s.dimension = s.directions.empty() ? 0 : static_cast<int>(s.directions.front().size());
    return s;
}

NormSpec NormSpec::parse(const std::string& text, int dimension) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw_error("config:bad-norm-spec", "norm spec must look like p:2, weighted:..., polytope:... (got '" + text + "')");
    const std::string head = text.substr(0, colon);
    const std::string body = text.substr(colon + 1);

    if (head == "p") {
        double p;
        if (body == "inf" || body == "Inf" || body == "INF") {
            p = kInf;
        } else {
            try {
                std::size_t used = 0;
                p = std::stod(body, &used);
                if (used != body.size()) throw std::invalid_argument(body);
            } catch (const std::exception&) {
                throw_error("config:bad-norm-spec", "cannot parse p exponent '" + body + "'");
            }
        }
        if (!(p >= 1.0))
            throw_error("config:p-out-of-range", "p-norm exponent must satisfy p >= 1 (got " + body + ")");
        return pnorm(p, dimension);
    }
    if (head == "weighted") {
        std::vector<double> a;
        std::stringstream ss(body);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                a.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw_error("config:bad-norm-spec", "cannot parse weighted entry '" + tok + "'");
            }
        }
        if (a.size() != 3)
            throw_error("config:bad-norm-spec", "weighted:<a11,a12,a22> expects three entries (n = 2)");
        Eigen::MatrixXd A(2, 2);
        A << a[0], a[1], a[1], a[2];
        return weighted(A);
    }
    if (head == "polytope") {
        std::ifstream in(body);
        if (!in)
            throw_error("io:file-not-found", "cannot open direction file '" + body + "'");
        std::vector<std::vector<double>> dirs;
        std::string line;
        while (std::getline(in, line)) {
            std::stringstream ls(line);
            std::vector<double> d;
            double x;
            while (ls >> x) d.push_back(x);
            if (d.empty()) continue; // blank line
            dirs.push_back(std::move(d));
        }
        return polytope(std::move(dirs));
    }
    throw_error("config:unknown-norm-kind", "unknown norm kind '" + head + "'");
}

std::string NormSpec::describe() const {
    std::ostringstream os;
    switch (kind) {
    case NormKind::PNorm:
        os << "p:";
        if (p == kInf) os << "inf"; else os << p;
        break;
    case NormKind::WeightedEuclidean:
        os << "weighted:" << weight(0, 0) << "," << weight(0, 1) << "," << weight(1, 1);
        break;
    case NormKind::Polytope:
        os << "polytope:" << directions.size() << "-dirs";
        break;
    }
    return os.str();
}

AnisotropicNorm::AnisotropicNorm(NormSpec spec) : spec_(std::move(spec)) {
    validate_and_prepare();
}

void AnisotropicNorm::validate_and_prepare() {
    const int n = spec_.dimension;
    if (n < 2)
        throw_error("config:bad-norm-spec", "norm dimension must be at least 2");

    switch (spec_.kind) {
    case NormKind::PNorm: {
        if (!(spec_.p >= 1.0))
            throw_error("config:p-out-of-range", "p-norm exponent must satisfy p >= 1");
        dual_p_ = dual_exponent(spec_.p);
        smooth_ = spec_.p > 1.0 && spec_.p < kInf;
        // p-norm vs Euclidean norm equivalence constants.
        const double nn = static_cast<double>(n);
        if (spec_.p >= 2.0) {
            alpha_ = (spec_.p == kInf) ? std::pow(nn, -0.5) : std::pow(nn, 1.0 / spec_.p - 0.5);
            beta_ = 1.0;
        } else {
            alpha_ = 1.0;
            beta_ = std::pow(nn, 1.0 / spec_.p - 0.5);
        }
        break;
    }
    case NormKind::WeightedEuclidean: {
        if (spec_.weight.rows() != n || spec_.weight.cols() != n)
            throw_error("config:bad-matrix", "weight matrix shape does not match dimension");
        if (!spec_.weight.isApprox(spec_.weight.transpose(), 1e-12))
            throw_error("config:bad-matrix", "weight matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec_.weight);
        if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
            throw_error("config:not-spd", "weight matrix must be positive definite");
        weight_inv_ = spec_.weight.inverse();
        alpha_ = std::sqrt(es.eigenvalues().minCoeff());
        beta_ = std::sqrt(es.eigenvalues().maxCoeff());
        smooth_ = true;
        break;
    }
    case NormKind::Polytope: {
        const auto& dirs = spec_.directions;
        if (dirs.empty())
            throw_error("config:bad-directions", "polytope norm needs at least one direction");
        for (const auto& d : dirs) {
            if (static_cast<int>(d.size()) != n)
                throw_error("config:bad-directions", "direction dimension mismatch");
            if (!finite(d) || euclid(d) == 0.0)
                throw_error("config:bad-directions", "directions must be finite and nonzero");
        }
        // Closed under negation.
        for (const auto& d : dirs) {
            bool found = false;
            for (const auto& e : dirs) {
                double dev = 0.0;
                for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(d[i] + e[i]));
                if (dev <= 1e-12 * (1.0 + euclid(d))) { found = true; break; }
            }
            if (!found)
                throw_error("config:bad-directions", "direction set must be closed under negation");
        }
        // Spans R^n.
        Eigen::MatrixXd D(dirs.size(), n);
        for (std::size_t i = 0; i < dirs.size(); ++i)
            for (int j = 0; j < n; ++j) D(static_cast<Eigen::Index>(i), j) = dirs[i][j];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
        if (svd.rank() < n)
            throw_error("config:bad-directions", "direction set must span the space");
        smooth_ = false;

        // Vertices of the polar polytope {xi : <d_i, xi> <= 1 for all i}.
        // H(xi) <= 1 is exactly this set, so Hpolar is its support function.
        if (n > 3)
            throw_error("unsupported:dimension", "polytope norms supported in n = 2, 3 only");
        const std::size_t m = dirs.size();
        auto feasible = [&](const Eigen::VectorXd& v) {
            for (const auto& d : dirs) {
                double s = 0.0;
                for (int i = 0; i < n; ++i) s += d[i] * v[i];
                if (s > 1.0 + 1e-9) return false;
            }
            return true;
        };
        std::vector<std::vector<double>> verts;
        auto push_vertex = [&](const Eigen::VectorXd& v) {
            for (const auto& w : verts) {
                double dev = 0.0;
                for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(w[i] - v[i]));
                if (dev <= 1e-9 * (1.0 + v.cwiseAbs().maxCoeff())) return;
            }
            std::vector<double> vv(v.data(), v.data() + n);
            verts.push_back(std::move(vv));
        };
        if (n == 2) {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j) {
                    Eigen::Matrix2d M;
                    M << dirs[i][0], dirs[i][1], dirs[j][0], dirs[j][1];
                    if (std::abs(M.determinant()) < 1e-12) continue;
                    Eigen::Vector2d v = M.inverse() * Eigen::Vector2d::Ones();
                    if (feasible(v)) push_vertex(v);
                }
        } else {
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = i + 1; j < m; ++j)
                    for (std::size_t k = j + 1; k < m; ++k) {
                        Eigen::Matrix3d M;
                        M << dirs[i][0], dirs[i][1], dirs[i][2],
                             dirs[j][0], dirs[j][1], dirs[j][2],
                             dirs[k][0], dirs[k][1], dirs[k][2];
                        if (std::abs(M.determinant()) < 1e-12) continue;
                        Eigen::Vector3d v = M.inverse() * Eigen::Vector3d::Ones();
                        if (feasible(v)) push_vertex(v);
                    }
        }
        if (verts.empty())
            throw_error("config:bad-directions", "polar polytope has no vertices (degenerate direction set)");
        polar_vertices_ = std::move(verts);

        double beta = 0.0;
        for (const auto& d : dirs) beta = std::max(beta, euclid(d));
        double circum = 0.0;
        for (const auto& v : polar_vertices_) circum = std::max(circum, euclid(v));
        beta_ = beta;
        alpha_ = 1.0 / circum;
        break;
    }
    }
}

double AnisotropicNorm::pvalue(std::span<const double> v, double p) const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    if (m == 0.0) return 0.0;
    if (p == kInf) return m;
    if (p == 1.0) {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double x : v) { const double r = x / m; s += r * r; }
        return m * std::sqrt(s);
    }
    double s = 0.0;
    for (double x : v) s += std::pow(std::abs(x) / m, p);
    return m * std::pow(s, 1.0 / p);
}

double AnisotropicNorm::value(std::span<const double> xi) const {
    check_vector(spec_, xi);
    switch (spec_.kind) {
    case NormKind::PNorm:
        return pvalue(xi, spec_.p);
    case NormKind::WeightedEuclidean: {
        const Eigen::Map<const Eigen::VectorXd> v(xi.data(), spec_.dimension);
        return std::sqrt(v.dot(spec_.weight * v));
    }
    case NormKind::Polytope: {
        double best = 0.0;
        for (const auto& d : spec_.directions) {
            double s = 0.0;
            for (int i = 0; i < spec_.dimension; ++i) s += d[i] * xi[i];
            best = std::max(best, s);
        }
        return best;
    }
    }
    return 0.0;
}

double AnisotropicNorm::polar(std::span<const double> x) const {
    check_vector(spec_, x);
    switch (spec_.kind) {
    case NormKind::PNorm:
        return pvalue(x, dual_p_);
    case NormKind::WeightedEuclidean: {
        const Eigen::Map<const Eigen::VectorXd> v(x.data(), spec_.dimension);
        return std::sqrt(v.dot(weight_inv_ * v));
    }
    case NormKind::Polytope: {
        // Support function of the polar polytope over its cached vertices.
        double best = 0.0;
        for (const auto& w : polar_vertices_) {
            double s = 0.0;
            for (int i = 0; i < spec_.dimension; ++i) s += w[i] * x[i];
            best = std::max(best, s);
        }
        return best;
    }
    }
    return 0.0;
}

namespace {

std::vector<double> pnorm_gradient(std::span<const double> xi, double p, double h) {
    // d/dxi_i (sum |xi_j|^p)^(1/p) = sign(xi_i) |xi_i / H|^(p-1)
    std::vector<double> g(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) {
        const double r = std::abs(xi[i]) / h;
        g[i] = (xi[i] < 0.0 ? -1.0 : (xi[i] > 0.0 ? 1.0 : 0.0)) * std::pow(r, p - 1.0);
    }
    return g;
}

} // namespace

std::vector<double> AnisotropicNorm::gradient(std::span<const double> xi) const {
    check_vector(spec_, xi);
    if (!smooth_)
        throw_error("unsupported:norm", "gradient undefined for non-smooth norm " + spec_.describe());
    const double h = value(xi);
    if (h == 0.0)
        throw_error("domain:zero-vector", "norm gradient undefined at the origin");
    if (spec_.kind == NormKind::PNorm)
        return pnorm_gradient(xi, spec_.p, h);
    const Eigen::Map<const Eigen::VectorXd> v(xi.data(), spec_.dimension);
    Eigen::VectorXd g = spec_.weight * v / h;
    return {g.data(), g.data() + g.size()};
}

std::vector<double> AnisotropicNorm::polar_gradient(std::span<const double> x) const {
    check_vector(spec_, x);
    if (!smooth_)
        throw_error("unsupported:norm", "polar gradient undefined for non-smooth norm " + spec_.describe());
    const double h = polar(x);
    if (h == 0.0)
        throw_error("domain:zero-vector", "polar gradient undefined at the origin");
    if (spec_.kind == NormKind::PNorm)
        return pnorm_gradient(x, dual_p_, h);
    const Eigen::Map<const Eigen::VectorXd> v(x.data(), spec_.dimension);
    Eigen::VectorXd g = weight_inv_ * v / h;
    return {g.data(), g.data() + g.size()};
}

std::vector<double> AnisotropicNorm::subgradient(std::span<const double> xi) const {
    if (smooth_) return gradient(xi);
    check_vector(spec_, xi);
    if (spec_.kind == NormKind::Polytope) {
        double best = -kInf;
        const std::vector<double>* arg = nullptr;
        for (const auto& d : spec_.directions) {
            double s = 0.0;
            for (int i = 0; i < spec_.dimension; ++i) s += d[i] * xi[i];
            if (s > best) { best = s; arg = &d; }
        }
        return *arg;
    }
    // PNorm with p = 1 or inf: subgradient of the max/sum form.
    std::vector<double> g(xi.size(), 0.0);
    if (spec_.p == 1.0) {
        for (std::size_t i = 0; i < xi.size(); ++i)
            g[i] = xi[i] > 0.0 ? 1.0 : (xi[i] < 0.0 ? -1.0 : 0.0);
    } else {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < xi.size(); ++i)
            if (std::abs(xi[i]) > std::abs(xi[arg])) arg = i;
        g[arg] = xi[arg] >= 0.0 ? 1.0 : -1.0;
    }
    return g;
}

double AnisotropicNorm::value2(double x, double y) const {
    const double v[2] = {x, y};
    return value(std::span<const double>(v, 2));
}

double AnisotropicNorm::polar2(double x, double y) const {
    const double v[2] = {x, y};
    return polar(std::span<const double>(v, 2));
}

DualityReport verify_duality_identities(const AnisotropicNorm& norm, int num_samples,
                                        double tol, std::uint64_t seed) {
    if (!norm.smooth())
        throw_error("unsupported:norm", "duality identities need a smooth norm");
    const int n = norm.dimension();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> radius(0.5, 2.0);

    DualityReport rep;
    rep.num_samples = num_samples;
    rep.tol = tol;
    std::vector<double> xi(n);
    for (int s = 0; s < num_samples; ++s) {
        double len = 0.0;
        do {
            for (int i = 0; i < n; ++i) xi[i] = gauss(rng);
            len = euclid(xi);
        } while (len < 1e-8);
        const double r = radius(rng) / len;
        for (int i = 0; i < n; ++i) xi[i] *= r;

        const auto g = norm.gradient(xi);
        rep.max_dev_polar_of_grad =
            std::max(rep.max_dev_polar_of_grad, std::abs(norm.polar(g) - 1.0));

        const auto pg = norm.polar_gradient(xi);
        rep.max_dev_norm_of_polar_grad =
            std::max(rep.max_dev_norm_of_polar_grad, std::abs(norm.value(pg) - 1.0));

        const auto gpg = norm.gradient(pg);
        const double hp = norm.polar(xi);
        double dev = 0.0;
        for (int i = 0; i < n; ++i) {
            const double d = hp * gpg[i] - xi[i];
            dev += d * d;
        }
        rep.max_dev_inversion = std::max(rep.max_dev_inversion, std::sqrt(dev) / euclid(xi));
    }
    rep.pass = rep.max_dev_polar_of_grad <= tol && rep.max_dev_norm_of_polar_grad <= tol &&
               rep.max_dev_inversion <= tol;
    return rep;
}

double WulffGeometry::radius_for_volume(double volume) const {
    if (!(volume > 0.0))
        throw_error("domain:empty-domain", "volume must be positive");
    return std::pow(volume / kappa_n, 1.0 / dimension);
}

namespace {

// Length of {f < 1} within [y0, y1] for f convex along the segment.
// Used to resolve boundary cells column by column.
template <typename F>
double inside_length(const F& f, double y0, double y1, double f0, double f1) {
    const auto bisect = [&](double lo, double hi, double flo) {
        // crossing of f = 1 between lo (flo side) and hi
        for (int it = 0; it < 52; ++it) {
            const double mid = 0.5 * (lo + hi);
            if ((f(mid) < 1.0) == (flo < 1.0)) lo = mid; else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    const bool in0 = f0 < 1.0, in1 = f1 < 1.0;
    if (in0 && in1) return y1 - y0; // convexity: whole segment inside
    if (in0 && !in1) return bisect(y0, y1, f0) - y0;
    if (!in0 && in1) return y1 - bisect(y1, y0, f1);
    // Both endpoints outside: the convex function may still dip below 1.
    double lo = y0, hi = y1;
    for (int it = 0; it < 40; ++it) {
        const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (f(m1) <= f(m2)) hi = m2; else lo = m1;
    }
    const double ymin = 0.5 * (lo + hi);
    if (f(ymin) >= 1.0) return 0.0;
    return bisect(ymin, y1, f(ymin)) - bisect(ymin, y0, f(ymin));
}

double wulff_measure_2d(const AnisotropicNorm& norm, double L, int N) {
    const double h = 2.0 * L / N;
    std::vector<double> corner((N + 1) * (N + 1));
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= N; ++i)
            corner[j * (N + 1) + i] = norm.polar2(-L + i * h, -L + j * h);

    double area = 0.0;
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            const double c00 = corner[j * (N + 1) + i];
            const double c10 = corner[j * (N + 1) + i + 1];
            const double c01 = corner[(j + 1) * (N + 1) + i];
            const double c11 = corner[(j + 1) * (N + 1) + i + 1];
            const int inside = (c00 < 1.0) + (c10 < 1.0) + (c01 < 1.0) + (c11 < 1.0);
            if (inside == 4) { area += h * h; continue; }
            const double cmin = std::min(std::min(c00, c10), std::min(c01, c11));
            if (inside == 0 && cmin > 1.2) continue; // clearly outside
            // Boundary cell: 4 subcolumns, inside length along y per column.
            const double x0 = -L + i * h, y0 = -L + j * h;
            for (int c = 0; c < 4; ++c) {
                const double x = x0 + (c + 0.5) * h / 4.0;
                const auto f = [&](double y) { return norm.polar2(x, y); };
                area += (h / 4.0) * inside_length(f, y0, y0 + h, f(y0), f(y0 + h));
            }
        }
    }
    return area;
}

double wulff_measure_3d(const AnisotropicNorm& norm, double L, int N) {
    const double h = 2.0 * L / N;
    const auto px = [&](int i) { return -L + i * h; };
    // Corner values for one z-slab at a time to bound memory.
    std::vector<double> slab0((N + 1) * (N + 1)), slab1((N + 1) * (N + 1));
    auto fill = [&](std::vector<double>& s, int k) {
        const double z = px(k);
        for (int j = 0; j <= N; ++j)
            for (int i = 0; i <= N; ++i) {
                const double v[3] = {px(i), px(j), z};
                s[j * (N + 1) + i] = norm.polar(std::span<const double>(v, 3));
            }
    };
    fill(slab0, 0);
    double volume = 0.0;
    for (int k = 0; k < N; ++k) {
        fill(slab1, k + 1);
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                double cmin = kInf;
                int inside = 0;
                for (const auto* s : {&slab0, &slab1})
                    for (int dj = 0; dj <= 1; ++dj)
                        for (int di = 0; di <= 1; ++di) {
                            const double c = (*s)[(j + dj) * (N + 1) + i + di];
                            cmin = std::min(cmin, c);
                            inside += c < 1.0;
                        }
                if (inside == 8) { volume += h * h * h; continue; }
                if (inside == 0 && cmin > 1.3) continue;
                const double x0 = px(i), y0 = px(j), z0 = px(k);
                for (int cy = 0; cy < 4; ++cy)
                    for (int cx = 0; cx < 4; ++cx) {
                        const double x = x0 + (cx + 0.5) * h / 4.0;
                        const double y = y0 + (cy + 0.5) * h / 4.0;
                        const auto f = [&](double z) {
                            const double v[3] = {x, y, z};
                            return norm.polar(std::span<const double>(v, 3));
                        };
                        volume += (h / 4.0) * (h / 4.0) *
                                  inside_length(f, z0, z0 + h, f(z0), f(z0 + h));
                    }
            }
        std::swap(slab0, slab1);
    }
    return volume;
}

} // namespace

WulffGeometry wulff_constant(const AnisotropicNorm& norm, int resolution) {
    const int n = norm.dimension();
    if (n > 3)
        throw_error("unsupported:dimension",
                    "Wulff quadrature supports n = 2, 3; supply kappa_n externally for higher n");
    if (resolution <= 0) resolution = (n == 2) ? 1024 : 256;
    if (resolution < 32)
        throw_error("domain:out-of-range", "quadrature resolution must be at least 32");

    // {Hpolar < 1} is contained in the Euclidean ball of radius beta.
    const double L = norm.bounds().second * (1.0 + 1e-7);
    const double fine = (n == 2) ? wulff_measure_2d(norm, L, resolution)
                                 : wulff_measure_3d(norm, L, resolution);
    const double coarse = (n == 2) ? wulff_measure_2d(norm, L, resolution / 2)
                                   : wulff_measure_3d(norm, L, resolution / 2);

    WulffGeometry g;
    g.dimension = n;
    g.kappa_n = fine;
    g.quadrature_resolution = resolution;
    g.kappa_error_estimate = 2.0 * std::abs(fine - coarse) + 1e-6 * std::max(1.0, fine);
    return g;
}

double wulff_perimeter(const WulffGeometry& geom, double R) {
    if (!(R > 0.0))
        throw_error("domain:nonpositive-radius", "Wulff radius must be positive");
    return geom.dimension * geom.kappa_n * std::pow(R, geom.dimension - 1);
}

std::vector<std::array<double, 2>> wulff_boundary(const AnisotropicNorm& norm, double R,
                                                  int num_vertices) {
    if (norm.dimension() != 2)
        throw_error("unsupported:dimension", "Wulff boundary sampling is n = 2 only");
    if (!(R > 0.0))
        throw_error("domain:nonpositive-radius", "Wulff radius must be positive");
    std::vector<std::array<double, 2>> pts;
    pts.reserve(num_vertices);
    for (int k = 0; k < num_vertices; ++k) {
        const double th = 2.0 * M_PI * k / num_vertices;
        const double u[2] = {std::cos(th), std::sin(th)};
        const double hp = norm.polar(std::span<const double>(u, 2));
        pts.push_back({R * u[0] / hp, R * u[1] / hp});
    }
    return pts;
}

} // namespace wulff
