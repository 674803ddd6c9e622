#include "geometry.hpp"

#include <cmath>

namespace ont {

namespace {

void check_same_spec(const PoincarePoint& x, const PoincarePoint& y) {
    if (!(x.spec == y.spec)) throw OntError("BallSpec mismatch");
}

double sq_norm(const std::vector<double>& v) {
    double s = 0;
    for (double c : v) s += c * c;
    return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

constexpr double kArtanhClamp = 1.0 - 1e-12;

double artanh(double t) {
    if (t > kArtanhClamp) t = kArtanhClamp;
    if (t < -kArtanhClamp) t = -kArtanhClamp;
    return 0.5 * std::log((1 + t) / (1 - t));
}

} // namespace

double BallSpec::radius() const { return 1.0 / std::sqrt(kappa); }

void BallSpec::validate() const {
    if (dim <= 0 || dim % 2 != 0) throw OntError("BallSpec.dim must be even and positive");
    if (!(kappa > 0)) throw OntError("BallSpec.kappa must be positive");
    if (!(eps > 0)) throw OntError("BallSpec.eps must be positive");
}

double hdist(const PoincarePoint& x, const PoincarePoint& y) {
    check_same_spec(x, y);
    const double k = x.spec.kappa;
    std::vector<double> d(x.coords.size());
    for (size_t i = 0; i < d.size(); ++i) d[i] = x.coords[i] - y.coords[i];
    const double u = sq_norm(d);
    const double a = 1 - k * sq_norm(x.coords);
    const double b = 1 - k * sq_norm(y.coords);
    double g = 1 + 2 * k * u / (a * b);
    if (g < 1) g = 1; // round-off
    return std::acosh(g) / std::sqrt(k);
}

double hnorm(const PoincarePoint& x) {
    // Delegates to hdist so the two agree bit for bit.
    return hdist(x, origin_point(x.spec));
}

PoincarePoint origin_point(const BallSpec& spec) {
    spec.validate();
    return {spec, std::vector<double>(spec.dim, 0.0)};
}

PoincarePoint hscale(double k, const PoincarePoint& x) {
    const double kappa = x.spec.kappa;
    const double r = std::sqrt(sq_norm(x.coords));
    PoincarePoint y{x.spec, std::vector<double>(x.coords.size(), 0.0)};
    if (r == 0 || k == 0) return y;
    double t = std::sqrt(kappa) * r;
    double s = std::tanh(k * artanh(t));
    if (s > kArtanhClamp) s = kArtanhClamp;
    if (s < -kArtanhClamp) s = -kArtanhClamp;
    const double c = s / (std::sqrt(kappa) * r);
    for (size_t i = 0; i < y.coords.size(); ++i) y.coords[i] = c * x.coords[i];
    return y;
}

PoincarePoint hrotate(const RotationAngles& theta, const PoincarePoint& x) {
    if (2 * theta.angles.size() != x.coords.size())
        throw OntError("rotation/point dimension mismatch");
    PoincarePoint y{x.spec, x.coords};
    for (size_t i = 0; i < theta.angles.size(); ++i) {
        const double c = std::cos(theta.angles[i]);
        const double s = std::sin(theta.angles[i]);
        const double a = x.coords[2 * i];
        const double b = x.coords[2 * i + 1];
        y.coords[2 * i] = c * a - s * b;
        y.coords[2 * i + 1] = s * a + c * b;
    }
    return y;
}

PoincarePoint project_to_ball(const std::vector<double>& v, const BallSpec& spec) {
    spec.validate();
    if (static_cast<int>(v.size()) != spec.dim)
        throw OntError("projection input dimension mismatch");
    for (double c : v)
        if (!std::isfinite(c)) throw OntError("non-finite projection input");
    const double rho = spec.radius() - spec.eps;
    const double n = std::sqrt(sq_norm(v));
    PoincarePoint p{spec, std::vector<double>(v.size(), 0.0)};
    if (n < 1e-300) return p;
    const double c = rho * std::tanh(n) / n;
    for (size_t i = 0; i < v.size(); ++i) p.coords[i] = c * v[i];
    return p;
}

void hdist_backward(const PoincarePoint& x, const PoincarePoint& y, double g,
                    std::vector<double>* gx, std::vector<double>* gy) {
    check_same_spec(x, y);
    const double k = x.spec.kappa;
    const size_t n = x.coords.size();
    std::vector<double> d(n);
    for (size_t i = 0; i < n; ++i) d[i] = x.coords[i] - y.coords[i];
    const double u = sq_norm(d);
    if (u < 1e-24) return; // coincident points: subgradient 0
    const double a = 1 - k * sq_norm(x.coords);
    const double b = 1 - k * sq_norm(y.coords);
    const double gam = 1 + 2 * k * u / (a * b);
    const double denom = std::sqrt(gam * gam - 1);
    if (!(denom > 0)) return;
    const double c = g / (std::sqrt(k) * denom);
    if (gx) {
        for (size_t i = 0; i < n; ++i)
            (*gx)[i] += c * (4 * k * d[i] / (a * b) + 4 * k * k * u * x.coords[i] / (a * a * b));
    }
    if (gy) {
        for (size_t i = 0; i < n; ++i)
            (*gy)[i] += c * (-4 * k * d[i] / (a * b) + 4 * k * k * u * y.coords[i] / (a * b * b));
    }
}

void hnorm_backward(const PoincarePoint& x, double g, std::vector<double>* gx) {
    if (!gx) return;
    const double k = x.spec.kappa;
    const double r2 = sq_norm(x.coords);
    const double r = std::sqrt(r2);
    if (r < 1e-15) return;
    const double c = g * 2.0 / ((1 - k * r2) * r);
    for (size_t i = 0; i < x.coords.size(); ++i) (*gx)[i] += c * x.coords[i];
}

void hscale_backward(double k, const PoincarePoint& x, const std::vector<double>& gy,
                     std::vector<double>* gx, double* gk) {
    const double kappa = x.spec.kappa;
    const size_t n = x.coords.size();
    const double r = std::sqrt(sq_norm(x.coords));
    if (r < 1e-12) {
        // y ~= k x near the origin
        if (gx)
            for (size_t i = 0; i < n; ++i) (*gx)[i] += k * gy[i];
        if (gk) *gk += dot(x.coords, gy);
        return;
    }
    const double t = std::sqrt(kappa) * r;
    const double u = artanh(t);
    const double s = std::tanh(k * u);
    const double c = s / (std::sqrt(kappa) * r);
    const double ds_dr = (1 - s * s) * k * std::sqrt(kappa) / (1 - t * t);
    const double dc_dr = ds_dr / (std::sqrt(kappa) * r) - s / (std::sqrt(kappa) * r * r);
    const double xg = dot(x.coords, gy);
    if (gx) {
        for (size_t i = 0; i < n; ++i)
            (*gx)[i] += c * gy[i] + dc_dr * x.coords[i] * xg / r;
    }
    if (gk) *gk += xg * (1 - s * s) * u / (std::sqrt(kappa) * r);
}

void hrotate_backward(const RotationAngles& theta, const PoincarePoint& x,
                      const std::vector<double>& gy, std::vector<double>* gx,
                      std::vector<double>* gtheta) {
    if (2 * theta.angles.size() != x.coords.size())
        throw OntError("rotation/point dimension mismatch");
    for (size_t i = 0; i < theta.angles.size(); ++i) {
        const double c = std::cos(theta.angles[i]);
        const double s = std::sin(theta.angles[i]);
        const double a = x.coords[2 * i];
        const double b = x.coords[2 * i + 1];
        const double ga = gy[2 * i];
        const double gb = gy[2 * i + 1];
        if (gx) {
            (*gx)[2 * i] += c * ga + s * gb;
            (*gx)[2 * i + 1] += -s * ga + c * gb;
        }
        if (gtheta) (*gtheta)[i] += ga * (-s * a - c * b) + gb * (c * a - s * b);
    }
}

void project_backward(const std::vector<double>& v, const BallSpec& spec,
                      const std::vector<double>& gp, std::vector<double>* gv) {
    if (!gv) return;
    const double rho = spec.radius() - spec.eps;
    const double n = std::sqrt(sq_norm(v));
    if (n < 1e-8) {
        for (size_t i = 0; i < v.size(); ++i) (*gv)[i] += rho * gp[i];
        return;
    }
    const double th = std::tanh(n);
    const double c = rho * th / n;
    const double dc_dn = rho * ((1 - th * th) * n - th) / (n * n);
    const double vg = dot(v, gp);
    for (size_t i = 0; i < v.size(); ++i)
        (*gv)[i] += c * gp[i] + dc_dn * v[i] * vg / n;
}

} // namespace ont
