#ifndef ONT_GEOMETRY_HPP
#define ONT_GEOMETRY_HPP

#include <cstdint>
#include <vector>

#include "concepts.hpp"

namespace ont {

// Poincare ball of radius 1/sqrt(kappa). dim must be even (block rotations
// act on coordinate pairs).
struct BallSpec {
    int dim = 64;
    double kappa = 1.0;
    double eps = 1e-5; // boundary margin

    double radius() const;
    void validate() const;
    bool operator==(const BallSpec& o) const {
        return dim == o.dim && kappa == o.kappa && eps == o.eps;
    }
};

struct PoincarePoint {
    BallSpec spec;
    std::vector<double> coords;
};

// m rotation angles for a ball of dimension 2m.
struct RotationAngles {
    std::vector<double> angles;
};

// d(x,y) = (1/sqrt(k)) arcosh(1 + 2k|x-y|^2 / ((1-k|x|^2)(1-k|y|^2))).
double hdist(const PoincarePoint& x, const PoincarePoint& y);

// Hyperbolic norm, hdist(x, origin) = (2/sqrt(k)) artanh(sqrt(k)|x|).
double hnorm(const PoincarePoint& x);

// Hyperbolic scaling along the ray from the origin. Stated for the unit
// ball; for kappa != 1 it is applied to the rescaled coordinates sqrt(k)x
// and mapped back. hscale(1,x) = x, hscale(0,x) = origin; the origin maps
// to itself for any k.
PoincarePoint hscale(double k, const PoincarePoint& x);

// Block-diagonal rotation: the 2x2 rotation R(angles[i]) acts on the
// coordinate pair (2i, 2i+1). Preserves the Euclidean norm.
PoincarePoint hrotate(const RotationAngles& theta, const PoincarePoint& x);

// ((1/sqrt(k)) - eps) * tanh(|v|) * v/|v|, origin for v = 0.
PoincarePoint project_to_ball(const std::vector<double>& v, const BallSpec& spec);

PoincarePoint origin_point(const BallSpec& spec);

// --- gradients (vector-Jacobian products for the trainer) ---

// Accumulates d(hdist)/dx * g into gx and d(hdist)/dy * g into gy.
// Either output may be null. Zero gradient when x == y (hinge subgradient).
void hdist_backward(const PoincarePoint& x, const PoincarePoint& y, double g,
                    std::vector<double>* gx, std::vector<double>* gy);

void hnorm_backward(const PoincarePoint& x, double g, std::vector<double>* gx);

// Given gy = dL/d(hscale(k,x)), accumulates dL/dx and dL/dk.
void hscale_backward(double k, const PoincarePoint& x, const std::vector<double>& gy,
                     std::vector<double>* gx, double* gk);

// Given gy = dL/d(hrotate(theta,x)), accumulates dL/dx and dL/dtheta.
void hrotate_backward(const RotationAngles& theta, const PoincarePoint& x,
                      const std::vector<double>& gy, std::vector<double>* gx,
                      std::vector<double>* gtheta);

// Given gp = dL/d(project_to_ball(v)), accumulates dL/dv.
void project_backward(const std::vector<double>& v, const BallSpec& spec,
                      const std::vector<double>& gp, std::vector<double>* gv);

} // namespace ont

#endif
