// models.hpp -- double-well potential, nonlinear terms, discrete energies,
// and the application-specific source data (inpainting fidelity,
// segmentation averages).
#pragma once

#include <utility>

#include "grid.hpp"
#include "operators.hpp"

namespace pfrss {

// F(u) = (1 - u^2)^2 / 4,  f(u) = F'(u) = u^3 - u
struct DoubleWell {
    double epsilon = 0.1;
    explicit DoubleWell(double eps) : epsilon(eps) {
        if (eps <= 0.0) fail(ErrorCode::invalid_argument, "DoubleWell: epsilon must be positive");
    }
};

inline double well_value(double u) {
    double q = 1.0 - u * u;
    return 0.25 * q * q;
}
inline double well_prime(double u) { return u * u * u - u; }

GridField f_prime(const GridField& u, const DoubleWell& well);

// secant slope DF(u,v) = (F(u)-F(v))/(u-v), with the limit f((u+v)/2) on
// (near-)coincident entries
GridField df_secant(const GridField& u, const GridField& v, const DoubleWell& well);

// contractive/expansive split F = Fc - Fe with Fc = u^4/4 + 1/4, Fe = u^2/2
std::pair<GridField, GridField> convex_split_gradients(const GridField& u, const DoubleWell& well);

// E = 1/2 <Au,u> h^d + (1/eps^2) sum F(u) h^d
double ac_energy(const GridField& u, const TensorOperator& A, const DoubleWell& well);

// E = eps/2 <Au,u> h^d + (1/eps) sum F(u) h^d
double ch_energy(const GridField& u, const TensorOperator& A, const DoubleWell& well);

struct InpaintingProblem {
    GridField g;     // damaged image scaled to [-1, 1]
    GridField mask;  // 1 on the intact region, 0 on the damaged region
    double lambda0 = 0.0;
};

struct SegmentationProblem {
    GridField f0;  // normalized image in [0, 1]
    double lambda = 0.0;
    double epsilon = 0.1;
};

// region averages c1 = sum f0 (1+phi) / sum (1+phi), c2 with (1-phi)
std::pair<double, double> segmentation_averages(const GridField& phi, const SegmentationProblem& prob);

// s = sqrt(h^d sum F(u) + C0)
double sav_auxiliary(const GridField& u, const DoubleWell& well, double C0);

}  // namespace pfrss
