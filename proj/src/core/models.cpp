#include "models.hpp"

#include <cmath>

namespace pfrss {

GridField f_prime(const GridField& u, const DoubleWell&) {
    GridField out = u;
    for (double& v : out.values) v = well_prime(v);
    return out;
}

GridField df_secant(const GridField& u, const GridField& v, const DoubleWell&) {
    require_same_grid(u, v, "df_secant");
    GridField out = u;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        double a = u.values[i], b = v.values[i];
        if (std::abs(a - b) < 1e-12 * (1.0 + std::abs(a) + std::abs(b)))
            out.values[i] = well_prime(0.5 * (a + b));
        else
            out.values[i] = (well_value(a) - well_value(b)) / (a - b);
    }
    return out;
}

std::pair<GridField, GridField> convex_split_gradients(const GridField& u, const DoubleWell&) {
    GridField gc = u, ge = u;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        double x = u.values[i];
        gc.values[i] = x * x * x;
        ge.values[i] = x;
    }
    return {gc, ge};
}

namespace {
double well_sum(const GridField& u) {
    double s = 0.0;
    for (double v : u.values) s += well_value(v);
    return s;
}
}  // namespace

double ac_energy(const GridField& u, const TensorOperator& A, const DoubleWell& well) {
    double hd = std::pow(u.h, u.dim);
    GridField au = A.apply(u);
    return 0.5 * dot(au, u) * hd + well_sum(u) * hd / (well.epsilon * well.epsilon);
}

double ch_energy(const GridField& u, const TensorOperator& A, const DoubleWell& well) {
    double hd = std::pow(u.h, u.dim);
    GridField au = A.apply(u);
    return 0.5 * well.epsilon * dot(au, u) * hd + well_sum(u) * hd / well.epsilon;
}

std::pair<double, double> segmentation_averages(const GridField& phi, const SegmentationProblem& prob) {
    require_same_grid(phi, prob.f0, "segmentation_averages");
    double n1 = 0.0, d1 = 0.0, n2 = 0.0, d2 = 0.0;
    for (std::size_t i = 0; i < phi.values.size(); ++i) {
        double p = phi.values[i], f = prob.f0.values[i];
        n1 += f * (1.0 + p);
        d1 += 1.0 + p;
        n2 += f * (1.0 - p);
        d2 += 1.0 - p;
    }
    double scale = static_cast<double>(phi.values.size());
    if (std::abs(d1) < 1e-14 * scale)
        fail(ErrorCode::numerical, "segmentation_averages: phase is identically -1, c1 undefined");
    if (std::abs(d2) < 1e-14 * scale)
        fail(ErrorCode::numerical, "segmentation_averages: phase is identically +1, c2 undefined");
    return {n1 / d1, n2 / d2};
}

double sav_auxiliary(const GridField& u, const DoubleWell&, double C0) {
    double radicand = well_sum(u) * std::pow(u.h, u.dim) + C0;
    if (radicand <= 0.0)
        fail(ErrorCode::numerical, "sav_auxiliary: radicand <= 0, increase C0");
    return std::sqrt(radicand);
}

}  // namespace pfrss
