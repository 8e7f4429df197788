// dense_ref.hpp -- test-only dense reference implementations.
//
// Everything here rebuilds the discrete operators from the literal rational
// coefficients and replicates each time step with dense Eigen factorizations,
// so the checks stay independent of the banded/cosine production path.
#pragma once

#include <Eigen/Dense>

#include <functional>

#include "core/grid.hpp"
#include "core/operators.hpp"

namespace pfrss::testing {

Eigen::MatrixXd dense_p(OperatorKind kind, int n);
Eigen::MatrixXd dense_q(OperatorKind kind, int n, double h);
Eigen::MatrixXd dense_a1(OperatorKind kind, int n, double h);  // P^-1 Q

// tensor embedding, axis 0 fastest
Eigen::MatrixXd dense_axis(const Eigen::MatrixXd& a1, int axis, int dim);
Eigen::MatrixXd dense_tensor(OperatorKind kind, int dim, int n, double h);

Eigen::VectorXd to_vec(const GridField& u);
GridField from_vec(const Eigen::VectorXd& v, int n, int dim, double h);

struct DenseOps {
    Eigen::MatrixXd a;  // full tensor operator
    Eigen::MatrixXd b;
    std::vector<Eigen::MatrixXd> a_axis;
    std::vector<Eigen::MatrixXd> b_axis;
    int n = 0, dim = 1;
    double h = 0.0;

    DenseOps(OperatorKind kind, int dim, int n, double h);
};

Eigen::VectorXd ref_project(const Eigen::VectorXd& v);

// dense solve of (I + gamma M) x = rhs
Eigen::VectorXd shifted_exact(const Eigen::MatrixXd& m, double gamma, const Eigen::VectorXd& rhs);

// linear heat steps
Eigen::VectorXd ref_heat_euler(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double tau,
                               bool project, const Eigen::VectorXd* forcing = nullptr);
Eigen::VectorXd ref_heat_cn(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double tau,
                            bool project, const Eigen::VectorXd* forcing = nullptr);
Eigen::VectorXd ref_heat_gear(const DenseOps& ops, const Eigen::VectorXd& u_prev,
                              const Eigen::VectorXd& u, double dt, double tau, bool project);
Eigen::VectorXd ref_heat_adi(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double tau,
                             bool project);
Eigen::VectorXd ref_heat_strang(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double tau,
                                bool project);

// Allen-Cahn steps
Eigen::VectorXd ref_ac_imex(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double eps);
Eigen::VectorXd ref_ac_rss_imex(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double tau,
                                double eps);
Eigen::VectorXd ref_ac_df(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double tau,
                          double eps, double tol, int max_iters);
Eigen::VectorXd ref_ac_convex(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double tau,
                              double eps, double tol, int max_iters);
Eigen::VectorXd ref_ac_splitting(const DenseOps& ops, const Eigen::VectorXd& u, double dt, double tau,
                                 double eps, bool project);
Eigen::VectorXd ref_ac_segmentation(const DenseOps& ops, const Eigen::VectorXd& phi,
                                    const Eigen::VectorXd& f0, double lambda, double dt, double tau,
                                    double eps);

// Cahn-Hilliard steps; the coupled systems are solved as single dense blocks
struct RefCH {
    Eigen::VectorXd u, mu;
};
RefCH ref_ch_rss_imex(const DenseOps& ops, const RefCH& s, double dt, double tau, double eps,
                      bool project);
RefCH ref_ch_nlrss(const DenseOps& ops, const RefCH& s, double dt, double tau, double eps,
                   bool project, double tol, int max_iters);
RefCH ref_ch_inpaint(const DenseOps& ops, const RefCH& s, const Eigen::VectorXd& g,
                     const Eigen::VectorXd& mask, double lambda0, double dt, double tau, double eps);
struct RefSAV {
    Eigen::VectorXd u, mu;
    double s = 0.0;
};
RefSAV ref_ch_sav(const DenseOps& ops, const RefSAV& st, double dt, double tau, double C0, double hd,
                  bool project);

}  // namespace pfrss::testing
