// schemes.hpp -- all time-marching schemes as single-step transitions.
//
// Every step maps (state, operators, config) to the next state; time loops
// live in the application layer so each scheme is testable in isolation.
// A is the stiff operator of the model, B the second-order stabilizer whose
// shifted systems are solved in the cosine basis.
#pragma once

#include <memory>
#include <optional>
#include <string>

#include "grid.hpp"
#include "linalg.hpp"
#include "models.hpp"
#include "operators.hpp"

namespace pfrss {

enum class SchemeId {
    heat_rss_euler,
    heat_rss_cn,
    heat_rss_gear,
    heat_rss_adi,
    heat_rss_strang,
    ac_imex,
    ac_rss_imex,
    ac_df,
    ac_convex_split,
    ac_splitting,
    ac_segmentation,
    ch_rss_imex,
    ch_nlrss,
    ch_inpainting,
    ch_rss_sav,
};

const char* to_string(SchemeId id);
SchemeId scheme_id_from_string(const std::string& s);

struct SchemeConfig {
    SchemeId scheme_id = SchemeId::heat_rss_euler;
    double dt = 1e-3;
    double tau = 2.0;
    double epsilon = 0.1;
    int max_fixed_point_iters = 50;
    double fixed_point_tol = 1e-10;  // relative, scaled by (1 + |u|_inf)
    double C0 = 1.0;                 // auxiliary-variable constant
    double lambda0 = 0.0;            // inpainting fidelity weight
    double lambda = 0.0;             // segmentation weight
    bool project_mean = false;

    void validate() const;
    DoubleWell well() const { return DoubleWell(epsilon); }
};

struct CHState {
    GridField u;
    GridField mu;
};

struct SAVState {
    GridField u;
    GridField mu;
    double s = 0.0;
};

struct IterativeResult {
    GridField u;
    int iterations = 0;
};

struct SegmentationResult {
    GridField phi;
    double c1 = 0.0;
    double c2 = 0.0;
};

struct CHStepResult {
    CHState state;
    int iterations = 0;
};

// ---- linear heat schemes -------------------------------------------------

// (I + tau dt B) delta = -dt (A u - f); optional mean projection of delta
GridField heat_rss_euler_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                              const SchemeConfig& cfg, const GridField* forcing = nullptr);

// same with the half-weighted stabilizer (I + tau dt/2 B)
GridField heat_rss_cn_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                           const SchemeConfig& cfg, const GridField* forcing = nullptr);

// two-step scheme (3u+ - 4u + u-)/(2 dt) + tau B (u+ - u) + A u = f
GridField heat_rss_gear_step(const GridField& u_prev, const GridField& u, const TensorOperator& A,
                             const TensorOperator& B, const SchemeConfig& cfg,
                             const GridField* forcing = nullptr);

// sequential per-axis sweeps, each solving (I + tau dt B_axis)
GridField heat_rss_adi_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                            const SchemeConfig& cfg);

// symmetric splitting with half-steps on the leading axes
GridField heat_rss_strang_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                               const SchemeConfig& cfg);

// ---- Allen-Cahn ----------------------------------------------------------

// reference semi-implicit scheme (I + dt A) u+ = u - dt/eps^2 f(u), solved
// densely; intended for diagnostic sizes (n^dim <= 4096)
GridField ac_imex_step(const GridField& u, const TensorOperator& A, const SchemeConfig& cfg);

// (I + tau dt B) delta = -dt (A u + f(u)/eps^2)
GridField ac_rss_imex_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                           const SchemeConfig& cfg);

// secant scheme, nonlinear in u+; fixed point with the secant slope lagged
IterativeResult ac_df_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                           const SchemeConfig& cfg);

// convex splitting with the cubic term lagged
IterativeResult ac_convex_split_step(const GridField& u, const TensorOperator& A,
                                     const TensorOperator& B, const SchemeConfig& cfg);

// linear stabilized step then the closed-form double-well update
GridField ac_splitting_step(const GridField& u, const TensorOperator& A, const TensorOperator& B,
                            const SchemeConfig& cfg);

// closed-form scalar update x -> x / sqrt(g + x^2 (1-g)), g = exp(-2 dt/eps^2)
double double_well_closed_form(double x, double g);

// segmentation: averages, pointwise implicit fidelity solve, linear step,
// closed-form sharpening
SegmentationResult ac_segmentation_step(const GridField& phi, const TensorOperator& A,
                                        const TensorOperator& B, const SegmentationProblem& prob,
                                        const SchemeConfig& cfg);

// ---- Cahn-Hilliard -------------------------------------------------------

// consistent chemical potential eps A u + f(u)/eps for starting a run
GridField ch_initial_mu(const GridField& u, const TensorOperator& A, const SchemeConfig& cfg);

CHState ch_rss_imex_step(const CHState& state, const TensorOperator& A, const TensorOperator& B,
                         const SchemeConfig& cfg);

CHStepResult ch_nlrss_step(const CHState& state, const TensorOperator& A, const TensorOperator& B,
                           const SchemeConfig& cfg);

// cached factorization of (I + dt lambda0 D + tau^2 dt eps B^2); the matrix is
// constant along a run, so it is assembled and factored once
class InpaintingWorkspace {
public:
    InpaintingWorkspace(const TensorOperator& B, const InpaintingProblem& prob, const SchemeConfig& cfg);
    ~InpaintingWorkspace();
    InpaintingWorkspace(InpaintingWorkspace&&) noexcept;
    InpaintingWorkspace& operator=(InpaintingWorkspace&&) noexcept;

    bool matches(const InpaintingProblem& prob, const SchemeConfig& cfg) const;
    GridField solve(const GridField& rhs) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

CHState ch_inpainting_step(const CHState& state, const TensorOperator& A, const TensorOperator& B,
                           const InpaintingProblem& prob, const SchemeConfig& cfg,
                           const InpaintingWorkspace* workspace = nullptr);

// ---- auxiliary-variable scheme --------------------------------------------

SAVState sav_initial_state(const GridField& u, const TensorOperator& A, const SchemeConfig& cfg);

// modified energy 1/2 h^d <Au,u> + s^2 monitored by the diagnostics
double sav_energy(const SAVState& state, const TensorOperator& A);

SAVState ch_rss_sav_step(const SAVState& state, const TensorOperator& A, const TensorOperator& B,
                         const SchemeConfig& cfg);

}  // namespace pfrss
