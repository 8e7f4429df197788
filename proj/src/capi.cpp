// capi.cpp -- extern "C" wrapper around the core library.
#include "pfrss.h"

#include <cmath>
#include <cstring>
#include <string>

#include "core/config.hpp"
#include "core/diagnostics.hpp"
#include "core/experiment.hpp"

using namespace pfrss;

namespace {

thread_local std::string g_last_error;

int code_of(const Error& e) { return static_cast<int>(e.code()); }

int set_error(const Error& e) {
    g_last_error = e.what();
    return code_of(e);
}

int set_error(const std::exception& e) {
    g_last_error = e.what();
    return PFRSS_ENUMERIC;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return PFRSS_OK;
    } catch (const Error& e) {
        return set_error(e);
    } catch (const std::exception& e) {
        return set_error(e);
    }
}

}  // namespace

struct pfrss_experiment {
    ExperimentConfig cfg;
    std::string description;
};

struct pfrss_run_result {
    RunResult result;
};

struct pfrss_field {
    GridField field;
};

struct pfrss_operator {
    TensorOperator op;
};

extern "C" {

const char* pfrss_version(void) { return "1.0.0"; }

const char* pfrss_last_error(void) { return g_last_error.c_str(); }

pfrss_experiment* pfrss_experiment_parse(const char* text) {
    if (!text) {
        g_last_error = "pfrss_experiment_parse: null text";
        return nullptr;
    }
    try {
        auto* e = new pfrss_experiment{parse_config(text), {}};
        return e;
    } catch (const Error& err) {
        set_error(err);
        return nullptr;
    } catch (const std::exception& err) {
        set_error(err);
        return nullptr;
    }
}

pfrss_experiment* pfrss_experiment_load(const char* path) {
    if (!path) {
        g_last_error = "pfrss_experiment_load: null path";
        return nullptr;
    }
    try {
        auto* e = new pfrss_experiment{load_config(path), {}};
        return e;
    } catch (const Error& err) {
        set_error(err);
        return nullptr;
    } catch (const std::exception& err) {
        set_error(err);
        return nullptr;
    }
}

void pfrss_experiment_free(pfrss_experiment* e) { delete e; }

int pfrss_experiment_set(pfrss_experiment* e, const char* key, const char* value) {
    if (!e || !key || !value) {
        g_last_error = "pfrss_experiment_set: null argument";
        return PFRSS_EINVAL;
    }
    return guarded([&] {
        // reparse the serialized config with the key overridden
        std::string text = e->cfg.serialize();
        text += std::string(key) + " = " + value + "\n";
        e->cfg = parse_config(text);
    });
}

const char* pfrss_experiment_describe(pfrss_experiment* e) {
    if (!e) return "";
    e->description = e->cfg.serialize();
    return e->description.c_str();
}

int pfrss_experiment_run(pfrss_experiment* e, pfrss_run_result** out) {
    if (!e || !out) {
        g_last_error = "pfrss_experiment_run: null argument";
        return PFRSS_EINVAL;
    }
    *out = nullptr;
    return guarded([&] { *out = new pfrss_run_result{run_experiment(e->cfg)}; });
}

size_t pfrss_run_history_length(const pfrss_run_result* r) {
    return r ? r->result.history.length() : 0;
}

int pfrss_run_history_row(const pfrss_run_result* r, size_t index, double out[5]) {
    if (!r || !out || index >= r->result.history.length()) {
        g_last_error = "pfrss_run_history_row: bad index";
        return PFRSS_EINVAL;
    }
    const RunHistory& h = r->result.history;
    out[0] = h.times[index];
    out[1] = h.energies[index];
    out[2] = h.masses[index];
    out[3] = h.max_abs[index];
    out[4] = h.increment_norms[index];
    return PFRSS_OK;
}

double pfrss_run_median_step_seconds(const pfrss_run_result* r) {
    return r ? r->result.median_step_seconds : 0.0;
}

const char* pfrss_run_history_file(const pfrss_run_result* r) {
    return r ? r->result.history_file.c_str() : "";
}

int pfrss_run_final_field(const pfrss_run_result* r, pfrss_field** out) {
    if (!r || !out) {
        g_last_error = "pfrss_run_final_field: null argument";
        return PFRSS_EINVAL;
    }
    *out = new pfrss_field{r->result.final_u};
    return PFRSS_OK;
}

void pfrss_run_result_free(pfrss_run_result* r) { delete r; }

pfrss_field* pfrss_field_create(int dim, int n) {
    try {
        return new pfrss_field{GridField(n, dim, domain_spacing(n))};
    } catch (const Error& err) {
        set_error(err);
        return nullptr;
    }
}

pfrss_field* pfrss_field_preset(const char* name, int dim, int n) {
    if (!name) {
        g_last_error = "pfrss_field_preset: null name";
        return nullptr;
    }
    try {
        return new pfrss_field{builtin_initial_condition(name, n, dim)};
    } catch (const Error& err) {
        set_error(err);
        return nullptr;
    }
}

double* pfrss_field_data(pfrss_field* f) { return f ? f->field.values.data() : nullptr; }

size_t pfrss_field_size(const pfrss_field* f) { return f ? f->field.values.size() : 0; }

int pfrss_field_dim(const pfrss_field* f) { return f ? f->field.dim : 0; }

int pfrss_field_n(const pfrss_field* f) { return f ? f->field.n : 0; }

int pfrss_field_save_pgm(const pfrss_field* f, const char* path) {
    if (!f || !path) {
        g_last_error = "pfrss_field_save_pgm: null argument";
        return PFRSS_EINVAL;
    }
    return guarded([&] {
        GridField g = f->field;
        if (g.dim == 1) fail(ErrorCode::invalid_argument, "pfrss_field_save_pgm: need a 2D or 3D field");
        if (g.dim == 3) {
            GridField s(g.n, 2, g.h);
            std::size_t base = static_cast<std::size_t>(g.n / 2) * g.n * g.n;
            for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = g.values[base + i];
            g = s;
        }
        save_pgm(field_to_image(g), path);
    });
}

void pfrss_field_free(pfrss_field* f) { delete f; }

pfrss_operator* pfrss_operator_create(const char* kind, int dim, int n, double h) {
    if (!kind) {
        g_last_error = "pfrss_operator_create: null kind";
        return nullptr;
    }
    try {
        return new pfrss_operator{TensorOperator(operator_kind_from_string(kind), dim, n, h)};
    } catch (const Error& err) {
        set_error(err);
        return nullptr;
    }
}

int pfrss_operator_apply(const pfrss_operator* op, const pfrss_field* u, pfrss_field** out) {
    if (!op || !u || !out) {
        g_last_error = "pfrss_operator_apply: null argument";
        return PFRSS_EINVAL;
    }
    *out = nullptr;
    return guarded([&] { *out = new pfrss_field{op->op.apply(u->field)}; });
}

int pfrss_solve_shifted(const pfrss_operator* B, double gamma, const pfrss_field* rhs,
                        pfrss_field** out) {
    if (!B || !rhs || !out) {
        g_last_error = "pfrss_solve_shifted: null argument";
        return PFRSS_EINVAL;
    }
    *out = nullptr;
    return guarded([&] { *out = new pfrss_field{solve_shifted(B->op, gamma, rhs->field)}; });
}

void pfrss_operator_free(pfrss_operator* op) { delete op; }

int pfrss_stability_report(const char* operator_kind, int dim, int n, double tau, double epsilon,
                           pfrss_stability* out) {
    if (!operator_kind || !out) {
        g_last_error = "pfrss_stability_report: null argument";
        return PFRSS_EINVAL;
    }
    return guarded([&] {
        double h = domain_spacing(n);
        TensorOperator A(operator_kind_from_string(operator_kind), dim, n, h);
        TensorOperator B(OperatorKind::second_order, dim, n, h);
        SchemeConfig cfg;
        cfg.tau = tau;
        cfg.epsilon = epsilon;
        StabilityReport r = predict_bounds(A, B, cfg);
        out->alpha = r.hypothesis.alpha;
        out->beta = r.hypothesis.beta;
        out->rho_a = r.hypothesis.rho_A;
        out->lambda_min_a = r.hypothesis.lambda_min_A;
        out->lambda_min_b = r.hypothesis.lambda_min_B;
        out->asymmetry_a = r.hypothesis.asymmetry_A;
        out->asymmetry_b = r.hypothesis.asymmetry_B;
        out->dt_bound_euler = r.euler_unconditional ? 0.0 : r.dt_bound_euler;
        out->dt_bound_cn = r.cn_unconditional ? 0.0 : r.dt_bound_cn;
        out->dt_bound_ac = r.dt_bound_ac;
        out->tau_bound_ch = r.tau_bound_ch;
        out->euler_unconditional = r.euler_unconditional ? 1 : 0;
        out->cn_unconditional = r.cn_unconditional ? 1 : 0;
        out->ch_unconditional = r.ch_unconditional ? 1 : 0;
    });
}

int pfrss_convergence_study(const char* operator_kind, const double* h_values, size_t count,
                            double* errors_out, double* slope_out) {
    if (!operator_kind || !h_values || !errors_out || !slope_out) {
        g_last_error = "pfrss_convergence_study: null argument";
        return PFRSS_EINVAL;
    }
    return guarded([&] {
        std::vector<double> hs(h_values, h_values + count);
        auto u = [](double x) { return std::cos(x * (1.0 - x)); };
        auto upp = [](double x) {
            double g = x * (1.0 - x);
            double gp = 1.0 - 2.0 * x;
            return -std::cos(g) * gp * gp + 2.0 * std::sin(g);
        };
        ConvergenceStudy s = convergence_study(operator_kind_from_string(operator_kind), hs, u, upp);
        for (size_t i = 0; i < count; ++i) errors_out[i] = s.errors[i];
        *slope_out = s.slope;
    });
}

}  // extern "C"
