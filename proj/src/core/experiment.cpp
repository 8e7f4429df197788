#include "experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace pfrss {

namespace {

constexpr double pi = std::numbers::pi;

GridField preset_field(int n, int dim, const std::function<double(double, double, double)>& f) {
    GridField u(n, dim, domain_spacing(n));
    const double h = u.h;
    if (dim == 1) {
        for (int i = 0; i < n; ++i) u.values[i] = f(i * h, 0.0, 0.0);
    } else if (dim == 2) {
        std::size_t idx = 0;
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i, ++idx) u.values[idx] = f(i * h, j * h, 0.0);
    } else {
        std::size_t idx = 0;
        for (int k = 0; k < n; ++k)
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i, ++idx) u.values[idx] = f(i * h, j * h, k * h);
    }
    return u;
}

}  // namespace

GridField builtin_initial_condition(const std::string& name, int n, int dim) {
    auto need_dim = [&](int d) {
        if (dim != d)
            fail(ErrorCode::config, "initial condition '" + name + "' needs dim = " + std::to_string(d));
    };
    if (name == "zero") return GridField(n, dim, domain_spacing(n));
    if (name == "heat2d") {
        need_dim(2);
        return preset_field(n, dim, [](double x, double y, double) { return std::cos(pi * x) * std::cos(pi * y); });
    }
    if (name == "ac1d")
        return preset_field(n, 1, [](double x, double, double) { return 0.8 * std::cos(3.0 * pi * x); });
    if (name == "ac2d") {
        need_dim(2);
        return preset_field(n, dim,
                            [](double x, double y, double) { return std::cos(pi * x) * std::cos(2.0 * pi * y); });
    }
    if (name == "ac3d") {
        need_dim(3);
        return preset_field(n, dim, [](double x, double y, double z) {
            return std::cos(pi * x) * std::cos(2.0 * pi * y) * std::cos(6.0 * z);
        });
    }
    if (name == "ch3d") {
        need_dim(3);
        return preset_field(n, dim, [](double x, double y, double z) {
            return std::cos(2.0 * pi * x) * std::cos(2.0 * pi * y) * std::cos(pi * z);
        });
    }
    if (name == "smooth_small") {
        return preset_field(n, dim, [dim](double x, double y, double z) {
            double v = 0.05 * std::cos(2.0 * pi * x);
            if (dim > 1) v *= std::cos(2.0 * pi * y);
            if (dim > 2) v *= std::cos(2.0 * pi * z);
            return v;
        });
    }
    if (name == "cross") {
        need_dim(2);
        return preset_field(n, dim, [](double x, double y, double) {
            return (std::abs(x - 0.5) <= 0.125 || std::abs(y - 0.5) <= 0.125) ? 1.0 : -1.0;
        });
    }
    if (name == "two_circles") {
        need_dim(2);
        return preset_field(n, dim, [](double x, double y, double) {
            double d1 = (x - 0.3) * (x - 0.3) + (y - 0.5) * (y - 0.5);
            double d2 = (x - 0.7) * (x - 0.7) + (y - 0.5) * (y - 0.5);
            return (d1 <= 0.15 * 0.15 || d2 <= 0.15 * 0.15) ? 1.0 : -1.0;
        });
    }
    if (name == "random") {
        GridField u(n, dim, domain_spacing(n));
        std::mt19937_64 rng(0x5eed5eedULL);  // fixed seed keeps runs reproducible
        std::uniform_real_distribution<double> dist(-0.5, 0.5);
        for (double& v : u.values) v = dist(rng);
        return u;
    }
    fail(ErrorCode::config, "unknown initial condition preset: " + name);
}

namespace {

std::string format_time_tag(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

void write_field_csv(const GridField& u, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::io, path + ": cannot open for writing");
    out.precision(17);
    const int n = u.n;
    if (u.dim == 1) {
        for (int i = 0; i < n; ++i) out << (i ? "," : "") << u.values[i];
        out << "\n";
    } else if (u.dim == 2) {
        std::size_t idx = 0;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i, ++idx) out << (i ? "," : "") << u.values[idx];
            out << "\n";
        }
    } else {
        std::size_t idx = 0;
        for (int k = 0; k < n; ++k) {
            for (int j = 0; j < n; ++j) {
                for (int i = 0; i < n; ++i, ++idx) out << (i ? "," : "") << u.values[idx];
                out << "\n";
            }
            out << "\n";  // blank line between z-slices
        }
    }
    if (!out) fail(ErrorCode::io, path + ": write failed");
}

// middle-z slice of a 3D field (identity for 2D)
GridField slice_for_image(const GridField& u) {
    if (u.dim != 3) return u;
    GridField s(u.n, 2, u.h);
    const int n = u.n;
    std::size_t base = static_cast<std::size_t>(n / 2) * n * n;
    for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = u.values[base + i];
    return s;
}

struct ForcingModel {
    bool active = false;
    GridField base;
    GridField at(double t) const {
        GridField f = base;
        double c = (std::cos(t) + 2.0 * pi * pi) * std::exp(std::sin(t));
        for (double& v : f.values) v *= c;
        return f;
    }
};

EnergyKind energy_kind_for(SchemeId id) {
    switch (id) {
        case SchemeId::heat_rss_euler:
        case SchemeId::heat_rss_cn:
        case SchemeId::heat_rss_gear:
        case SchemeId::heat_rss_adi:
        case SchemeId::heat_rss_strang: return EnergyKind::quadratic;
        case SchemeId::ac_imex:
        case SchemeId::ac_rss_imex:
        case SchemeId::ac_df:
        case SchemeId::ac_convex_split:
        case SchemeId::ac_splitting:
        case SchemeId::ac_segmentation: return EnergyKind::allen_cahn;
        default: return EnergyKind::cahn_hilliard;
    }
}

void check_problem_scheme(ProblemKind p, SchemeId s) {
    auto ok = [&]() {
        switch (p) {
            case ProblemKind::heat:
                return s == SchemeId::heat_rss_euler || s == SchemeId::heat_rss_cn ||
                       s == SchemeId::heat_rss_gear || s == SchemeId::heat_rss_adi ||
                       s == SchemeId::heat_rss_strang;
            case ProblemKind::allen_cahn:
                return s == SchemeId::ac_imex || s == SchemeId::ac_rss_imex || s == SchemeId::ac_df ||
                       s == SchemeId::ac_convex_split || s == SchemeId::ac_splitting;
            case ProblemKind::cahn_hilliard:
                return s == SchemeId::ch_rss_imex || s == SchemeId::ch_nlrss || s == SchemeId::ch_rss_sav;
            case ProblemKind::inpaint: return s == SchemeId::ch_inpainting;
            case ProblemKind::segment: return s == SchemeId::ac_segmentation;
            default: return false;
        }
    };
    if (!ok())
        fail(ErrorCode::config, std::string("scheme '") + to_string(s) + "' does not apply to problem '" +
                                    to_string(p) + "'");
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.problem == ProblemKind::stability || cfg.problem == ProblemKind::convergence)
        fail(ErrorCode::config, "run_experiment: use the stability/convergence entry points");
    check_problem_scheme(cfg.problem, cfg.scheme_id);

    namespace fs = std::filesystem;
    fs::create_directories(cfg.output_dir);

    // inputs
    GridField u;
    InpaintingProblem inpaint;
    SegmentationProblem segment;
    int n = cfg.n;
    if (cfg.problem == ProblemKind::inpaint || cfg.problem == ProblemKind::segment) {
        if (cfg.image_path.empty()) fail(ErrorCode::config, "config: this problem needs an image");
        RasterImage img = load_pgm(cfg.image_path);
        if (img.width != img.height) fail(ErrorCode::config, "config: image must be square");
        if (img.width != cfg.n)
            fail(ErrorCode::config, "config: n (" + std::to_string(cfg.n) + ") must equal the image size (" +
                                        std::to_string(img.width) + ")");
        if (cfg.dim != 2) fail(ErrorCode::config, "config: image problems are two-dimensional");
        if (cfg.problem == ProblemKind::inpaint) {
            if (cfg.mask_path.empty()) fail(ErrorCode::config, "config: inpainting needs a mask");
            inpaint.g = image_to_field(img, FieldRange::symmetric);
            RasterImage m = load_pgm(cfg.mask_path);
            if (m.width != img.width || m.height != img.height)
                fail(ErrorCode::config, "config: mask size differs from the image");
            inpaint.mask = GridField(n, 2, domain_spacing(n));
            for (std::size_t i = 0; i < inpaint.mask.values.size(); ++i)
                inpaint.mask.values[i] = m.pixels[i] > 127 ? 1.0 : 0.0;
            inpaint.lambda0 = cfg.lambda0;
            u = inpaint.g;
        } else {
            segment.f0 = image_to_field(img, FieldRange::unit);
            segment.lambda = cfg.lambda;
            segment.epsilon = cfg.epsilon;
            u = segment.f0;
            for (double& v : u.values) v = 2.0 * v - 1.0;  // phi0 = 2 f0 - 1
        }
    } else {
        u = builtin_initial_condition(cfg.initial_condition, n, cfg.dim);
    }

    const double h = u.h;
    TensorOperator A(cfg.operator_kind, u.dim, n, h);
    TensorOperator B(OperatorKind::second_order, u.dim, n, h);
    SchemeConfig sc = cfg.scheme_config();
    DoubleWell well(cfg.epsilon);

    ForcingModel forcing;
    if (cfg.problem == ProblemKind::heat && cfg.initial_condition == "heat2d") {
        // manufactured solution cos(pi x) cos(pi y) exp(sin t)
        forcing.active = true;
        forcing.base = builtin_initial_condition("heat2d", n, cfg.dim);
        if (cfg.scheme_id == SchemeId::heat_rss_adi || cfg.scheme_id == SchemeId::heat_rss_strang)
            fail(ErrorCode::config, "config: the manufactured heat source is not available for split schemes");
    }

    const long steps = std::lround(cfg.t_max / cfg.dt);
    std::vector<long> snapshot_steps;
    for (double t : cfg.snapshot_times) snapshot_steps.push_back(std::lround(t / cfg.dt));

    RunResult result;
    EnergyKind ekind = energy_kind_for(cfg.scheme_id);
    std::string base_name = std::string(to_string(cfg.problem)) + "_" + to_string(cfg.scheme_id);

    // scheme state
    CHState ch;
    SAVState sav;
    GridField u_prev = u;  // gear history
    std::optional<InpaintingWorkspace> inpaint_ws;
    bool is_ch = cfg.scheme_id == SchemeId::ch_rss_imex || cfg.scheme_id == SchemeId::ch_nlrss ||
                 cfg.scheme_id == SchemeId::ch_inpainting;
    if (is_ch) ch = CHState{u, ch_initial_mu(u, A, sc)};
    if (cfg.scheme_id == SchemeId::ch_rss_sav) sav = sav_initial_state(u, A, sc);
    if (cfg.scheme_id == SchemeId::ch_inpainting) inpaint_ws.emplace(B, inpaint, sc);

    auto record_state = [&](double t, const GridField& cur, const GridField* prev) {
        std::optional<double> modified_energy;
        if (cfg.scheme_id == SchemeId::ch_rss_sav) modified_energy = sav_energy(sav, A);
        record(result.history, t, cur, A, well, ekind, prev, modified_energy);
    };

    auto snapshot = [&](long step, const GridField& cur) {
        for (std::size_t s = 0; s < snapshot_steps.size(); ++s) {
            if (snapshot_steps[s] != step) continue;
            std::string tag = base_name + "_t" + format_time_tag(cfg.snapshot_times[s]);
            std::string png = (fs::path(cfg.output_dir) / (tag + ".pgm")).string();
            std::string csv = (fs::path(cfg.output_dir) / (tag + ".csv")).string();
            if (cur.dim >= 2) save_pgm(field_to_image(slice_for_image(cur)), png);
            write_field_csv(cur, csv);
            if (cur.dim >= 2) result.snapshot_files.push_back(png);
            result.snapshot_files.push_back(csv);
        }
    };

    std::vector<double> step_seconds;
    step_seconds.reserve(steps > 0 ? steps : 1);

    auto flush_history = [&]() {
        std::string path = (fs::path(cfg.output_dir) / (base_name + "_history.csv")).string();
        std::ofstream out(path);
        out << result.history.to_csv();
        result.history_file = path;
    };

    try {
        record_state(0.0, u, nullptr);
        snapshot(0, u);
        for (long k = 1; k <= steps; ++k) {
            const double t = k * cfg.dt;
            GridField prev = is_ch ? ch.u : (cfg.scheme_id == SchemeId::ch_rss_sav ? sav.u : u);
            auto t0 = std::chrono::steady_clock::now();
            switch (cfg.scheme_id) {
                case SchemeId::heat_rss_euler: {
                    GridField f;
                    if (forcing.active) f = forcing.at((k - 1) * cfg.dt);
                    u = heat_rss_euler_step(u, A, B, sc, forcing.active ? &f : nullptr);
                    break;
                }
                case SchemeId::heat_rss_cn: {
                    GridField f;
                    if (forcing.active) f = forcing.at((k - 1) * cfg.dt);
                    u = heat_rss_cn_step(u, A, B, sc, forcing.active ? &f : nullptr);
                    break;
                }
                case SchemeId::heat_rss_gear: {
                    GridField f;
                    if (forcing.active) f = forcing.at((k - 1) * cfg.dt);
                    if (k == 1) {
                        // startup step with the one-step scheme
                        u_prev = u;
                        u = heat_rss_euler_step(u, A, B, sc, forcing.active ? &f : nullptr);
                    } else {
                        GridField next = heat_rss_gear_step(u_prev, u, A, B, sc, forcing.active ? &f : nullptr);
                        u_prev = u;
                        u = next;
                    }
                    break;
                }
                case SchemeId::heat_rss_adi: u = heat_rss_adi_step(u, A, B, sc); break;
                case SchemeId::heat_rss_strang: u = heat_rss_strang_step(u, A, B, sc); break;
                case SchemeId::ac_imex: u = ac_imex_step(u, A, sc); break;
                case SchemeId::ac_rss_imex: u = ac_rss_imex_step(u, A, B, sc); break;
                case SchemeId::ac_df: u = ac_df_step(u, A, B, sc).u; break;
                case SchemeId::ac_convex_split: u = ac_convex_split_step(u, A, B, sc).u; break;
                case SchemeId::ac_splitting: u = ac_splitting_step(u, A, B, sc); break;
                case SchemeId::ac_segmentation: u = ac_segmentation_step(u, A, B, segment, sc).phi; break;
                case SchemeId::ch_rss_imex: ch = ch_rss_imex_step(ch, A, B, sc); u = ch.u; break;
                case SchemeId::ch_nlrss: ch = ch_nlrss_step(ch, A, B, sc).state; u = ch.u; break;
                case SchemeId::ch_inpainting:
                    ch = ch_inpainting_step(ch, A, B, inpaint, sc, &*inpaint_ws);
                    u = ch.u;
                    break;
                case SchemeId::ch_rss_sav: sav = ch_rss_sav_step(sav, A, B, sc); u = sav.u; break;
            }
            auto t1 = std::chrono::steady_clock::now();
            step_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());
            record_state(t, u, &prev);
            snapshot(k, u);
        }
    } catch (const Error& e) {
        flush_history();
        std::ofstream marker(fs::path(cfg.output_dir) / "FAILED.txt");
        marker << e.what() << "\n";
        throw;
    }

    flush_history();
    if (!step_seconds.empty()) {
        std::vector<double> sorted = step_seconds;
        std::sort(sorted.begin(), sorted.end());
        result.median_step_seconds = sorted[sorted.size() / 2];
    }
    result.final_u = u;
    if (is_ch) {
        result.final_mu = ch.mu;
        result.has_mu = true;
    }
    if (cfg.scheme_id == SchemeId::ch_rss_sav) {
        result.final_mu = sav.mu;
        result.has_mu = true;
        result.final_s = sav.s;
    }
    return result;
}

}  // namespace pfrss
