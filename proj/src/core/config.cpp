#include "config.hpp"

#include <fstream>
#include <sstream>

namespace pfrss {

const char* to_string(ProblemKind p) {
    switch (p) {
        case ProblemKind::heat: return "heat";
        case ProblemKind::allen_cahn: return "allen_cahn";
        case ProblemKind::cahn_hilliard: return "cahn_hilliard";
        case ProblemKind::inpaint: return "inpaint";
        case ProblemKind::segment: return "segment";
        case ProblemKind::stability: return "stability";
        case ProblemKind::convergence: return "convergence";
    }
    return "?";
}

ProblemKind problem_from_string(const std::string& s) {
    if (s == "heat") return ProblemKind::heat;
    if (s == "allen_cahn" || s == "ac") return ProblemKind::allen_cahn;
    if (s == "cahn_hilliard" || s == "ch") return ProblemKind::cahn_hilliard;
    if (s == "inpaint") return ProblemKind::inpaint;
    if (s == "segment") return ProblemKind::segment;
    if (s == "stability") return ProblemKind::stability;
    if (s == "convergence") return ProblemKind::convergence;
    fail(ErrorCode::config, "unknown problem: " + s);
}

SchemeConfig ExperimentConfig::scheme_config() const {
    SchemeConfig c;
    c.scheme_id = scheme_id;
    c.dt = dt;
    c.tau = tau;
    c.epsilon = epsilon;
    c.max_fixed_point_iters = max_fixed_point_iters;
    c.fixed_point_tol = fixed_point_tol;
    c.C0 = C0;
    c.lambda0 = lambda0;
    c.lambda = lambda;
    c.project_mean = project_mean;
    return c;
}

void ExperimentConfig::validate() const {
    if (n < 8) fail(ErrorCode::config, "config: n must be at least 8");
    if (dim < 1 || dim > 3) fail(ErrorCode::config, "config: dim must be 1, 2 or 3");
    if (dt <= 0.0) fail(ErrorCode::config, "config: dt must be positive");
    if (t_max < 0.0) fail(ErrorCode::config, "config: t_max must be >= 0");
    if (tau < 0.0) fail(ErrorCode::config, "config: tau must be >= 0");
    if (epsilon <= 0.0) fail(ErrorCode::config, "config: epsilon must be positive");
    if (lambda0 < 0.0 || lambda < 0.0) fail(ErrorCode::config, "config: weights must be >= 0");
    for (double t : snapshot_times)
        if (t < 0.0 || t > t_max)
            fail(ErrorCode::config, "config: snapshot times must lie in [0, t_max]");
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream os;
    os.precision(17);
    os << "problem = " << to_string(problem) << "\n"
       << "scheme = " << to_string(scheme_id) << "\n"
       << "n = " << n << "\n"
       << "dim = " << dim << "\n"
       << "dt = " << dt << "\n"
       << "t_max = " << t_max << "\n"
       << "tau = " << tau << "\n"
       << "epsilon = " << epsilon << "\n"
       << "lambda0 = " << lambda0 << "\n"
       << "lambda = " << lambda << "\n"
       << "c0 = " << C0 << "\n"
       << "operator = " << to_string(operator_kind) << "\n"
       << "project_mean = " << (project_mean ? "true" : "false") << "\n"
       << "fixed_point_tol = " << fixed_point_tol << "\n"
       << "max_fixed_point_iters = " << max_fixed_point_iters << "\n"
       << "initial_condition = " << initial_condition << "\n"
       << "output_dir = " << output_dir << "\n";
    if (!image_path.empty()) os << "image = " << image_path << "\n";
    if (!mask_path.empty()) os << "mask = " << mask_path << "\n";
    if (!snapshot_times.empty()) {
        os << "snapshot_times = ";
        for (std::size_t i = 0; i < snapshot_times.size(); ++i)
            os << (i ? "," : "") << snapshot_times[i];
        os << "\n";
    }
    return os.str();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad_line(int line, const std::string& what) {
    fail(ErrorCode::config, "config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        bad_line(line, "expected a number, got '" + v + "'");
    }
}

int parse_int_value(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        int d = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        bad_line(line, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_line(line, "expected a boolean, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool scheme_set = false, project_set = false, operator_set = false;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        std::size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos) bad_line(line, "expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty() || value.empty()) bad_line(line, "expected 'key = value'");

        try {
            if (key == "problem") cfg.problem = problem_from_string(value);
            else if (key == "scheme") { cfg.scheme_id = scheme_id_from_string(value); scheme_set = true; }
            else if (key == "n") cfg.n = parse_int_value(value, line);
            else if (key == "dim") cfg.dim = parse_int_value(value, line);
            else if (key == "dt") cfg.dt = parse_double(value, line);
            else if (key == "t_max") cfg.t_max = parse_double(value, line);
            else if (key == "tau") cfg.tau = parse_double(value, line);
            else if (key == "epsilon") cfg.epsilon = parse_double(value, line);
            else if (key == "lambda0") cfg.lambda0 = parse_double(value, line);
            else if (key == "lambda") cfg.lambda = parse_double(value, line);
            else if (key == "c0" || key == "C0") cfg.C0 = parse_double(value, line);
            else if (key == "operator") { cfg.operator_kind = operator_kind_from_string(value); operator_set = true; }
            else if (key == "project_mean") { cfg.project_mean = parse_bool(value, line); project_set = true; }
            else if (key == "fixed_point_tol") cfg.fixed_point_tol = parse_double(value, line);
            else if (key == "max_fixed_point_iters") cfg.max_fixed_point_iters = parse_int_value(value, line);
            else if (key == "initial_condition") cfg.initial_condition = value;
            else if (key == "image") cfg.image_path = value;
            else if (key == "mask") cfg.mask_path = value;
            else if (key == "output_dir") cfg.output_dir = value;
            else if (key == "snapshot_times") {
                cfg.snapshot_times.clear();  // a later occurrence replaces the list
                std::istringstream vs(value);
                std::string tok;
                while (std::getline(vs, tok, ',')) cfg.snapshot_times.push_back(parse_double(trim(tok), line));
            } else
                bad_line(line, "unknown key '" + key + "'");
        } catch (const Error& e) {
            if (e.code() == ErrorCode::config) throw;
            bad_line(line, e.what());
        }
    }

    // defaults tied to the problem
    if (!scheme_set) {
        switch (cfg.problem) {
            case ProblemKind::heat: cfg.scheme_id = SchemeId::heat_rss_euler; break;
            case ProblemKind::allen_cahn: cfg.scheme_id = SchemeId::ac_rss_imex; break;
            case ProblemKind::cahn_hilliard: cfg.scheme_id = SchemeId::ch_rss_imex; break;
            case ProblemKind::inpaint: cfg.scheme_id = SchemeId::ch_inpainting; break;
            case ProblemKind::segment: cfg.scheme_id = SchemeId::ac_segmentation; break;
            default: break;
        }
    }
    // the semi-implicit scheme name is shared by the scalar and coupled models
    if (scheme_set && cfg.problem == ProblemKind::cahn_hilliard && cfg.scheme_id == SchemeId::ac_rss_imex)
        cfg.scheme_id = SchemeId::ch_rss_imex;
    if (!project_set)
        cfg.project_mean = cfg.problem == ProblemKind::heat || cfg.problem == ProblemKind::allen_cahn ||
                           cfg.problem == ProblemKind::cahn_hilliard;
    if (!operator_set && cfg.problem == ProblemKind::heat) cfg.operator_kind = OperatorKind::lele4;
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, path + ": cannot open config");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace pfrss
