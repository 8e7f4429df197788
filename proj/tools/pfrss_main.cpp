// pfrss_main.cpp -- command-line driver over the C API.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "pfrss.h"

namespace {

int exit_code_for(int status) {
    if (status == PFRSS_OK) return 0;
    if (status == PFRSS_ENUMERIC) return 3;
    return 2;  // config, io, size and argument problems
}

int fail_with(int status) {
    std::fprintf(stderr, "error: %s\n", pfrss_last_error());
    return exit_code_for(status);
}

int run_from_experiment(pfrss_experiment* exp) {
    pfrss_run_result* result = nullptr;
    int status = pfrss_experiment_run(exp, &result);
    if (status != PFRSS_OK) return fail_with(status);
    size_t len = pfrss_run_history_length(result);
    double row[5];
    if (len > 0 && pfrss_run_history_row(result, len - 1, row) == PFRSS_OK)
        std::printf("final t=%g energy=%.10g mass=%.10g max|u|=%.10g\n", row[0], row[1], row[2], row[3]);
    std::printf("history: %s\n", pfrss_run_history_file(result));
    std::printf("median step time: %.6f s\n", pfrss_run_median_step_seconds(result));
    pfrss_run_result_free(result);
    return 0;
}

// config file text plus all overrides, parsed in one pass so a group of
// --set flags can change dependent keys together
pfrss_experiment* load_with_overrides(const std::string& path, const std::vector<std::string>& sets) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) {
        std::fprintf(stderr, "error: cannot open config '%s'\n", path.c_str());
        return nullptr;
    }
    std::string text;
    char buf[4096];
    size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) text.append(buf, got);
    std::fclose(f);
    for (const std::string& kv : sets) {
        std::size_t eq = kv.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return nullptr;
        }
        text += "\n" + kv.substr(0, eq) + " = " + kv.substr(eq + 1) + "\n";
    }
    return pfrss_experiment_parse(text.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stabilized time marching for phase-field models on compact finite differences"};
    app.require_subcommand(1);

    std::string config_path, image_path, mask_path, kind;
    std::vector<std::string> overrides;
    int nmin = 32, nmax = 512;

    auto* run = app.add_subcommand("run", "run an experiment from a config file");
    run->add_option("config", config_path, "config file")->required();
    run->add_option("--set", overrides, "override a config key (key=value)");

    auto* stability = app.add_subcommand("stability", "print measured constants and step-size bounds");
    stability->add_option("config", config_path, "config file")->required();
    stability->add_option("--set", overrides, "override a config key (key=value)");

    auto* convergence = app.add_subcommand("convergence", "grid-refinement study of one operator kind");
    convergence->add_option("kind", kind, "lele4 | cs2 | second_order")->required();
    convergence->add_option("nmin", nmin, "coarsest grid size (1/h)")->required();
    convergence->add_option("nmax", nmax, "finest grid size (1/h)")->required();

    auto* inpaint = app.add_subcommand("inpaint", "Cahn-Hilliard inpainting of a damaged image");
    inpaint->add_option("config", config_path, "config file")->required();
    inpaint->add_option("--image", image_path, "damaged grayscale PGM")->required();
    inpaint->add_option("--mask", mask_path, "PGM mask, bright = intact pixels")->required();
    inpaint->add_option("--set", overrides, "override a config key (key=value)");

    auto* segment = app.add_subcommand("segment", "two-phase segmentation of an image");
    segment->add_option("config", config_path, "config file")->required();
    segment->add_option("--image", image_path, "grayscale PGM to segment")->required();
    segment->add_option("--set", overrides, "override a config key (key=value)");

    CLI11_PARSE(app, argc, argv);

    if (convergence->parsed()) {
        if (nmin < 8 || nmax <= nmin) {
            std::fprintf(stderr, "error: need 8 <= nmin < nmax\n");
            return 2;
        }
        std::vector<double> hs;
        for (int n = nmin; n <= nmax; n *= 2) hs.push_back(1.0 / n);
        std::vector<double> errors(hs.size(), 0.0);
        double slope = 0.0;
        int status = pfrss_convergence_study(kind.c_str(), hs.data(), hs.size(), errors.data(), &slope);
        if (status != PFRSS_OK) return fail_with(status);
        std::printf("# kind = %s, test function u(x) = cos(x(1-x))\n", kind.c_str());
        std::printf("%-12s %-14s\n", "h", "interior error");
        for (std::size_t i = 0; i < hs.size(); ++i) std::printf("%-12g %-14.6e\n", hs[i], errors[i]);
        std::printf("fitted slope: %.4f\n", slope);
        return 0;
    }

    pfrss_experiment* exp = load_with_overrides(config_path, overrides);
    if (!exp) return fail_with(PFRSS_ECONFIG);

    int rc = 0;
    int status = PFRSS_OK;
    if (stability->parsed()) {
        // read the relevant keys back from the parsed config
        pfrss_stability report;
        std::string desc = "\n" + std::string(pfrss_experiment_describe(exp));
        auto text_of = [&desc](const char* key, const char* fallback) {
            std::string needle = "\n" + std::string(key) + " = ";
            std::size_t pos = desc.find(needle);
            if (pos == std::string::npos) return std::string(fallback);
            std::size_t start = pos + needle.size();
            std::size_t end = desc.find('\n', start);
            return desc.substr(start, end - start);
        };
        auto value_of = [&text_of](const char* key, double fallback) {
            std::string v = text_of(key, "");
            return v.empty() ? fallback : std::atof(v.c_str());
        };
        int n = static_cast<int>(value_of("n", 32));
        int dim = static_cast<int>(value_of("dim", 2));
        status = pfrss_stability_report(text_of("operator", "cs2").c_str(), dim, n,
                                        value_of("tau", 2.0), value_of("epsilon", 0.1), &report);
        if (status != PFRSS_OK) {
            rc = fail_with(status);
        } else {
            std::printf("alpha          %.6g\n", report.alpha);
            std::printf("beta           %.6g\n", report.beta);
            std::printf("rho(A)         %.6g\n", report.rho_a);
            std::printf("lambda_min(A)  %.6g\n", report.lambda_min_a);
            std::printf("lambda_min(B)  %.6g\n", report.lambda_min_b);
            std::printf("asymmetry A/B  %.3g / %.3g\n", report.asymmetry_a, report.asymmetry_b);
            if (report.euler_unconditional) std::printf("euler          unconditional\n");
            else std::printf("euler          dt < %.6g\n", report.dt_bound_euler);
            if (report.cn_unconditional) std::printf("crank-nicolson unconditional\n");
            else std::printf("crank-nicolson dt < %.6g\n", report.dt_bound_cn);
            std::printf("allen-cahn     dt < %.6g\n", report.dt_bound_ac);
            if (report.ch_unconditional) std::printf("cahn-hilliard  unconditional at configured tau\n");
            else std::printf("cahn-hilliard  needs tau >= %.6g\n", report.tau_bound_ch);
        }
    } else {
        if (inpaint->parsed() || segment->parsed()) {
            if (status == PFRSS_OK && !image_path.empty())
                status = pfrss_experiment_set(exp, "image", image_path.c_str());
            if (status == PFRSS_OK && !mask_path.empty())
                status = pfrss_experiment_set(exp, "mask", mask_path.c_str());
            if (status == PFRSS_OK)
                status = pfrss_experiment_set(exp, "problem", inpaint->parsed() ? "inpaint" : "segment");
            if (status != PFRSS_OK) {
                pfrss_experiment_free(exp);
                return fail_with(status);
            }
        }
        rc = run_from_experiment(exp);
    }
    pfrss_experiment_free(exp);
    return rc;
}
