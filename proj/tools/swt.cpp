// swt: command-line front end for the swallowtail spectral toolkit.
//
// Exit codes: 0 success; 2 input error; 3 loop touches a degeneracy or
// crosses the particle-hole wall without enclosing an exceptional line;
// 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "swt/swallowtail.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 2;
constexpr int kDegenerateLoop = 3;
constexpr int kNumericalFailure = 4;

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw swt::precondition_error("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw swt::precondition_error("invalid JSON in " + path);
    return j;
}

bool readable(const std::string& path) { return std::ifstream(path).good(); }

// A config argument is a literal path, or a name looked up in $SWT_CONFIG_DIR
// and then in the bundled config directory.
std::string resolve_config(const std::string& name) {
    if (readable(name)) return name;
    std::string file = name;
    if (file.size() < 5 || file.compare(file.size() - 5, 5, ".json") != 0) file += ".json";
    std::vector<std::string> dirs;
    if (const char* env = std::getenv("SWT_CONFIG_DIR")) dirs.emplace_back(env);
#ifdef SWT_CONFIG_DIR
    dirs.emplace_back(SWT_CONFIG_DIR);
#endif
    for (const std::string& d : dirs) {
        const std::string cand = d + "/" + file;
        if (readable(cand)) return cand;
    }
    throw swt::precondition_error("config not found: " + name);
}

void write_output(const std::string& out_path, std::string content) {
    if (!content.empty() && content.back() != '\n') content += '\n';
    if (out_path.empty()) {
        std::fwrite(content.data(), 1, content.size(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw swt::precondition_error("cannot open " + out_path + " for writing");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out.good()) throw swt::precondition_error("failed writing " + out_path);
}

// Inline model-parameter flags shared by classify and check.
struct ParamFlags {
    swt::ModelParams p;
    std::string file;
    std::vector<CLI::Option*> inline_opts;
    CLI::Option* file_opt = nullptr;

    void attach(CLI::App* cmd) {
        auto opt = [&](const char* flag, double& ref, const char* help) {
            inline_opts.push_back(cmd->add_option(flag, ref, help));
        };
        opt("--gamma-1", p.gamma_1, "loss rate, mode 1");
        opt("--gamma-2", p.gamma_2, "loss rate, mode 2");
        opt("--g", p.g, "beam-splitter coupling magnitude");
        opt("--phi-g", p.phi_g, "beam-splitter coupling phase");
        opt("--xi-1", p.xi_1, "single-mode squeezing magnitude, mode 1");
        opt("--phi-1", p.phi_1, "single-mode squeezing phase, mode 1");
        opt("--xi-2", p.xi_2, "single-mode squeezing magnitude, mode 2");
        opt("--phi-2", p.phi_2, "single-mode squeezing phase, mode 2");
        opt("--chi", p.chi, "two-mode squeezing magnitude");
        opt("--phi-chi", p.phi_chi, "two-mode squeezing phase");
        opt("--delta-omega-1", p.delta_omega_1, "detuning, mode 1");
        opt("--delta-omega-2", p.delta_omega_2, "detuning, mode 2");
        file_opt = cmd->add_option("--params", file, "JSON file with model parameters");
    }

    bool any() const {
        if (file_opt->count() > 0) return true;
        for (const CLI::Option* o : inline_opts)
            if (o->count() > 0) return true;
        return false;
    }

    swt::ModelParams resolve() const {
        if (file_opt->count() > 0) {
            for (const CLI::Option* o : inline_opts)
                if (o->count() > 0)
                    throw swt::precondition_error(
                        "--params cannot be combined with inline parameter flags");
            return swt::params_from_json(read_json_file(file));
        }
        return swt::normalized(p);
    }
};

void check_axis(double lo, double hi, int n, const char* what) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo)
        throw swt::precondition_error(std::string(what) + ": malformed range");
    if (n < 1) throw swt::precondition_error(std::string(what) + ": resolution must be >= 1");
    if (n > 1 && hi == lo)
        throw swt::precondition_error(std::string(what) + ": zero-area range");
}

swt::SurfaceMode parse_surface_mode(const std::string& m) {
    if (m == "double-real") return swt::SurfaceMode::DoubleReal;
    if (m == "double-complex") return swt::SurfaceMode::DoubleComplex;
    if (m == "g-zero-diabolical") return swt::SurfaceMode::GZeroDiabolical;
    if (m == "g-offset-exceptional") return swt::SurfaceMode::GOffsetExceptional;
    throw swt::precondition_error("unknown surface mode: " + m);
}

std::string pick_format(const std::string& format, const char* fallback) {
    return format.empty() ? fallback : format;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"swallowtail spectral degeneracy toolkit"};
    app.require_subcommand(1);

    std::string out_path;
    std::string format;
    double tol_scale = 1.0;
    int threads = 1;
    app.add_option("--out", out_path, "write output to PATH instead of stdout");
    app.add_option("--format", format, "output format (default: json, csv for grids)")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--tol-scale", tol_scale, "scale classification tolerances")
        ->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker threads for grid scans")
        ->check(CLI::PositiveNumber);

    // classify
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "stratify one point of the swallowtail");
    classify_cmd->fallthrough();
    double in_q = 0.0, in_r = 0.0, in_s = 0.0;
    std::string coeffs_file;
    CLI::Option* opt_q = classify_cmd->add_option("--q", in_q, "quadratic coefficient");
    CLI::Option* opt_r = classify_cmd->add_option("--r", in_r, "linear coefficient");
    CLI::Option* opt_s = classify_cmd->add_option("--s", in_s, "constant coefficient");
    CLI::Option* opt_coeffs =
        classify_cmd->add_option("--coeffs", coeffs_file, "JSON file with q, r, s");
    ParamFlags classify_params;
    classify_params.attach(classify_cmd);

    // sweep
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "classify a fixed-q plane on an (r, s) grid");
    sweep_cmd->fallthrough();
    double sw_q = 0.0;
    double sw_rmin = 0.0, sw_rmax = 0.0, sw_smin = 0.0, sw_smax = 0.0;
    int sw_rn = 101, sw_sn = 101;
    sweep_cmd->add_option("--q", sw_q, "fixed quadratic coefficient")->required();
    sweep_cmd->add_option("--r-min", sw_rmin, "r lower bound")->required();
    sweep_cmd->add_option("--r-max", sw_rmax, "r upper bound")->required();
    sweep_cmd->add_option("--r-n", sw_rn, "r resolution");
    sweep_cmd->add_option("--s-min", sw_smin, "s lower bound")->required();
    sweep_cmd->add_option("--s-max", sw_smax, "s upper bound")->required();
    sweep_cmd->add_option("--s-n", sw_sn, "s resolution");

    // braid
    CLI::App* braid_cmd =
        app.add_subcommand("braid", "track eigenvalues around a parameter loop");
    braid_cmd->fallthrough();
    std::string braid_config;
    std::string strands_path;
    int braid_n = 0;
    double braid_dw1 = 0.0, braid_dw2 = 0.0;
    braid_cmd->add_option("--config", braid_config, "loop spec: JSON path or bundled name")
        ->required();
    CLI::Option* opt_braid_n =
        braid_cmd->add_option("--n-samples", braid_n, "override loop sample count");
    CLI::Option* opt_braid_dw1 =
        braid_cmd->add_option("--delta-omega-1", braid_dw1, "override detuning, mode 1");
    CLI::Option* opt_braid_dw2 =
        braid_cmd->add_option("--delta-omega-2", braid_dw2, "override detuning, mode 2");
    braid_cmd->add_option("--strands", strands_path, "also write the strand CSV to PATH");

    // surface
    CLI::App* surface_cmd =
        app.add_subcommand("surface", "sample the degenerate-spectrum surface");
    surface_cmd->fallthrough();
    std::string surf_mode;
    double su_amin = 0.0, su_amax = 5.0, su_bmin = -5.0, su_bmax = 5.0;
    int su_an = 101, su_bn = 101;
    double su_qmin = -3.0, su_qmax = 3.0, su_rmin = -3.0, su_rmax = 3.0;
    double su_smin = -3.0, su_smax = 3.0;
    int su_qn = 101, su_rn = 101, su_sn = 201;
    surface_cmd
        ->add_option("--mode", surf_mode,
                     "double-real | double-complex | g-zero-diabolical | "
                     "g-offset-exceptional | implicit")
        ->required()
        ->check(CLI::IsMember({"double-real", "double-complex", "g-zero-diabolical",
                               "g-offset-exceptional", "implicit"}));
    surface_cmd->add_option("--a-min", su_amin, "first parameter lower bound");
    surface_cmd->add_option("--a-max", su_amax, "first parameter upper bound");
    surface_cmd->add_option("--a-n", su_an, "first parameter resolution");
    surface_cmd->add_option("--b-min", su_bmin, "second parameter lower bound");
    surface_cmd->add_option("--b-max", su_bmax, "second parameter upper bound");
    surface_cmd->add_option("--b-n", su_bn, "second parameter resolution");
    surface_cmd->add_option("--q-min", su_qmin, "implicit: q lower bound");
    surface_cmd->add_option("--q-max", su_qmax, "implicit: q upper bound");
    surface_cmd->add_option("--q-n", su_qn, "implicit: q resolution");
    surface_cmd->add_option("--r-min", su_rmin, "implicit: r lower bound");
    surface_cmd->add_option("--r-max", su_rmax, "implicit: r upper bound");
    surface_cmd->add_option("--r-n", su_rn, "implicit: r resolution");
    surface_cmd->add_option("--s-min", su_smin, "implicit: s scan lower bound");
    surface_cmd->add_option("--s-max", su_smax, "implicit: s scan upper bound");
    surface_cmd->add_option("--s-n", su_sn, "implicit: s scan resolution");

    // check
    CLI::App* check_cmd =
        app.add_subcommand("check", "symmetry residuals and coefficient-map report");
    check_cmd->fallthrough();
    ParamFlags check_params;
    check_params.attach(check_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*classify_cmd) {
            const int n_inline = int(opt_q->count() + opt_r->count() + opt_s->count());
            if (n_inline != 0 && n_inline != 3)
                throw swt::precondition_error("--q, --r, --s must be given together");
            if (n_inline == 3 && opt_coeffs->count() > 0)
                throw swt::precondition_error("give either --q/--r/--s or --coeffs, not both");
            const bool have_coeffs = n_inline == 3 || opt_coeffs->count() > 0;
            const bool have_params = classify_params.any();
            if (!have_coeffs && !have_params)
                throw swt::precondition_error(
                    "give coefficients (--q/--r/--s or --coeffs) or model parameters");

            swt::Quartic c{};
            if (opt_coeffs->count() > 0)
                c = swt::quartic_from_json(read_json_file(coeffs_file));
            else if (n_inline == 3)
                c = {in_q, in_r, in_s};

            std::optional<swt::Mat4> e;
            if (have_params) {
                const swt::ModelParams p = classify_params.resolve();
                e = swt::traceless_dynamical_matrix(p);
                if (!have_coeffs) c = swt::char_poly_coeffs(*e);
            }

            const swt::DegeneracyClass d = swt::classify(c, e ? &*e : nullptr, tol_scale);
            const std::array<swt::cplx, 4> roots = swt::solve_depressed_quartic(c);
            if (pick_format(format, "json") == "json")
                write_output(out_path, swt::classification_to_json(c, d, roots));
            else
                write_output(out_path, swt::sweep_to_csv({{0.0, 0.0, c, d}}));
            return kOk;
        }

        if (*sweep_cmd) {
            if (!std::isfinite(sw_q))
                throw swt::precondition_error("q must be finite");
            check_axis(sw_rmin, sw_rmax, sw_rn, "r axis");
            check_axis(sw_smin, sw_smax, sw_sn, "s axis");
            const swt::AxisRange rr{sw_rmin, sw_rmax}, sr{sw_smin, sw_smax};
            std::vector<swt::SurfaceSample> rows(size_t(sw_rn) * size_t(sw_sn));
            swt::parallel_for(sw_rn * sw_sn, threads, [&](int idx) {
                const int i = idx / sw_sn, j = idx % sw_sn;
                const double r = swt::detail::grid_at(rr, sw_rn, i);
                const double s = swt::detail::grid_at(sr, sw_sn, j);
                const swt::Quartic c{sw_q, r, s};
                rows[size_t(idx)] = {r, s, c, swt::classify(c, nullptr, tol_scale)};
            });
            if (pick_format(format, "csv") == "csv") {
                write_output(out_path, swt::sweep_to_csv(rows));
            } else {
                std::string out = "[";
                bool first = true;
                for (const swt::SurfaceSample& row : rows) {
                    if (!first) out += ",";
                    first = false;
                    out += swt::classification_to_json(
                        row.coeffs, row.cls, swt::solve_depressed_quartic(row.coeffs));
                }
                write_output(out_path, out + "]");
            }
            return kOk;
        }

        if (*braid_cmd) {
            swt::LoopSpec spec =
                swt::loop_from_json(read_json_file(resolve_config(braid_config)));
            if (opt_braid_n->count() > 0) spec.n_samples = braid_n;
            if (opt_braid_dw1->count() > 0) spec.delta_omega_1 = braid_dw1;
            if (opt_braid_dw2->count() > 0) spec.delta_omega_2 = braid_dw2;
            swt::validate_loop(spec);

            const swt::FeasibilityReport rep = swt::loop_feasibility(spec);
            const swt::BraidResult res = swt::run_braid(spec);

            std::vector<std::string> warnings;
            const bool walled_off = !rep.crossings.empty() && !rep.encloses_elplus &&
                                    !rep.encloses_elminus;
            if (walled_off)
                warnings.push_back(
                    "loop crosses the particle-hole wall without enclosing an "
                    "exceptional line; no braiding is possible");
            for (const std::string& w : warnings) std::cerr << "swt: warning: " << w << "\n";

            if (!strands_path.empty())
                write_output(strands_path, swt::strands_to_csv(res.tracked));
            if (pick_format(format, "json") == "json")
                write_output(out_path, swt::braid_to_json(res, rep, warnings));
            else
                write_output(out_path, swt::strands_to_csv(res.tracked));
            return walled_off ? kDegenerateLoop : kOk;
        }

        if (*surface_cmd) {
            swt::SurfaceMesh mesh;
            if (surf_mode == "implicit") {
                check_axis(su_qmin, su_qmax, su_qn, "q axis");
                check_axis(su_rmin, su_rmax, su_rn, "r axis");
                check_axis(su_smin, su_smax, su_sn, "s axis");
                mesh = swt::sample_surface_implicit(
                    {{su_qmin, su_qmax}, {su_rmin, su_rmax}, {su_smin, su_smax}},
                    su_qn, su_rn, su_sn, threads, tol_scale);
            } else {
                check_axis(su_amin, su_amax, su_an, "first axis");
                check_axis(su_bmin, su_bmax, su_bn, "second axis");
                mesh = swt::sample_surface_parametric(parse_surface_mode(surf_mode),
                                                      {su_amin, su_amax}, {su_bmin, su_bmax},
                                                      su_an, su_bn, threads, tol_scale);
            }
            if (pick_format(format, "csv") == "csv")
                write_output(out_path, swt::surface_to_csv(mesh));
            else
                write_output(out_path, swt::surface_to_json(mesh));
            return kOk;
        }

        if (*check_cmd) {
            const swt::ModelParams p = check_params.resolve();
            const swt::Mat4 m = swt::build_dynamical_matrix(p);
            const swt::Mat4 e = swt::traceless_dynamical_matrix(p);
            const double ph = swt::particle_hole_residual(m);
            const double psh = swt::pseudo_hermiticity_residual(e);
            const swt::Quartic ct = swt::char_poly_coeffs(e);
            const swt::Quartic cc = swt::forward_map(p);
            const double coeff_delta =
                std::max({std::abs(ct.q - cc.q), std::abs(ct.r - cc.r), std::abs(ct.s - cc.s)});
            std::optional<double> det_j;
            if (p.simple()) det_j = swt::jacobian(p).det;
            const swt::DegeneracyClass d = swt::classify(ct, &e, tol_scale);

            if (pick_format(format, "json") == "json") {
                std::string out = "{";
                out += "\"particle_hole_residual\":" + swt::fmt(ph) + ",";
                out += "\"pseudo_hermiticity_residual\":" + swt::fmt(psh) + ",";
                out += "\"coeffs_trace\":{\"q\":" + swt::fmt(ct.q) + ",\"r\":" + swt::fmt(ct.r) +
                       ",\"s\":" + swt::fmt(ct.s) + "},";
                out += "\"coeffs_closed\":{\"q\":" + swt::fmt(cc.q) + ",\"r\":" + swt::fmt(cc.r) +
                       ",\"s\":" + swt::fmt(cc.s) + "},";
                out += "\"max_coeff_delta\":" + swt::fmt(coeff_delta) + ",";
                out += "\"kind\":\"" + std::string(swt::to_string(d.kind)) + "\",";
                out += "\"defectiveness\":\"" + std::string(swt::to_string(d.defectiveness)) +
                       "\",";
                out += "\"jacobian_det\":" + (det_j ? swt::fmt(*det_j) : std::string("null"));
                write_output(out_path, out + "}");
            } else {
                write_output(out_path, swt::map_points_to_csv({{p, ct, det_j}}));
            }
            return kOk;
        }
    } catch (const swt::precondition_error& e) {
        std::cerr << "swt: error: " << e.what() << "\n";
        return kInputError;
    } catch (const swt::malformed_matrix_error& e) {
        std::cerr << "swt: error: " << e.what() << "\n";
        return kInputError;
    } catch (const swt::input_mismatch_error& e) {
        std::cerr << "swt: error: " << e.what() << "\n";
        return kInputError;
    } catch (const swt::gauge_unavailable_error& e) {
        std::cerr << "swt: error: " << e.what() << "\n";
        return kInputError;
    } catch (const swt::degeneracy_error& e) {
        std::cerr << "swt: error: " << e.what() << "\n";
        return kDegenerateLoop;
    } catch (const swt::error& e) {
        // numerical_failure, ambiguity, no_inverse, singular_map
        std::cerr << "swt: error: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "swt: error: " << e.what() << "\n";
        return kNumericalFailure;
    }
    return kOk;
}
