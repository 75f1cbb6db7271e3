#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swt/braid.hpp"
#include "swt/catastrophe.hpp"
#include "swt/errors.hpp"
#include "swt/model.hpp"
#include "swt/parammap.hpp"
#include "swt/quartic.hpp"

namespace swt {

// All emitted numbers go through one formatter so output is byte-stable.
inline std::string fmt(double v) {
    if (v == 0.0) v = 0.0;  // collapse negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline double num_field(const nlohmann::json& j, const char* key, double fallback,
                        bool* found = nullptr) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (found) *found = false;
        return fallback;
    }
    if (!it->is_number())
        throw precondition_error(std::string("field '") + key + "' must be a number");
    if (found) *found = true;
    return it->get<double>();
}

inline void reject_unknown(const nlohmann::json& j,
                           std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw precondition_error("unknown field '" + it.key() + "'");
    }
}

}  // namespace detail

// Flat parameter object; absent fields read as zero.
inline ModelParams params_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw precondition_error("parameters must be a JSON object");
    detail::reject_unknown(j, {"gamma_1", "gamma_2", "g", "phi_g", "xi_1", "phi_1", "xi_2",
                               "phi_2", "chi", "phi_chi", "delta_omega_1", "delta_omega_2"});
    ModelParams p;
    p.gamma_1 = detail::num_field(j, "gamma_1", 0.0);
    p.gamma_2 = detail::num_field(j, "gamma_2", 0.0);
    p.g = detail::num_field(j, "g", 0.0);
    p.phi_g = detail::num_field(j, "phi_g", 0.0);
    p.xi_1 = detail::num_field(j, "xi_1", 0.0);
    p.phi_1 = detail::num_field(j, "phi_1", 0.0);
    p.xi_2 = detail::num_field(j, "xi_2", 0.0);
    p.phi_2 = detail::num_field(j, "phi_2", 0.0);
    p.chi = detail::num_field(j, "chi", 0.0);
    p.phi_chi = detail::num_field(j, "phi_chi", 0.0);
    p.delta_omega_1 = detail::num_field(j, "delta_omega_1", 0.0);
    p.delta_omega_2 = detail::num_field(j, "delta_omega_2", 0.0);
    return normalized(p);
}

inline std::string params_to_json(const ModelParams& p) {
    std::string out = "{";
    const char* keys[] = {"gamma_1", "gamma_2", "g", "phi_g", "xi_1", "phi_1",
                          "xi_2", "phi_2", "chi", "phi_chi", "delta_omega_1",
                          "delta_omega_2"};
    const double vals[] = {p.gamma_1, p.gamma_2, p.g, p.phi_g, p.xi_1, p.phi_1,
                           p.xi_2, p.phi_2, p.chi, p.phi_chi, p.delta_omega_1,
                           p.delta_omega_2};
    for (int i = 0; i < 12; ++i) {
        if (i) out += ",";
        out += std::string("\"") + keys[i] + "\":" + fmt(vals[i]);
    }
    return out + "}";
}

inline LoopSpec loop_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw precondition_error("loop spec must be a JSON object");
    detail::reject_unknown(j, {"a_xi", "m_xi", "a_g", "m_g", "a_gamma", "m_gamma",
                               "delta_omega_1", "delta_omega_2", "n_samples"});
    LoopSpec s;
    bool have = false;
    s.a_xi = detail::num_field(j, "a_xi", 0.0, &have);
    if (!have) throw precondition_error("loop spec needs a_xi");
    s.a_g = detail::num_field(j, "a_g", 0.0, &have);
    if (!have) throw precondition_error("loop spec needs a_g");
    s.a_gamma = detail::num_field(j, "a_gamma", 0.0, &have);
    if (!have) throw precondition_error("loop spec needs a_gamma");
    s.m_xi = detail::num_field(j, "m_xi", 0.0);
    s.m_g = detail::num_field(j, "m_g", 0.0);
    s.m_gamma = detail::num_field(j, "m_gamma", 0.0);
    s.delta_omega_1 = detail::num_field(j, "delta_omega_1", 0.0);
    s.delta_omega_2 = detail::num_field(j, "delta_omega_2", 0.0);
    const double n = detail::num_field(j, "n_samples", 1024.0);
    if (n != double(int(n))) throw precondition_error("n_samples must be an integer");
    s.n_samples = int(n);
    return s;
}

inline Quartic quartic_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw precondition_error("coefficients must be a JSON object");
    detail::reject_unknown(j, {"q", "r", "s"});
    return {detail::num_field(j, "q", 0.0), detail::num_field(j, "r", 0.0),
            detail::num_field(j, "s", 0.0)};
}

// --- writers -----------------------------------------------------------

inline std::string classification_to_json(const Quartic& c, const DegeneracyClass& d,
                                          const std::array<cplx, 4>& roots) {
    std::string out = "{";
    out += "\"kind\":\"" + std::string(to_string(d.kind)) + "\",";
    out += "\"defectiveness\":\"" + std::string(to_string(d.defectiveness)) + "\",";
    out += "\"q\":" + fmt(c.q) + ",\"r\":" + fmt(c.r) + ",\"s\":" + fmt(c.s) + ",";
    out += "\"discriminant\":" + fmt(d.discriminant) + ",";
    out += "\"resolvent\":" + fmt(d.resolvent) + ",";
    out += std::string("\"boundary\":") + (d.boundary ? "true" : "false") + ",";
    out += "\"roots\":[";
    for (int i = 0; i < 4; ++i) {
        if (i) out += ",";
        out += "[" + fmt(roots[i].real()) + "," + fmt(roots[i].imag()) + "]";
    }
    return out + "]}";
}

inline std::string sweep_to_csv(const std::vector<SurfaceSample>& rows) {
    std::string out =
        "q,r,s,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2,"
        "re_lambda_3,im_lambda_3,re_lambda_4,im_lambda_4,kind\n";
    for (const SurfaceSample& row : rows) {
        const std::array<cplx, 4> roots = solve_depressed_quartic(row.coeffs);
        out += fmt(row.coeffs.q) + "," + fmt(row.coeffs.r) + "," + fmt(row.coeffs.s);
        for (const cplx& z : roots) out += "," + fmt(z.real()) + "," + fmt(z.imag());
        out += std::string(",") + to_string(row.cls.kind) + "\n";
    }
    return out;
}

inline std::string surface_to_csv(const SurfaceMesh& mesh) {
    std::string out = "q,r,s,kind,defectiveness\n";
    for (const SurfaceSample& p : mesh.samples) {
        out += fmt(p.coeffs.q) + "," + fmt(p.coeffs.r) + "," + fmt(p.coeffs.s);
        out += std::string(",") + to_string(p.cls.kind) + "," +
               to_string(p.cls.defectiveness) + "\n";
    }
    return out;
}

inline std::string surface_to_json(const SurfaceMesh& mesh) {
    std::string out = "{\"provenance\":\"" + mesh.provenance + "\",\"samples\":[";
    bool first = true;
    for (const SurfaceSample& p : mesh.samples) {
        if (!first) out += ",";
        first = false;
        out += "{\"a\":" + fmt(p.a) + ",\"b\":" + fmt(p.b) + ",\"q\":" + fmt(p.coeffs.q) +
               ",\"r\":" + fmt(p.coeffs.r) + ",\"s\":" + fmt(p.coeffs.s) +
               ",\"kind\":\"" + to_string(p.cls.kind) + "\",\"defectiveness\":\"" +
               to_string(p.cls.defectiveness) + "\"}";
    }
    return out + "]}";
}

inline std::string strands_to_csv(const TrackedStrands& t) {
    std::string out = "phi,strand,re_lambda,im_lambda\n";
    for (size_t k = 0; k < t.strands.size(); ++k)
        for (int i = 0; i < 4; ++i)
            out += fmt(t.phis[k]) + "," + std::to_string(i) + "," +
                   fmt(t.strands[k][i].real()) + "," + fmt(t.strands[k][i].imag()) + "\n";
    return out;
}

inline std::string feasibility_to_json(const FeasibilityReport& rep) {
    std::string out = "{\"crossings\":[";
    for (size_t i = 0; i < rep.crossings.size(); ++i) {
        if (i) out += ",";
        const PhpCrossing& c = rep.crossings[i];
        out += "{\"phi\":" + fmt(c.phi) + ",\"q\":" + fmt(c.q) + ",\"s\":" + fmt(c.s) +
               ",\"offset\":" + fmt(c.offset) + "}";
    }
    out += "],\"encloses_elplus\":";
    out += rep.encloses_elplus ? "true" : "false";
    out += ",\"encloses_elminus\":";
    out += rep.encloses_elminus ? "true" : "false";
    out += ",\"min_abs_discriminant\":" + fmt(rep.min_abs_discriminant);
    out += ",\"min_abs_discriminant_phi\":" + fmt(rep.min_abs_discriminant_phi);
    return out + "}";
}

inline std::string braid_to_json(const BraidResult& res, const FeasibilityReport& rep,
                                 const std::vector<std::string>& warnings) {
    std::string out = "{\"word\":[";
    for (size_t i = 0; i < res.word.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(res.word[i]);
    }
    out += "],\"strand_permutation\":[";
    for (int i = 0; i < 4; ++i) {
        if (i) out += ",";
        out += std::to_string(res.strand_permutation[i]);
    }
    out += "],\"cycle_type\":[";
    for (size_t i = 0; i < res.invariants.cycle_type.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(res.invariants.cycle_type[i]);
    }
    out += "],\"exponent_sum\":" + std::to_string(res.invariants.exponent_sum);
    out += ",\"n_positive\":" + std::to_string(res.invariants.n_positive);
    out += ",\"n_negative\":" + std::to_string(res.invariants.n_negative);
    out += ",\"n_samples\":" + std::to_string(int(res.tracked.strands.size()) - 1);
    out += ",\"min_gap\":" + fmt(res.tracked.min_gap);
    out += ",\"feasibility\":" + feasibility_to_json(rep);
    out += ",\"warnings\":[";
    for (size_t i = 0; i < warnings.size(); ++i) {
        if (i) out += ",";
        out += "\"" + warnings[i] + "\"";
    }
    return out + "]}";
}

struct MapPoint {
    ModelParams params;
    Quartic coeffs;
    std::optional<double> jacobian_det;
};

inline std::string map_points_to_csv(const std::vector<MapPoint>& pts) {
    std::string out = "gamma_minus,xi_1,g,delta_omega_1,delta_omega_2,q,r,s,det_J\n";
    for (const MapPoint& p : pts) {
        out += fmt(p.params.gamma_minus()) + "," + fmt(p.params.xi_1) + "," +
               fmt(p.params.g) + "," + fmt(p.params.delta_omega_1) + "," +
               fmt(p.params.delta_omega_2) + "," + fmt(p.coeffs.q) + "," +
               fmt(p.coeffs.r) + "," + fmt(p.coeffs.s) + ",";
        if (p.jacobian_det) out += fmt(*p.jacobian_det);
        out += "\n";
    }
    return out;
}

}  // namespace swt
