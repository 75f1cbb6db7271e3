#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "oracles.hpp"
#include "swt/swallowtail.hpp"

namespace {

std::string cli() { return "\"" + oracle::cli_path() + "\""; }

oracle::CmdResult swt_run(const std::string& args) {
    return oracle::run_command(cli() + " " + args);
}

}  // namespace

TEST_CASE("classify: coefficient fixtures") {
    const oracle::CmdResult reg = swt_run("classify --q 1 --r 1 --s 1");
    CHECK(reg.exit_code == 0);
    CHECK(reg.output.find("\"kind\":\"Regular\"") != std::string::npos);
    CHECK(reg.output.find("\"discriminant\":257") != std::string::npos);

    CHECK(swt_run("classify --q 2 --r 0 --s 1").output.find("\"kind\":\"ELplus\"") !=
          std::string::npos);
    CHECK(swt_run("classify --q -2 --r 0 --s 1").output.find("\"kind\":\"ELminus\"") !=
          std::string::npos);
    CHECK(swt_run("classify --q -1.5 --r 1 --s -0.1875").output.find("\"kind\":\"DL3\"") !=
          std::string::npos);
    CHECK(swt_run("classify --q 0 --r 0 --s 0").output.find("\"kind\":\"EP4\"") !=
          std::string::npos);
}

TEST_CASE("classify: model parameters fill in the eigenstructure") {
    const oracle::CmdResult dl3 = swt_run("classify --gamma-1 2 --xi-1 1");
    CHECK(dl3.exit_code == 0);
    CHECK(dl3.output.find("\"kind\":\"DL3\"") != std::string::npos);
    CHECK(dl3.output.find("\"defectiveness\":\"Diabolical\"") != std::string::npos);

    // coefficients and parameters together: cross-checked, eigenstructure used
    const oracle::CmdResult both = swt_run("classify --q 2 --r 0 --s 1 --g 1");
    CHECK(both.exit_code == 0);
    CHECK(both.output.find("\"defectiveness\":\"Diabolical\"") != std::string::npos);

    // mismatching matrix is an input error
    CHECK(swt_run("classify --q 5 --r 0 --s 1 --g 1").exit_code == 2);
}

TEST_CASE("classify: input validation") {
    CHECK(swt_run("classify").exit_code == 2);
    CHECK(swt_run("classify --q 5").exit_code == 2);
    CHECK(swt_run("classify --q 1 --r 1").exit_code == 2);
    CHECK(swt_run("nonsense").exit_code == 2);
    CHECK(swt_run("").exit_code == 2);
}

TEST_CASE("classify: coefficients from a file") {
    const std::string good = oracle::temp_path("coeffs.json");
    oracle::write_file(good, R"({"q":-1.5,"r":1,"s":-0.1875})");
    const oracle::CmdResult res = swt_run("classify --coeffs " + good);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("\"kind\":\"DL3\"") != std::string::npos);

    // file plus inline coefficients is ambiguous
    CHECK(swt_run("classify --coeffs " + good + " --q 1 --r 1 --s 1").exit_code == 2);

    const std::string bad = oracle::temp_path("broken.json");
    oracle::write_file(bad, "{\"q\":1,");
    CHECK(swt_run("classify --coeffs " + bad).exit_code == 2);

    const std::string unknown = oracle::temp_path("unknown.json");
    oracle::write_file(unknown, R"({"q":1,"t":2})");
    CHECK(swt_run("classify --coeffs " + unknown).exit_code == 2);

    CHECK(swt_run("classify --coeffs /nonexistent/coeffs.json").exit_code == 2);
    std::remove(good.c_str());
    std::remove(bad.c_str());
    std::remove(unknown.c_str());
}

TEST_CASE("classify: parameter file excludes inline flags") {
    const std::string params = oracle::temp_path("params.json");
    oracle::write_file(params, R"({"gamma_1":2,"xi_1":1})");
    const oracle::CmdResult res = swt_run("classify --params " + params);
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("\"kind\":\"DL3\"") != std::string::npos);
    CHECK(swt_run("classify --params " + params + " --g 1").exit_code == 2);
    std::remove(params.c_str());
}

TEST_CASE("classify: csv format and tolerance scaling") {
    const oracle::CmdResult csv = swt_run("classify --q 2 --r 0 --s 1 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.output.rfind("q,r,s,re_lambda_1", 0) == 0);
    CHECK(csv.output.find("2,0,1,0,-1,0,-1,0,1,0,1,ELplus") != std::string::npos);

    CHECK(swt_run("classify --q 1e-9 --r 0 --s 0").output.find("\"kind\":\"ELplus\"") !=
          std::string::npos);
    CHECK(swt_run("classify --q 1e-9 --r 0 --s 0 --tol-scale 100")
              .output.find("\"kind\":\"EP4\"") != std::string::npos);
    CHECK(swt_run("classify --q 1 --r 1 --s 1 --tol-scale -1").exit_code == 2);
}

TEST_CASE("sweep: grids, formats, determinism") {
    const oracle::CmdResult origin =
        swt_run("sweep --q 0 --r-min 0 --r-max 0 --r-n 1 --s-min 0 --s-max 0 --s-n 1");
    CHECK(origin.exit_code == 0);
    CHECK(origin.output ==
          "q,r,s,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2,"
          "re_lambda_3,im_lambda_3,re_lambda_4,im_lambda_4,kind\n"
          "0,0,0,0,0,0,0,0,0,0,0,EP4\n");

    const oracle::CmdResult dl3 = swt_run(
        "sweep --q -1.5 --r-min -1 --r-max 1 --r-n 3 --s-min -0.1875 --s-max -0.1875 --s-n 1");
    CHECK(dl3.exit_code == 0);
    size_t hits = 0, pos = 0;
    while ((pos = dl3.output.find(",DL3\n", pos)) != std::string::npos) {
        ++hits;
        pos += 4;
    }
    CHECK(hits == 2);  // both signs of r sit on the triple-root line

    const oracle::CmdResult js =
        swt_run("sweep --q 0 --r-min -1 --r-max 1 --r-n 2 --s-min 0 --s-max 1 --s-n 2 "
                "--format json");
    CHECK(js.exit_code == 0);
    CHECK(js.output.rfind("[", 0) == 0);
    CHECK(js.output.find("\"kind\":") != std::string::npos);

    CHECK(swt_run("sweep --q 0 --r-min 0 --r-max 0 --r-n 5 --s-min 0 --s-max 1 --s-n 2")
              .exit_code == 2);
    CHECK(swt_run("sweep --q 0 --r-min 1 --r-max -1 --r-n 2 --s-min 0 --s-max 1 --s-n 2")
              .exit_code == 2);
    CHECK(swt_run("sweep --r-min 0 --r-max 1 --s-min 0 --s-max 1").exit_code == 2);

    // byte-determinism across --out and thread counts
    const std::string f1 = oracle::temp_path("sweep1.csv");
    const std::string f2 = oracle::temp_path("sweep2.csv");
    const std::string common =
        "sweep --q -1.5 --r-min -2 --r-max 2 --r-n 21 --s-min -1 --s-max 1 --s-n 21 --out ";
    CHECK(swt_run(common + f1).exit_code == 0);
    CHECK(swt_run("--threads 4 " + common + f2).exit_code == 0);
    const std::string c1 = oracle::read_file(f1);
    CHECK(!c1.empty());
    CHECK(c1 == oracle::read_file(f2));
    std::remove(f1.c_str());
    std::remove(f2.c_str());
}

TEST_CASE("braid: bundled configs and overrides") {
    const oracle::CmdResult l2 = swt_run("braid --config l2 --n-samples 256");
    CHECK(l2.exit_code == 0);
    CHECK(l2.output.find("\"word\":[-1,3]") != std::string::npos);
    CHECK(l2.output.find("\"exponent_sum\":0") != std::string::npos);
    CHECK(l2.output.find("\"cycle_type\":[2,2]") != std::string::npos);
    CHECK(l2.output.find("\"strand_permutation\":[2,3,0,1]") != std::string::npos);
    CHECK(l2.output.find("\"encloses_elplus\":true") != std::string::npos);

    const oracle::CmdResult l1 = swt_run("braid --config l1 --n-samples 256");
    CHECK(l1.exit_code == 0);
    CHECK(l1.output.find("\"word\":[]") != std::string::npos);
    CHECK(l1.output.find("\"strand_permutation\":[0,1,2,3]") != std::string::npos);

    // suppressing the second detuning walls the loop off: reported, exit 3
    const oracle::CmdResult walled =
        swt_run("braid --config l2 --n-samples 256 --delta-omega-2 0");
    CHECK(walled.exit_code == 3);
    CHECK(walled.output.find("no braiding is possible") != std::string::npos);
    CHECK(walled.output.find("\"encloses_elplus\":false") != std::string::npos);

    CHECK(swt_run("braid --config no-such-loop").exit_code == 2);
    CHECK(swt_run("braid").exit_code == 2);
    CHECK(swt_run("braid --config l2 --n-samples 63").exit_code == 2);
}

TEST_CASE("braid: degenerate loop exits 3") {
    const std::string cfg = oracle::temp_path("degenerate.json");
    oracle::write_file(cfg, R"({"a_xi":2,"m_xi":0.3,"a_g":1,"a_gamma":0})");
    CHECK(swt_run("braid --config " + cfg).exit_code == 3);
    std::remove(cfg.c_str());
}

TEST_CASE("braid: strand export") {
    const std::string strands = oracle::temp_path("strands.csv");
    const oracle::CmdResult res =
        swt_run("braid --config l2 --n-samples 256 --strands " + strands);
    CHECK(res.exit_code == 0);
    const std::string csv = oracle::read_file(strands);
    CHECK(csv.rfind("phi,strand,re_lambda,im_lambda\n", 0) == 0);
    // 257 samples x 4 strands + header
    size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 1029);
    std::remove(strands.c_str());

    const oracle::CmdResult direct = swt_run("braid --config l1 --n-samples 256 --format csv");
    CHECK(direct.exit_code == 0);
    CHECK(direct.output.rfind("phi,strand,re_lambda,im_lambda\n", 0) == 0);
}

TEST_CASE("surface: parametric and implicit modes") {
    const oracle::CmdResult s2 = swt_run(
        "surface --mode double-complex --a-min -2 --a-max 2 --a-n 9 --b-min -2 --b-max 2 "
        "--b-n 9");
    CHECK(s2.exit_code == 0);
    CHECK(s2.output.rfind("q,r,s,kind,defectiveness\n", 0) == 0);
    CHECK(s2.output.find(",S2,") != std::string::npos);

    const oracle::CmdResult empty = swt_run(
        "surface --mode implicit --q-min -2 --q-max -1 --q-n 2 --r-min 0.5 --r-max 1 "
        "--r-n 2 --s-min 100 --s-max 200 --s-n 11");
    CHECK(empty.exit_code == 0);
    CHECK(empty.output == "q,r,s,kind,defectiveness\n");

    const oracle::CmdResult dl3 = swt_run(
        "surface --mode implicit --q-min -2 --q-max -1 --q-n 3 --r-min 0.5 --r-max 1.5 "
        "--r-n 3 --s-min -0.3 --s-max -0.1 --s-n 41 --format json");
    CHECK(dl3.exit_code == 0);
    CHECK(dl3.output.find("\"kind\":\"DL3\"") != std::string::npos);

    CHECK(swt_run("surface --mode g-offset-exceptional --a-min -1 --a-max 1 --b-min 0 "
                  "--b-max 1 --a-n 3 --b-n 3")
              .exit_code == 2);
    CHECK(swt_run("surface --mode pringle").exit_code == 2);
    CHECK(swt_run("surface").exit_code == 2);
}

TEST_CASE("check: residual and map report") {
    const oracle::CmdResult res = swt_run("check --g 1 --xi-1 1");
    CHECK(res.exit_code == 0);
    const nlohmann::json j = nlohmann::json::parse(res.output);
    CHECK(j["particle_hole_residual"].get<double>() <= 1e-12);
    CHECK(j["max_coeff_delta"].get<double>() <= 1e-12);
    CHECK(j["jacobian_det"].get<double>() == 4.0);
    CHECK(j["kind"] == "Regular");
    CHECK(j["defectiveness"] == "NotApplicable");
    CHECK(j["coeffs_closed"]["q"].get<double>() == 1.0);

    // xi_1 = 0 puts the point on the double-complex sheet with a full eigenbasis
    const oracle::CmdResult el = swt_run("check --g 1");
    CHECK(el.exit_code == 0);
    const nlohmann::json je = nlohmann::json::parse(el.output);
    CHECK(je["kind"] == "ELplus");
    CHECK(je["defectiveness"] == "Diabolical");
    CHECK(je["coeffs_closed"]["q"].get<double>() == 2.0);

    // chi breaks the restricted model: no Jacobian
    const oracle::CmdResult chi = swt_run("check --chi 0.5 --g 1 --xi-1 1");
    CHECK(chi.exit_code == 0);
    CHECK(chi.output.find("\"jacobian_det\":null") != std::string::npos);

    // balanced decay: pseudo-hermiticity holds
    const oracle::CmdResult bal =
        swt_run("check --gamma-1 0.8 --gamma-2 0.8 --g 0.3 --xi-1 0.9 --delta-omega-1 0.2");
    CHECK(bal.exit_code == 0);
    const nlohmann::json jb = nlohmann::json::parse(bal.output);
    CHECK(jb["pseudo_hermiticity_residual"].get<double>() <= 1e-12);

    const oracle::CmdResult csv = swt_run("check --g 1 --xi-1 1 --format csv");
    CHECK(csv.exit_code == 0);
    CHECK(csv.output ==
          "gamma_minus,xi_1,g,delta_omega_1,delta_omega_2,q,r,s,det_J\n"
          "0,1,1,0,0,1,0,1,4\n");

    CHECK(swt_run("check --g -1").exit_code == 2);
}

TEST_CASE("output goes to --out verbatim") {
    const std::string f = oracle::temp_path("classify.json");
    const oracle::CmdResult direct = swt_run("classify --q 1 --r 1 --s 1");
    CHECK(swt_run("classify --q 1 --r 1 --s 1 --out " + f).exit_code == 0);
    CHECK(oracle::read_file(f) == direct.output);
    CHECK(swt_run("classify --q 1 --r 1 --s 1 --out /nonexistent/dir/x.json").exit_code == 2);
    std::remove(f.c_str());
}
