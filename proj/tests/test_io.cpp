#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "swt/swallowtail.hpp"

using swt::cplx;

TEST_CASE("number formatting is byte-stable") {
    CHECK(swt::fmt(0.1) == "0.10000000000000001");
    CHECK(swt::fmt(1.0) == "1");
    CHECK(swt::fmt(-1.5) == "-1.5");
    CHECK(swt::fmt(0.0) == "0");
    CHECK(swt::fmt(-0.0) == "0");  // negative zero never leaks into output
    CHECK(swt::fmt(257.0) == "257");
}

TEST_CASE("parameter json round-trips") {
    swt::ModelParams p;
    p.gamma_1 = 0.3;
    p.gamma_2 = 0.1;
    p.g = 0.7;
    p.phi_g = 0.4;
    p.xi_1 = 1.1;
    p.phi_1 = 0.9;
    p.xi_2 = 0.5;
    p.phi_2 = -0.6;
    p.chi = 0.25;
    p.phi_chi = 1.3;
    p.delta_omega_1 = 0.2;
    p.delta_omega_2 = -0.35;

    const std::string text = swt::params_to_json(p);
    const swt::ModelParams back = swt::params_from_json(nlohmann::json::parse(text));
    CHECK(back.gamma_1 == p.gamma_1);
    CHECK(back.gamma_2 == p.gamma_2);
    CHECK(back.g == p.g);
    CHECK(back.phi_g == p.phi_g);
    CHECK(back.xi_1 == p.xi_1);
    CHECK(back.phi_1 == p.phi_1);
    CHECK(back.xi_2 == p.xi_2);
    CHECK(back.phi_2 == p.phi_2);
    CHECK(back.chi == p.chi);
    CHECK(back.phi_chi == p.phi_chi);
    CHECK(back.delta_omega_1 == p.delta_omega_1);
    CHECK(back.delta_omega_2 == p.delta_omega_2);
}

TEST_CASE("parsers reject malformed documents") {
    using nlohmann::json;
    CHECK_THROWS_AS(swt::params_from_json(json::parse(R"({"gamma_x":1})")),
                    swt::precondition_error);
    CHECK_THROWS_AS(swt::params_from_json(json::parse(R"({"g":"strong"})")),
                    swt::precondition_error);
    CHECK_THROWS_AS(swt::params_from_json(json::parse(R"([1,2,3])")), swt::precondition_error);
    CHECK_THROWS_AS(swt::params_from_json(json::parse(R"({"g":-1})")), swt::precondition_error);

    CHECK_THROWS_AS(swt::loop_from_json(json::parse(R"({"a_g":1,"a_gamma":1})")),
                    swt::precondition_error);
    CHECK_THROWS_AS(
        swt::loop_from_json(json::parse(R"({"a_xi":1,"a_g":1,"a_gamma":1,"n_samples":1024.5})")),
        swt::precondition_error);

    CHECK_THROWS_AS(swt::quartic_from_json(json::parse(R"({"q":1,"t":2})")),
                    swt::precondition_error);
}

TEST_CASE("loop json covers defaults and the bundled configs") {
    using nlohmann::json;
    const swt::LoopSpec minimal =
        swt::loop_from_json(json::parse(R"({"a_xi":1,"a_g":1,"a_gamma":1})"));
    CHECK(minimal.n_samples == 1024);
    CHECK(minimal.m_xi == 0.0);
    CHECK(minimal.delta_omega_2 == 0.0);

    const swt::LoopSpec l2 = swt::loop_from_json(
        json::parse(oracle::read_file(oracle::config_dir() + "/l2.json")));
    CHECK(l2.a_xi == 1.5);
    CHECK(l2.a_g == 1.4);
    CHECK(l2.a_gamma == 0.1);
    CHECK(l2.m_gamma == 2.0);
    CHECK(l2.delta_omega_2 == 0.92);
    CHECK(l2.n_samples == 1024);

    const swt::LoopSpec l1 = swt::loop_from_json(
        json::parse(oracle::read_file(oracle::config_dir() + "/l1.json")));
    CHECK(l1.a_gamma == 1.0);
    CHECK(l1.m_gamma == 0.1);
}

TEST_CASE("classification serializes to a fixed byte string") {
    const swt::Quartic c{-1.5, 1.0, -0.1875};
    const swt::DegeneracyClass d = swt::classify(c);
    const auto roots = swt::solve_depressed_quartic(c);
    CHECK(swt::classification_to_json(c, d, roots) ==
          R"({"kind":"DL3","defectiveness":"Unknown","q":-1.5,"r":1,"s":-0.1875,)"
          R"("discriminant":0,"resolvent":0,"boundary":false,)"
          R"("roots":[[-1.5,0],[0.5,0],[0.5,0],[0.5,0]]})");
}

TEST_CASE("csv writers emit pinned headers and rows") {
    const swt::Quartic c{2.0, 0.0, 1.0};
    swt::SurfaceSample row{0.0, 0.0, c, swt::classify(c)};
    CHECK(swt::sweep_to_csv({row}) ==
          "q,r,s,re_lambda_1,im_lambda_1,re_lambda_2,im_lambda_2,"
          "re_lambda_3,im_lambda_3,re_lambda_4,im_lambda_4,kind\n"
          "2,0,1,0,-1,0,-1,0,1,0,1,ELplus\n");

    swt::SurfaceMesh mesh;
    mesh.provenance = "double-real";
    mesh.samples.push_back(row);
    const std::string sc = swt::surface_to_csv(mesh);
    CHECK(sc.rfind("q,r,s,kind,defectiveness\n", 0) == 0);
    CHECK(sc.find("2,0,1,ELplus,Unknown\n") != std::string::npos);

    const std::string sj = swt::surface_to_json(mesh);
    CHECK(sj.find("\"provenance\":\"double-real\"") != std::string::npos);
    CHECK(sj.find("\"kind\":\"ELplus\"") != std::string::npos);

    swt::TrackedStrands t;
    t.phis = {0.0};
    t.strands = {{cplx(1.0, 2.0), cplx(3.0), cplx(0.0, -1.0), cplx(-2.5)}};
    CHECK(swt::strands_to_csv(t) ==
          "phi,strand,re_lambda,im_lambda\n"
          "0,0,1,2\n0,1,3,0\n0,2,0,-1\n0,3,-2.5,0\n");
}

TEST_CASE("map point rows carry an optional determinant") {
    swt::MapPoint with;
    with.params.gamma_1 = 1.0;
    with.params.xi_1 = 1.0;
    with.params.g = 1.0;
    with.coeffs = swt::forward_map(with.params);
    with.jacobian_det = swt::jacobian(with.params).det;

    swt::MapPoint without = with;
    without.jacobian_det.reset();

    const std::string csv = swt::map_points_to_csv({with, without});
    const std::string expect_prefix = "gamma_minus,xi_1,g,delta_omega_1,delta_omega_2,q,r,s,det_J\n";
    REQUIRE(csv.rfind(expect_prefix, 0) == 0);
    const std::string body = csv.substr(expect_prefix.size());
    const size_t nl = body.find('\n');
    const std::string row1 = body.substr(0, nl);
    const std::string row2 = body.substr(nl + 1, body.size() - nl - 2);
    CHECK(row1.substr(row1.rfind(',') + 1) == swt::fmt(swt::jacobian(with.params).det));
    CHECK(row2.back() == ',');  // absent determinant leaves the field empty
}

TEST_CASE("feasibility and braid serialization") {
    swt::FeasibilityReport empty;
    CHECK(swt::feasibility_to_json(empty) ==
          R"({"crossings":[],"encloses_elplus":false,"encloses_elminus":false,)"
          R"("min_abs_discriminant":0,"min_abs_discriminant_phi":0})");

    swt::BraidResult res;
    res.word = {-1, 3};
    res.invariants = swt::braid_invariants(res.word);
    res.strand_permutation = {2, 3, 0, 1};
    res.tracked.phis = {0.0, 1.0};
    res.tracked.strands.resize(2);
    res.tracked.min_gap = 0.25;

    const std::string out = swt::braid_to_json(res, empty, {"careful"});
    CHECK(out.find("\"word\":[-1,3]") != std::string::npos);
    CHECK(out.find("\"strand_permutation\":[2,3,0,1]") != std::string::npos);
    CHECK(out.find("\"cycle_type\":[2,2]") != std::string::npos);
    CHECK(out.find("\"exponent_sum\":0") != std::string::npos);
    CHECK(out.find("\"n_samples\":1") != std::string::npos);
    CHECK(out.find("\"min_gap\":0.25") != std::string::npos);
    CHECK(out.find("\"warnings\":[\"careful\"]") != std::string::npos);
}
