#include "hermitube/io.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hermitube;

TEST_CASE("model serialization round trip") {
  auto sp2 = LieModel::build(Family::SpR, 2);
  json j = model_to_json(sp2);
  CHECK(j.at("family") == "sp");
  CHECK(j.at("r") == 2);
  CHECK(j.at("b") == Catch::Approx(12.0));
  auto back = model_from_json(j);
  CHECK(back.family == Family::SpR);
  CHECK(back.rank == 2);

  auto su = model_from_json(json{{"family", "su"}, {"p", 2}, {"q", 3}});
  CHECK(su.su_q() == 3);
  CHECK_FALSE(su.tube);

  CHECK_THROWS_AS(model_from_json(json{{"family", "so"}}), std::invalid_argument);
  CHECK_THROWS_AS(model_from_json(json{{"family", "sp"}}), json::exception);
}

TEST_CASE("model descriptors") {
  CHECK(model_from_descriptor("sl2").family == Family::SL2R);
  CHECK(model_from_descriptor("sp:3").rank == 3);
  auto su = model_from_descriptor("su:2,3");
  CHECK(su.su_p() == 2);
  CHECK(su.su_q() == 3);
  CHECK_THROWS_AS(model_from_descriptor("sp"), std::invalid_argument);
  CHECK_THROWS_AS(model_from_descriptor("su:2"), std::invalid_argument);
  CHECK_THROWS_AS(model_from_descriptor("xx:1"), std::invalid_argument);
}

TEST_CASE("basis export") {
  auto sl2 = LieModel::build(Family::SL2R, 1);
  std::string csv = basis_to_csv(sl2);
  // header plus one row per basis vector of s
  CHECK(std::count(csv.begin(), csv.end(), '\n') == sl2.dim_s() + 1);
  CHECK(csv.rfind("label,norm2", 0) == 0);
  CHECK(csv.find("2e1") != std::string::npos);
}

TEST_CASE("domain serialization round trip") {
  json j = {{"rank", 2},
            {"tube", false},
            {"hrep", json::array({{{"n", {-1.0, 0.0}}, {"c", -1.0}}})}};
  DomainBase d = domain_from_json(j);
  CHECK(d.rank() == 2);
  CHECK(d.rep() == DomainBase::Rep::HRep);
  json back = domain_to_json(d);
  CHECK(back.at("hrep").size() == 1);
  CHECK(back.at("hrep")[0].at("c") == -1.0);

  json jc = {{"rank", 2}, {"tube", true}, {"cloud", {{1.0, 3.0}, {3.0, 1.0}}}};
  DomainBase c = domain_from_json(jc);
  CHECK(c.rep() == DomainBase::Rep::Cloud);
  CHECK(domain_to_json(c).at("cloud").size() == 2);
}

TEST_CASE("domain parsing rejects malformed input") {
  json unknown = {{"rank", 1}, {"tube", true}, {"hrep", json::array()}, {"typo", 1}};
  CHECK_THROWS_AS(domain_from_json(unknown), std::invalid_argument);

  json missing_rank = {{"tube", true}, {"cloud", {{1.0}}}};
  CHECK_THROWS_AS(domain_from_json(missing_rank), json::exception);

  json neither = {{"rank", 1}, {"tube", true}};
  CHECK_THROWS_AS(domain_from_json(neither), std::invalid_argument);
}

TEST_CASE("hull serialization carries flags and vertices") {
  DomainBase cloud = DomainBase::from_cloud(
      2, false, {(Vec(2) << 1, 3).finished(), (Vec(2) << 3, 1).finished()});
  HullResult h = envelope(cloud);
  json j = hull_to_json(h);
  CHECK(j.at("vertices").size() == 2);
  CHECK(j.at("hrep").size() == 3);
  CHECK(j.contains("degenerate"));
  CHECK(j.contains("clipped"));

  std::string csv = hull_boundary_csv(h);
  CHECK(csv.rfind("y1,y2", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') > 10);

  DomainBase one = DomainBase::from_cloud(1, false, {Vec::Constant(1, 2.0)});
  CHECK_THROWS_AS(hull_boundary_csv(envelope(one)), std::invalid_argument);
}

TEST_CASE("base function deserialization") {
  auto lb = basefunction_from_json(json{{"kind", "logbarrier"}, {"alpha", {2.0, 3.0}}});
  Vec y(2);
  y << 1.0, 2.0;
  CHECK(lb.value(y) == Catch::Approx(-3.0 * std::log(2.0)));

  auto aff = basefunction_from_json(json{{"kind", "affine"}, {"c", {1.0, 1.0}}, {"d", 2.0}});
  CHECK(aff.value(y) == Catch::Approx(5.0));

  auto rec = basefunction_from_json(json{{"kind", "reciprocal"}, {"rank", 2}});
  CHECK(rec.value(y) == Catch::Approx(1.5));

  auto grid = basefunction_from_json(
      json{{"kind", "grid"}, {"points", {{1.0, 2.0, 3.0}}}, {"values", {1.0, 2.0, 3.0}}});
  CHECK(grid.value(Vec::Constant(1, 1.5)) == Catch::Approx(1.5));

  CHECK_THROWS_AS(basefunction_from_json(json{{"kind", "mystery"}}), std::invalid_argument);
}

TEST_CASE("reports and deterministic dumps") {
  VerificationReport r{"demo", 10, 1e-12, true, ""};
  json j = report_to_json(r);
  CHECK(j.at("pass") == true);
  CHECK_FALSE(j.contains("note"));
  r.note = "something";
  CHECK(report_to_json(r).at("note") == "something");

  json a = {{"zebra", 1}, {"alpha", 2}};
  std::string s1 = dump_sorted(a);
  std::string s2 = dump_sorted(json{{"alpha", 2}, {"zebra", 1}});
  CHECK(s1 == s2);  // key order independent of insertion order
  CHECK(s1.find("alpha") < s1.find("zebra"));
}
