#include <doctest.h>

#include <cstdio>
#include <json.hpp>

#include "solgas/engine.hpp"
#include "solgas/io.hpp"

using namespace solgas;

TEST_SUITE("io") {

TEST_CASE("field CSV golden row") {
  const ScatteringData data(std::vector<SpectralPoint>{{{0.0, 1.0}, {2.0, 0.0}}});
  const Grid grid = Grid::uniform(0, 0, 1, 0, 0, 1);
  const FieldSample field = evaluate_field(data, grid);
  const std::string csv = field_to_csv(field);
  CHECK(csv == "x,t,re_psi,im_psi,abs_psi\n0,0,0,-2,2\n");
}

TEST_CASE("field CSV is row-major in t then x") {
  FieldSample f;
  f.grid.x_values = {0.0, 1.0};
  f.grid.t_values = {0.0, 2.0};
  f.psi = {{{1, 0}, {2, 0}}, {{3, 0}, {4, 0}}};
  const std::string csv = field_to_csv(f);
  CHECK(csv ==
        "x,t,re_psi,im_psi,abs_psi\n"
        "0,0,1,0,1\n"
        "1,0,2,0,2\n"
        "0,2,3,0,3\n"
        "1,2,4,0,4\n");
}

TEST_CASE("points CSV") {
  const std::string csv = points_to_csv({{0.5, -0.25}});
  CHECK(csv == "re,im\n0.5,-0.25\n");
}

TEST_CASE("spectrum CSV round trip") {
  const char* path = "/tmp/solgas_test_spectrum.csv";
  write_file(path, "re_z,im_z,re_c,im_c\n0,1,2,0\n0.5,2,0,-1\n");
  const ScatteringData data = read_spectrum_csv(path);
  REQUIRE(data.size() == 2);
  CHECK(data[0].z == Complex(0, 1));
  CHECK(data[0].c == Complex(2, 0));
  CHECK(data[1].z == Complex(0.5, 2));
  CHECK(data[1].c == Complex(0, -1));
  std::remove(path);

  write_file(path, "0,1,2\n");
  CHECK_THROWS_AS(read_spectrum_csv(path), Error);
  std::remove(path);
}

TEST_CASE("fekete sidecar fields") {
  FeketeResult r;
  r.points = {{0, 0}};
  r.energy = 1.5;
  r.gradient_norm = 1e-9;
  r.iterations = 12;
  r.converged = true;
  r.seed = 7;
  const auto j = nlohmann::json::parse(fekete_sidecar_json(r));
  CHECK(j.at("energy").get<double>() == 1.5);
  CHECK(j.at("gradient_norm").get<double>() == 1e-9);
  CHECK(j.at("iterations").get<int>() == 12);
  CHECK(j.at("converged").get<bool>());
  CHECK(j.at("seed").get<uint64_t>() == 7);
}

TEST_CASE("config parsing") {
  Config cfg = Config::from_string(
      "# comment\n"
      "domain.kind = disk\n"
      "domain.center = 0.0+1.0i\n"
      "domain.radius = 0.1\n"
      "run.ns = 100, 200,500\n");
  CHECK(cfg.get_string("domain.kind") == "disk");
  CHECK(cfg.get_complex("domain.center") == Complex(0, 1));
  CHECK(cfg.get_double("domain.radius") == 0.1);
  const auto ns = cfg.get_int_list("run.ns");
  REQUIRE(ns.size() == 3);
  CHECK(ns[2] == 500);
  CHECK(cfg.unused_keys().empty());

  Config cfg2 = Config::from_string("a.b = 1\nmystery.key = 2\n");
  (void)cfg2.get_double("a.b");
  const auto unused = cfg2.unused_keys();
  REQUIRE(unused.size() == 1);
  CHECK(unused[0] == "mystery.key");

  CHECK_THROWS_AS(Config::from_string("novalue\n"), Error);
  CHECK_THROWS_AS(Config::from_string("a.b = 1\na.b = 2\n"), Error);
  CHECK_THROWS_AS(cfg.get_string("missing.key"), Error);
}

TEST_CASE("domain and density from config") {
  Config cfg = Config::from_string(
      "domain.kind = ellipse\n"
      "domain.alpha1 = 0.5\n"
      "domain.alpha2 = 1.5\n"
      "domain.rho = 0.6\n"
      "density.p = 0\n"
      "density.coeffs = 1.0\n");
  const Domain dom = domain_from_config(cfg);
  CHECK(std::holds_alternative<EllipseDomain>(dom));
  const DensitySpec den = density_from_config(cfg);
  CHECK(den.coeffs.size() == 1);

  Config bad = Config::from_string("domain.kind = pentagon\n");
  CHECK_THROWS_AS(domain_from_config(bad), Error);
}

}  // TEST_SUITE
