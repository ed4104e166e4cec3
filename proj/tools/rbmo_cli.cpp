#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rbmo/experiments.hpp"
#include "rbmo/norms.hpp"

namespace {

constexpr int kPass = 0, kViolation = 1, kConfig = 2;

void emit(const std::string& out_dir, const std::string& file, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(out_dir);
  std::ofstream(std::filesystem::path(out_dir) / file) << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotations and biparameter BMO: experiment runner"};
  app.require_subcommand(1);
  std::string out;
  std::uint64_t seed = 1;
  app.add_option("--out", out, "directory for CSV/JSON output (stdout when omitted)");
  app.add_option("--seed", seed, "random seed");

  auto* ce1 = app.add_subcommand("counterexample1", "witness that rotations do not preserve BMO");
  std::vector<double> ce1_theta{M_PI / 6, M_PI / 4, M_PI / 3};
  int kmin = -7, kmax = -1, quad = 4096;
  ce1->add_option("--theta", ce1_theta, "angles in radians");
  ce1->add_option("--kmin", kmin, "finest witness scale");
  ce1->add_option("--kmax", kmax, "coarsest witness scale");
  ce1->add_option("--resolution", quad, "sub-cells per side for the quadrature cross-check");

  auto* ce2 = app.add_subcommand("counterexample2", "Sobolev, BMO and rotated bounds for the tail family");
  std::vector<double> ps{4, 8, 16, 64};
  double ce2_theta = M_PI / 4;
  ce2->add_option("--p", ps, "exponents (>= 4)");
  ce2->add_option("--theta", ce2_theta, "rotation angle");

  auto* sw = app.add_subcommand("interpolation-sweep", "fit the constants of the interpolation inequality");
  rbmo::SweepOptions so;
  sw->add_option("--theta", so.thetas, "angles");
  sw->add_option("--epsilon", so.epsilons, "epsilon values in (0, 1)");
  sw->add_option("--p", so.p, "integrability exponent");
  sw->add_option("--s", so.s, "smoothness");
  sw->add_option("--gamma", so.gamma, "gamma in (0, delta); default delta/2");
  sw->add_option("--resolution", so.resolution, "cells per side");

  auto* ver = app.add_subcommand("verify", "run a property suite and print a JUnit report");
  std::string suite;
  ver->add_option("--suite", suite, "suite name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kConfig;
  }

  try {
    if (*ce1) {
      std::ostringstream csv;
      csv.precision(12);
      csv << "# schema=ce1/v1\ntheta,found,grid_x,grid_y,k1,k2,exact,quadrature,pass\n";
      nlohmann::json verdict = nlohmann::json::array();
      bool ok = true;
      for (double th : ce1_theta) {
        const auto r = rbmo::counterexample1(th, kmin, kmax, quad);
        ok = ok && r.pass();
        csv << th << "," << r.found << ",";
        if (r.R)
          csv << r.R->ix.shifted << "," << r.R->iy.shifted << "," << r.R->ix.k << "," << r.R->iy.k;
        else
          csv << ",,,";
        csv << "," << r.exact << "," << r.quadrature << "," << r.pass() << "\n";
        verdict.push_back(nlohmann::json::parse(r.to_json()));
      }
      emit(out, "counterexample1.csv", csv.str());
      emit(out, "counterexample1.json", verdict.dump(2));
      return ok ? kPass : kViolation;
    }
    if (*ce2) {
      const auto r = rbmo::counterexample2(ps, ce2_theta);
      emit(out, "counterexample2.csv", r.csv());
      emit(out, "counterexample2.json", r.to_json());
      return r.pass_a && r.pass_b_bound && r.pass_b_slope && r.pass_c ? kPass : kViolation;
    }
    if (*sw) {
      so.seed = seed;
      const auto r = rbmo::interpolation_sweep(so, rbmo::sweep_family(seed));
      emit(out, "interpolation_sweep.csv", r.csv());
      emit(out, "interpolation_sweep.json", r.to_json());
      const bool ok = r.C <= 1e3 && r.C_product <= 1e3 && r.C_hv <= 1e3 && r.C_rough <= 1e3 && r.monotone;
      return ok ? kPass : kViolation;
    }
    if (*ver) {
      const auto r = rbmo::run_suite(suite, seed);
      emit(out, "verify_" + suite + ".xml", r.junit());
      return r.passed() ? kPass : kViolation;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const rbmo::ResolutionError& e) {
    std::cerr << e.what() << " (high-band fraction " << e.high_band << ")\n";
    return kConfig;
  }
  return kConfig;
}
