// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "support/oracles.hpp"
#include "support/random_bodies.hpp"
#include "tomoslice/algfit.hpp"
#include "tomoslice/detect.hpp"
#include "tomoslice/radon.hpp"
#include "tomoslice/sections.hpp"

using namespace tomoslice;
using namespace tomoslice::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << "C" << id << " " << title << ": " << detail << std::endl;
  if (!pass) ++failures;
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

SectionProfile fit_profile(const Body& body, const Direction& xi) { return profile(body, xi, 64, 0.02); }

// 50 ellipsoid/direction pairs shared by criteria 3 and 4: 10 ellipsoids over
// n = 2..6, 5 directions each.
struct Pair {
  Ellipsoid body;
  Direction xi;
  int group;
};

std::vector<Pair> ellipsoid_pairs() {
  std::mt19937_64 rng(3003);
  std::vector<Pair> pairs;
  for (int g = 0; g < 10; ++g) {
    const int n = 2 + g % 5;
    const auto e = random_ellipsoid(n, rng);
    for (int j = 0; j < 5; ++j) pairs.push_back({e, random_direction(n, rng), g});
  }
  return pairs;
}

int minimal_m(int n) { return n % 2 == 1 ? 1 : 2; }

// 1. exact ellipsoid sections vs the slab oracle
void criterion_1() {
  std::mt19937_64 rng(1001);
  int checks = 0;
  int agree = 0;
  for (int n : {2, 3}) {
    for (int i = 0; i < 20; ++i) {
      const Ellipsoid e = random_ellipsoid(n, rng);
      for (int j = 0; j < 5; ++j) {
        const Direction xi = random_direction(n, rng);
        const auto chord = chord_interval(e, xi);
        std::uniform_real_distribution<double> u(chord.lo + 0.05 * chord.width(), chord.hi - 0.05 * chord.width());
        const double t = u(rng);
        const auto mc = section_volume_mc(e, xi, t, 1e-3 * chord.width(), 1'000'000, 10'000 + checks);
        ++checks;
        if (std::abs(mc.estimate - section_volume_ellipsoid(e, xi, t)) <= 3.0 * mc.std_error) ++agree;
      }
    }
  }
  report(1, agree >= 0.95 * checks, "ellipsoid closed form vs Monte Carlo slab oracle",
         std::to_string(agree) + "/" + std::to_string(checks) + " within 3 stderr at 1e6 samples (need >= 95%)");
}

// 2. minimal power m and degree per dimension parity
void criterion_2() {
  std::mt19937_64 rng(2002);
  int total = 0;
  int ok = 0;
  double worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    for (int i = 0; i < 10; ++i) {
      const Ellipsoid e = random_ellipsoid(n, rng);
      const auto search = detect_min_m(fit_profile(e, random_direction(n, rng)), 4, 1e-9);
      ++total;
      const int m = minimal_m(n);
      if (search.accepted && search.accepted->m == m && search.accepted->degree == m * (n - 1)) {
        ++ok;
        worst = std::max(worst, search.accepted->relative_residual);
      }
    }
  }
  report(2, ok == total && worst < 1e-9, "minimal m (1 for n=3,5; 2 for n=2,4) with D=m(n-1)",
         std::to_string(ok) + "/" + std::to_string(total) + " ellipsoids, max residual " + sci(worst) +
             " (need < 1e-9)");
}

// 3. effective degree equals m(n-1), also when the fit is given four spare degrees
void criterion_3(const std::vector<Pair>& pairs) {
  int exact = 0;
  int spare = 0;
  for (const auto& p : pairs) {
    const int n = p.body.dim();
    const int m = minimal_m(n);
    const auto prof = fit_profile(p.body, p.xi);
    if (degree_bound_check(fit_power_polynomial(prof, m, m * (n - 1)), n).effective_degree == m * (n - 1)) ++exact;
    if (degree_bound_check(fit_power_polynomial(prof, m, m * (n - 1) + 4), n).effective_degree == m * (n - 1))
      ++spare;
  }
  const int total = static_cast<int>(pairs.size());
  report(3, exact == total && spare == total, "effective degree equals m(n-1)",
         std::to_string(exact) + "/" + std::to_string(total) + " at D=m(n-1), " + std::to_string(spare) + "/" +
             std::to_string(total) + " at D=m(n-1)+4");
}

// 4. p = C (h+ - t)^r (h- + t)^r, roots at the support values, C direction independent
void criterion_4(const std::vector<Pair>& pairs) {
  double mismatch = 0.0;
  double root_error = 0.0;
  double spread = 0.0;
  double volume_error = 0.0;
  std::vector<double> group;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    const int n = p.body.dim();
    const int m = 2;  // m(n-1) even in every dimension
    const auto rep = root_structure(fit_power_polynomial(fit_profile(p.body, p.xi), m, m * (n - 1)),
                                    p.body.support(p.xi.vec()), p.body.support(-p.xi.vec()));
    mismatch = std::max(mismatch, rep.verdict == RootVerdict::Conforms ? rep.mismatch : 1.0);
    root_error = std::max({root_error, rep.root_plus_error, rep.root_minus_error});
    const double expected = unit_ball_volume(n - 1) * p.body.axes_product();
    volume_error = std::max(volume_error, std::abs(rep.normalized_constant - expected) / expected);
    group.push_back(rep.normalized_constant);
    if (i + 1 == pairs.size() || pairs[i + 1].group != p.group) {
      const auto [lo, hi] = std::minmax_element(group.begin(), group.end());
      spread = std::max(spread, (*hi - *lo) / *hi);
      group.clear();
    }
  }
  report(4, mismatch < 1e-8 && root_error < 1e-8 && spread < 1e-8, "root structure of p",
         "max mismatch " + sci(mismatch) + ", max root error " + sci(root_error) + " x width, C spread " +
             sci(spread) + " (all need < 1e-8); C vs omega*prod(a) " + sci(volume_error));
}

// 5. moment range conditions
void criterion_5() {
  std::mt19937_64 rng(5005);
  double ellipsoid_residual = 0.0;
  double m0_spread = 0.0;
  double m0_volume = 0.0;
  for (int n : {2, 3, 4}) {
    for (int i = 0; i < 3; ++i) {
      const Ellipsoid e = random_ellipsoid(n, rng);
      for (int k = 0; k <= 2; ++k) {
        const int terms = static_cast<int>(homogeneous_monomials(n, k).size());
        const auto rep = range_test(e, k, std::max(50, 2 * terms), 77);
        ellipsoid_residual = std::max(ellipsoid_residual, rep.relative_residual);
        if (k == 0) {
          const auto [lo, hi] = std::minmax_element(rep.moments.begin(), rep.moments.end());
          m0_spread = std::max(m0_spread, (*hi - *lo) / *hi);
          const double volume = unit_ball_volume(n) * e.axes_product();
          for (double v : rep.moments) m0_volume = std::max(m0_volume, std::abs(v - volume) / volume);
        }
      }
    }
  }
  const Body cube = Polytope::cube(3);
  const Body moved = Polytope::cube(3).translated(vec({0.3, -0.2, 0.5}));
  double cube_rel = 0.0;
  for (int k : {0, 2}) cube_rel = std::max(cube_rel, range_test(cube, k, 50, 77).relative_residual);
  const double cube_k1_abs = range_test(cube, 1, 50, 77).absolute_residual;
  double moved_rel = 0.0;
  for (int k = 0; k <= 2; ++k) moved_rel = std::max(moved_rel, range_test(moved, k, 50, 77).relative_residual);
  const bool pass = ellipsoid_residual < 1e-8 && m0_spread < 1e-8 && m0_volume < 1e-9 && cube_rel < 1e-6 &&
                    cube_k1_abs < 1e-9 && moved_rel < 1e-6;
  report(5, pass, "moment range conditions k=0,1,2",
         "ellipsoid residual " + sci(ellipsoid_residual) + " (< 1e-8), M0 spread " + sci(m0_spread) +
             " (< 1e-8), M0 vs volume " + sci(m0_volume) + " (< 1e-9), cube k=0,2 " + sci(cube_rel) +
             " (< 1e-6), centred cube k=1 absolute " + sci(cube_k1_abs) + " (< 1e-9), translated cube " +
             sci(moved_rel) + " (< 1e-6)");
}

// 6. ellipsoid recovery round trip and polytope rejection
void criterion_6() {
  std::mt19937_64 rng(6006);
  int accepted = 0;
  double center_error = 0.0;
  double shape_error = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + i % 4;
    const auto params = random_ellipsoid_params(n, rng);
    const Ellipsoid e = make_ellipsoid(params);
    const auto rep = is_ellipsoid(e, kDefaultDetectTolerance, kDefaultDetectTolerance, 200, 600 + i);
    if (!rep.accepted) continue;
    ++accepted;
    center_error = std::max(center_error, (rep.recovered_center - params.center).norm() / params.center.norm());
    shape_error = std::max(shape_error, (*rep.recovered_shape - e.shape()).norm() / e.shape().norm());
  }
  const auto cube = is_ellipsoid(Polytope::cube(3), kDefaultDetectTolerance, kDefaultDetectTolerance, 200, 1);
  const auto simplex = is_ellipsoid(random_simplex(3, rng), kDefaultDetectTolerance, kDefaultDetectTolerance, 200, 1);
  const bool pass = accepted == 20 && center_error < 1e-6 && shape_error < 1e-6 && !cube.accepted &&
                    !simplex.accepted && cube.quadratic_residual > 1e-2 && simplex.quadratic_residual > 1e-2;
  report(6, pass, "ellipsoid recovery round trip",
         std::to_string(accepted) + "/20 accepted, center error " + sci(center_error) + ", shape error " +
             sci(shape_error) + " (< 1e-6); cube rejected with residual " + sci(cube.quadratic_residual) +
             ", simplex with " + sci(simplex.quadratic_residual) + " (> 1e-2)");
}

// 7. boundary exponent and curvature constant
void criterion_7() {
  std::mt19937_64 rng(7007);
  double exponent_error = 0.0;
  double constant_error = 0.0;
  for (int n : {2, 3}) {
    for (int i = 0; i < 10; ++i) {
      const Ellipsoid e = random_ellipsoid(n, rng);
      const Direction xi = random_direction(n, rng);
      const auto rep = exponent_estimate(e, xi, 1e-6, 1e-3, 16);
      exponent_error = std::max(exponent_error, std::abs(rep.estimated_exponent - 0.5 * (n - 1)));
      const double predicted = curvature_oracle_constant(e, xi);
      constant_error = std::max(constant_error, std::abs(rep.estimated_constant - predicted) / predicted);
    }
  }
  report(7, exponent_error < 0.05 && constant_error < 0.02, "boundary exponent (n-1)/2",
         "max exponent error " + sci(exponent_error) + " (< 0.05), constant vs curvature oracle " +
             sci(constant_error) + " (< 2%), window 1e-6..1e-3 of the chord width");
}

// CLI helpers for criteria 8 and 10
struct CliRun {
  int status;
  std::string out;
};

std::string shell_quote(const std::string& s) { return "'" + s + "'"; }

CliRun run_cli(const std::string& args, const std::string& env = "") {
  const std::string command = env + (env.empty() ? "" : " ") + shell_quote(TOMOSLICE_CLI_PATH) + " " + args;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string fixture(const std::string& name, const json& doc) {
  const fs::path dir = fs::path(TOMOSLICE_TEST_TMPDIR) / "acceptance_fixtures";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path, std::ios::binary) << doc.dump();
  return path.string();
}

// 8. quadric domains satisfy the relation with m = 2
void criterion_8() {
  const std::string par = fixture("paraboloid.json", {{"type", "paraboloid"}, {"axes", {1.0, 1.0}}});
  const std::string par2 = fixture("paraboloid_aniso.json", {{"type", "paraboloid"}, {"axes", {0.7, 1.6}}});
  const std::string hyp = fixture("hyperboloid.json", {{"type", "hyperboloid"}, {"axes", {1.0, 0.5}}, {"c", 1.5}});
  const std::string hyp4 =
      fixture("hyperboloid4.json", {{"type", "hyperboloid"}, {"axes", {1.0, 0.5, 2.0}}, {"c", 1.0}});
  const std::vector<std::pair<std::string, std::string>> cases{
      {"paraboloid axis", "--body " + par + " --xi 0,0,1 --window 0.5,4"},
      {"paraboloid tilted", "--body " + par + " --xi " + std::to_string(std::sin(0.2)) + ",0," +
                                std::to_string(std::cos(0.2)) + " --window 0.5,4"},
      {"anisotropic paraboloid oblique", "--body " + par2 + " --xi 0.3,-0.2,1 --window 1,3"},
      {"hyperboloid axis", "--body " + hyp + " --xi 0,0,1 --window 2,5"},
      {"hyperboloid tilted", "--body " + hyp + " --xi 0.2,0.1,1 --window 2.5,6"},
      {"hyperboloid R^4 oblique", "--body " + hyp4 + " --xi 0.1,0.2,-0.1,1 --window 1.5,4"}};
  int passed = 0;
  double worst = 0.0;
  std::string detail;
  for (const auto& [name, args] : cases) {
    const auto r = run_cli("quadric-check " + args);
    bool ok = false;
    if (r.status == 0) {
      const json q = json::parse(r.out)["quadric_check"];
      const double residual = q["m2_residual"].get<double>();
      worst = std::max(worst, residual);
      ok = q["sufficient"].get<bool>() && residual < 1e-8;
      detail += name + " D=" + std::to_string(q["m2_minimal_degree"].get<int>()) + "; ";
    } else {
      detail += name + " exit " + std::to_string(r.status) + "; ";
    }
    if (ok) ++passed;
  }
  if (detail.size() >= 2) detail.resize(detail.size() - 2);
  report(8, passed == static_cast<int>(cases.size()), "quadric m=2 sufficiency",
         std::to_string(passed) + "/" + std::to_string(cases.size()) + " windows, max m=2 residual " + sci(worst) +
             " (< 1e-8); " + detail);
}

// 9. negative control: the cube admits no m <= 4
void criterion_9() {
  const Body cube = Polytope::cube(3);
  const auto search = detect_min_m(fit_profile(cube, Direction::normalized(vec({1, 1, 1}))), 4, 1e-6);
  std::mt19937_64 rng(9009);
  double generic = std::numeric_limits<double>::infinity();
  bool generic_none = true;
  for (int i = 0; i < 5; ++i) {
    const auto s = detect_min_m(fit_profile(cube, random_direction(3, rng)), 4, 1e-6);
    generic_none = generic_none && !s.accepted;
    generic = std::min(generic, s.best_residual());
  }
  const double best = search.best_residual();
  report(9, !search.accepted && best > 1e-3 && generic_none && generic > 1e-3, "cube negative control",
         std::string(search.accepted ? "accepted" : "none") + " for m <= 4 at tol 1e-6 along the diagonal, best residual " +
             sci(best) + "; 5 random directions best " + sci(generic) + " (need > 1e-3)");
}

// 10. byte-identical CLI reports
void criterion_10() {
  const std::string ball = fixture("ellipsoid.json", {{"type", "ellipsoid"},
                                                      {"center", {0.1, -0.2, 0.3}},
                                                      {"shape", {{0.5, 0.1, 0.0}, {0.1, 1.0, 0.2}, {0.0, 0.2, 2.0}}}});
  const std::string cube = fixture("cube.json", {{"type", "polytope"},
                                                 {"vertices",
                                                  {{-1, -1, -1}, {1, -1, -1}, {-1, 1, -1}, {1, 1, -1},
                                                   {-1, -1, 1}, {1, -1, 1}, {-1, 1, 1}, {1, 1, 1}}}});
  const std::vector<std::string> commands{
      "detect --body " + ball + " --seed 42",
      "detect --body " + cube + " --seed 42",
      "moments --body " + ball + " --k 2 --directions 40 --seed 7",
      "moments --body " + cube + " --k 1 --directions 40 --seed 7 --format csv",
      "algfit --body " + ball + " --xi 1,2,3 --m-max 3",
      "profile --body " + ball + " --xi 0,1,0 --grid 32 --format csv",
      "asymptote --body " + ball + " --xi 1,0,0"};
  int identical = 0;
  for (const auto& c : commands) {
    const auto a = run_cli(c, "TOMOSLICE_THREADS=1");
    const auto b = run_cli(c, "TOMOSLICE_THREADS=4");
    const auto d = run_cli(c);
    if (!a.out.empty() && a.out == b.out && a.out == d.out && a.status == b.status) ++identical;
  }
  report(10, identical == static_cast<int>(commands.size()), "byte-identical CLI reports",
         std::to_string(identical) + "/" + std::to_string(commands.size()) +
             " commands identical across three runs (1 worker, 4 workers, default)");
}

}  // namespace

int main() {
  const auto pairs = ellipsoid_pairs();
  criterion_1();
  criterion_2();
  criterion_3(pairs);
  criterion_4(pairs);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
