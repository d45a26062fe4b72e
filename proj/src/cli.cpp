#include "tomoslice/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tomoslice/algfit.hpp"
#include "tomoslice/detect.hpp"
#include "tomoslice/io.hpp"
#include "tomoslice/radon.hpp"
#include "tomoslice/sections.hpp"

namespace tomoslice::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";
constexpr int kQuadricMaxDegree = 8;
constexpr int kConsistencyProbes = 50;

struct Options {
  std::string body_path;
  std::string config_path;
  std::string xi_text;
  int grid = 64;
  double margin = 0.02;
  int m_max = 4;
  std::optional<double> tol;
  int quad_order = 64;
  int directions = 200;
  std::uint64_t seed = 0;
  int k = 2;
  std::string window_text;
  std::string out_path;
  std::string format = "json";
};

struct Resolved {
  std::string command;
  Options options;
  json body_doc;
  std::optional<Body> body;
  std::optional<Direction> xi;
  std::optional<std::pair<double, double>> window;
  double tol = 0.0;
};

struct Outcome {
  json report;
  std::string csv;
  int status = kExitOk;
};

std::vector<double> parse_floats(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = std::min(text.find(',', pos), text.size());
    std::string token = text.substr(pos, comma - pos);
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    double v = 0.0;
    const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size() ||
        !std::isfinite(v))
      throw ConfigError("flag " + flag + " expects comma-separated numbers, got '" + text + "'");
    values.push_back(v);
    pos = comma + 1;
  }
  return values;
}

json read_json_file(const std::string& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + what + " file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed JSON in " + what + " file '" + path + "': " + e.what());
  }
}

void add_options(CLI::App& sub, Options& o) {
  sub.add_option("--body", o.body_path, "Body JSON file");
  sub.add_option("--config", o.config_path, "Experiment config JSON file (flags override it)");
  sub.add_option("--xi", o.xi_text, "Direction as comma-separated floats (normalised)");
  sub.add_option("--grid", o.grid, "Grid points")->check(CLI::Range(12, 100000));
  sub.add_option("--margin", o.margin, "Profile margin as a fraction of the chord width")
      ->check(CLI::Range(0.0, 0.4999));
  sub.add_option("--m-max", o.m_max, "Largest power m tried")->check(CLI::Range(1, 16));
  sub.add_option("--tol", o.tol, "Acceptance tolerance");
  sub.add_option("--quad-order", o.quad_order, "Gauss-Legendre order")->check(CLI::Range(1, 4096));
  sub.add_option("--directions", o.directions, "Number of sampled directions")
      ->check(CLI::Range(1, 1000000));
  sub.add_option("--seed", o.seed, "Random seed");
  sub.add_option("--k", o.k, "Moment order")->check(CLI::Range(0, 4));
  sub.add_option("--window", o.window_text, "Window lo,hi (t-range, or depth fractions for asymptote)");
  sub.add_option("--out", o.out_path, "Output path (stdout when omitted)");
  sub.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

// Config-file values apply to every flag the user did not pass explicitly.
void merge_config(const CLI::App& sub, Options& o, json& body_doc) {
  const json config = read_json_file(o.config_path, "config");
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  auto unset = [&](const char* flag) { return sub.count(flag) == 0; };
  for (const auto& [key, value] : config.items()) {
    try {
      if (key == "command") {
        if (value.get<std::string>() != sub.get_name())
          throw ConfigError("key 'command' in config names '" + value.get<std::string>() + "'");
      } else if (key == "version") {
        value.get<std::string>();
      } else if (key == "body") {
        if (!unset("--body")) continue;
        if (value.is_string()) {
          o.body_path = value.get<std::string>();
        } else {
          body_doc = value;
        }
      } else if (key == "xi") {
        if (!unset("--xi")) continue;
        std::string text;
        for (const auto& v : value) text += (text.empty() ? "" : ",") + format_double(v.get<double>());
        o.xi_text = text;
      } else if (key == "grid") {
        if (unset("--grid")) o.grid = value.get<int>();
      } else if (key == "margin") {
        if (unset("--margin")) o.margin = value.get<double>();
      } else if (key == "m-max") {
        if (unset("--m-max")) o.m_max = value.get<int>();
      } else if (key == "tol") {
        if (unset("--tol")) o.tol = value.get<double>();
      } else if (key == "quad-order") {
        if (unset("--quad-order")) o.quad_order = value.get<int>();
      } else if (key == "directions") {
        if (unset("--directions")) o.directions = value.get<int>();
      } else if (key == "seed") {
        if (unset("--seed")) o.seed = value.get<std::uint64_t>();
      } else if (key == "k") {
        if (unset("--k")) o.k = value.get<int>();
      } else if (key == "window") {
        if (!unset("--window")) continue;
        std::string text;
        for (const auto& v : value) text += (text.empty() ? "" : ",") + format_double(v.get<double>());
        o.window_text = text;
      } else if (key == "out") {
        if (unset("--out")) o.out_path = value.get<std::string>();
      } else if (key == "format") {
        if (unset("--format")) o.format = value.get<std::string>();
      } else {
        throw ConfigError("unknown key '" + key + "' in config");
      }
    } catch (const json::exception&) {
      throw ConfigError("key '" + key + "' in config has the wrong type");
    }
  }
  if (o.format != "csv" && o.format != "json") throw ConfigError("key 'format' must be csv or json");
  if (o.grid < 12) throw ConfigError("key 'grid' must be at least 12");
  if (!(o.margin >= 0.0 && o.margin < 0.5)) throw ConfigError("key 'margin' must lie in [0, 0.5)");
  if (o.m_max < 1) throw ConfigError("key 'm-max' must be at least 1");
  if (o.quad_order < 1) throw ConfigError("key 'quad-order' must be positive");
  if (o.directions < 1) throw ConfigError("key 'directions' must be positive");
  if (o.k < 0 || o.k > 4) throw ConfigError("key 'k' must lie in [0, 4]");
}

Resolved resolve(const std::string& command, const CLI::App& sub, Options options) {
  Resolved r;
  r.command = command;
  if (!options.config_path.empty()) merge_config(sub, options, r.body_doc);
  if (r.body_doc.is_null()) {
    if (options.body_path.empty()) throw ConfigError("a body is required (--body PATH)");
    r.body_doc = read_json_file(options.body_path, "body");
  }
  r.body = body_from_json(r.body_doc);
  r.body_doc = to_json(*r.body);
  const int n = dimension(*r.body);

  if (!options.xi_text.empty()) {
    const auto values = parse_floats(options.xi_text, "--xi");
    if (static_cast<int>(values.size()) != n)
      throw DimensionMismatch(n, static_cast<int>(values.size()));
    r.xi = Direction::normalized(Eigen::Map<const Vector>(values.data(), n));
  } else {
    r.xi = Direction::axis(n, std::holds_alternative<QuadricDomain>(*r.body) ? n - 1 : 0);
  }
  if (!options.window_text.empty()) {
    const auto values = parse_floats(options.window_text, "--window");
    if (values.size() != 2 || !(values[0] < values[1]))
      throw ConfigError("flag --window expects lo,hi with lo < hi");
    r.window = std::make_pair(values[0], values[1]);
  } else if (command == "asymptote") {
    r.window = std::make_pair(1e-6, 1e-3);
  }
  if (options.tol) {
    if (!(*options.tol > 0.0)) throw ConfigError("key 'tol' must be positive");
    r.tol = *options.tol;
  } else {
    r.tol = command == "algfit" ? 1e-6 : kDefaultDetectTolerance;
  }
  r.options = std::move(options);
  return r;
}

json config_json(const Resolved& r) {
  const Options& o = r.options;
  json window = r.window ? json::array({r.window->first, r.window->second}) : json(nullptr);
  return {{"command", r.command},
          {"version", kVersion},
          {"body", r.body_doc},
          {"xi", r.xi ? to_json(*r.xi) : json(nullptr)},
          {"grid", o.grid},
          {"margin", o.margin},
          {"m-max", o.m_max},
          {"tol", r.tol},
          {"quad-order", o.quad_order},
          {"directions", o.directions},
          {"seed", o.seed},
          {"k", o.k},
          {"window", window},
          {"format", o.format}};
}

SectionProfile make_profile(const Resolved& r) {
  if (r.window) return profile_window(*r.body, *r.xi, r.window->first, r.window->second, r.options.grid);
  return profile(*r.body, *r.xi, r.options.grid, r.options.margin);
}

Outcome run_profile(const Resolved& r) {
  const SectionProfile p = make_profile(r);
  return {{{"profile", to_json(p)}}, to_csv(p), kExitOk};
}

Outcome run_moments(const Resolved& r) {
  const MomentReport m = range_test(*r.body, r.options.k, r.options.directions, r.options.seed,
                                    r.options.quad_order);
  return {{{"moments", to_json(m)}}, to_csv(m), kExitOk};
}

Outcome run_algfit(const Resolved& r) {
  const SectionProfile p = make_profile(r);
  const MinimalPowerSearch search = detect_min_m(p, r.options.m_max, r.tol);
  const int n = p.n;

  json attempts = json::array();
  for (const auto& a : search.attempts) attempts.push_back(to_json(a));
  json accepted = nullptr;
  if (search.accepted) {
    AlgebraicFitReport report = *search.accepted;
    const DegreeCheck degree = degree_bound_check(report, n);
    if (std::holds_alternative<QuadricDomain>(*r.body) == false) {
      const ChordInterval chord = chord_interval(*r.body, r.xi.value());
      report.root_report = root_structure(report, chord.hi, -chord.lo);
    }
    accepted = to_json(report);
    accepted["effective_degree"] = degree.effective_degree;
    accepted["degree_bound"] = degree.bound;
  }

  std::string csv = "m,D,residual\n";
  for (int m = 1; m <= r.options.m_max; ++m)
    for (int d = 0; d <= m * (n - 1) + 2 && 2 * (d + 1) <= static_cast<int>(p.grid.size()); ++d)
      csv += std::to_string(m) + "," + std::to_string(d) + "," +
             format_double(fit_power_polynomial(p, m, d).relative_residual) + "\n";

  json report = {{"result", search.accepted ? "found" : "none"},
                 {"m", search.accepted ? json(search.accepted->m) : json(nullptr)},
                 {"best_residual", search.best_residual()},
                 {"accepted", accepted},
                 {"attempts", attempts}};
  return {{{"algfit", report}}, csv, search.accepted ? kExitOk : kExitNegative};
}

Outcome run_detect(const Resolved& r) {
  const EllipsoidReport e = is_ellipsoid(*r.body, r.tol, r.tol, r.options.directions, r.options.seed);
  json report = to_json(e);
  if (e.accepted) {
    report["consistency"] =
        to_json(section_consistency_check(*r.body, e, kConsistencyProbes, r.options.seed));
  }
  std::string csv = "field,value\n";
  csv += std::string("verdict,") + (e.accepted ? "accept" : "reject") + "\n";
  csv += "linear_residual," + format_double(e.linear_residual) + "\n";
  csv += "quadratic_residual," + format_double(e.quadratic_residual) + "\n";
  csv += "support_mismatch," + format_double(e.support_mismatch) + "\n";
  for (Eigen::Index i = 0; i < e.recovered_center.size(); ++i)
    csv += "center_" + std::to_string(i + 1) + "," + format_double(e.recovered_center[i]) + "\n";
  if (e.recovered_shape) {
    for (Eigen::Index i = 0; i < e.recovered_shape->rows(); ++i)
      for (Eigen::Index j = 0; j < e.recovered_shape->cols(); ++j)
        csv += "shape_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "," +
               format_double((*e.recovered_shape)(i, j)) + "\n";
  }
  return {{{"detect", report}}, csv, e.accepted ? kExitOk : kExitNegative};
}

Outcome run_asymptote(const Resolved& r) {
  const AsymptoticReport a = exponent_estimate(*r.body, *r.xi, r.window->first, r.window->second,
                                               r.options.grid);
  std::string csv = "depth,A\n";
  for (size_t i = 0; i < a.depths.size(); ++i)
    csv += format_double(a.depths[i]) + "," + format_double(a.values[i]) + "\n";
  return {{{"asymptote", to_json(a)}}, csv, kExitOk};
}

Outcome run_quadric_check(const Resolved& r) {
  const auto* quadric = std::get_if<QuadricDomain>(&*r.body);
  if (quadric == nullptr) throw ConfigError("quadric-check needs a paraboloid or hyperboloid body");
  if (!r.window) throw ConfigError("quadric-check needs --window lo,hi");

  json report = {{"xi", to_json(*r.xi)}, {"window", {r.window->first, r.window->second}}};
  std::string csv = "m,D,residual\n";
  if (!quadric_slice_bounded(*quadric, *r.xi)) {
    report["status"] = "skipped";
    report["reason"] = "unbounded slices in this direction";
    report["sufficient"] = false;
    return {{{"quadric_check", report}}, csv, kExitNegative};
  }
  const SectionProfile p = profile_window(*r.body, *r.xi, r.window->first, r.window->second, r.options.grid);
  json per_m = json::array();
  std::optional<int> minimal_m;
  std::optional<int> degree_for_two;
  double residual_for_two = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 2; ++m) {
    std::optional<int> minimal_d;
    double last = 0.0;
    json residuals = json::array();
    for (int d = 0; d <= kQuadricMaxDegree; ++d) {
      last = fit_power_polynomial(p, m, d).relative_residual;
      residuals.push_back(last);
      csv += std::to_string(m) + "," + std::to_string(d) + "," + format_double(last) + "\n";
      if (last < r.tol) {
        minimal_d = d;
        break;
      }
    }
    if (minimal_d && !minimal_m) minimal_m = m;
    if (m == 2) {
      degree_for_two = minimal_d;
      residual_for_two = last;
    }
    per_m.push_back({{"m", m},
                     {"minimal_degree", minimal_d ? json(*minimal_d) : json(nullptr)},
                     {"residuals", residuals}});
  }
  report["status"] = "checked";
  report["fits"] = per_m;
  report["minimal_m"] = minimal_m ? json(*minimal_m) : json(nullptr);
  report["m2_minimal_degree"] = degree_for_two ? json(*degree_for_two) : json(nullptr);
  report["m2_residual"] = residual_for_two;
  report["sufficient"] = degree_for_two.has_value();
  return {{{"quadric_check", report}}, csv, degree_for_two ? kExitOk : kExitNegative};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tomoslice: section functions, moments and ellipsoid detection for convex bodies"};
  app.require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"profile", "Sample A_K(xi, t) on a Chebyshev grid"},
      {"moments", "Power moments M_k and the homogeneous-polynomial range test"},
      {"algfit", "Minimal power m with A^m polynomial in t"},
      {"detect", "Decide whether the body is an ellipsoid and recover it"},
      {"asymptote", "Boundary exponent of A near the support value"},
      {"quadric-check", "m = 2 sufficiency on a window for quadric domains"}};
  Options options;
  std::vector<CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_options(*sub, options);
    subs.push_back(sub);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }

  const CLI::App* chosen = nullptr;
  for (const auto* sub : subs)
    if (sub->parsed()) chosen = sub;

  try {
    const Resolved r = resolve(chosen->get_name(), *chosen, options);
    Outcome outcome;
    if (r.command == "profile") {
      outcome = run_profile(r);
    } else if (r.command == "moments") {
      outcome = run_moments(r);
    } else if (r.command == "algfit") {
      outcome = run_algfit(r);
    } else if (r.command == "detect") {
      outcome = run_detect(r);
    } else if (r.command == "asymptote") {
      outcome = run_asymptote(r);
    } else {
      outcome = run_quadric_check(r);
    }

    std::string text;
    if (r.options.format == "csv") {
      text = "# config: " + config_json(r).dump() + "\n" + outcome.csv;
    } else {
      json doc = outcome.report;
      doc["config"] = config_json(r);
      text = doc.dump(2) + "\n";
    }
    if (r.options.out_path.empty()) {
      out << text;
    } else {
      std::ofstream file(r.options.out_path, std::ios::binary | std::ios::trunc);
      if (!file) throw ConfigError("cannot write output file '" + r.options.out_path + "'");
      file << text;
    }
    return outcome.status;
  } catch (const std::exception& e) {
    err << "tomoslice: error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace tomoslice::cli
