#include "circlenf/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "circlenf/io.hpp"

namespace circlenf {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

long to_long(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("cli", "bad_number", std::string("cannot parse ") + what + ": " + s);
  }
}

double to_double(const std::string& s, const char* what) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error("cli", "bad_number", std::string("cannot parse ") + what + ": " + s);
  }
}

Family parse_family(const std::string& s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  if (s == "C" || s == "c") return Family::C;
  if (s == "custom") return Family::Custom;
  throw Error("cli", "bad_family", "unknown family: " + s);
}

Multiplier build_multiplier(const RunConfig& cfg) {
  Multiplier m = parse_omega(cfg.omega, cfg.bits);
  Real mod(cfg.modulus, cfg.bits);
  if (mod < Real(1.0, cfg.bits)) m = m.with_modulus(mod);
  return m;
}

FoliationMap build_map(const RunConfig& cfg) {
  if (!cfg.map_file.empty()) return map_from_file(cfg.map_file);
  Family tag = parse_family(cfg.family);
  if (tag == Family::Custom)
    throw Error("cli", "need_map_file", "custom maps are described by --map FILE");
  return make_family(tag, build_multiplier(cfg), Real(cfg.a, cfg.bits), cfg.d,
                     cfg.order, cfg.bits);
}

Gauge build_gauge(const RunConfig& cfg) {
  GaugeKind k = gauge_from_name(cfg.gauge);
  if (k == GaugeKind::CustomDiagonal) return Gauge::custom_diagonal(cfg.diag);
  return Gauge{k, {}};
}

std::vector<double> linspace_spec(const std::string& spec, const char* what) {
  auto parts = split(spec, ':');
  if (parts.size() != 3)
    throw Error("cli", "bad_grid", std::string(what) + " wants lo:hi:n");
  double lo = to_double(parts[0], "grid lo"), hi = to_double(parts[1], "grid hi");
  long n = to_long(parts[2], "grid n");
  if (n < 2 || hi <= lo)
    throw Error("cli", "bad_grid", std::string(what) + ": need n >= 2 and hi > lo");
  std::vector<double> g(n);
  for (long i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

std::vector<long> parse_ladder(const std::string& spec) {
  std::vector<long> out;
  if (spec.find(':') != std::string::npos) {
    auto parts = split(spec, ':');
    if (parts.size() != 2)
      throw Error("cli", "bad_ladder", "ladder wants m0:m1 or a comma list");
    long m0 = to_long(parts[0], "ladder start"), m1 = to_long(parts[1], "ladder stop");
    if (m0 < 1 || m1 < m0) throw Error("cli", "bad_ladder", "need 1 <= m0 <= m1");
    for (long m = m0; m <= m1; m *= 2) out.push_back(m);
  } else {
    for (const auto& p : split(spec, ',')) out.push_back(to_long(p, "ladder entry"));
  }
  if (out.size() < 4) throw Error("cli", "bad_ladder", "ladder wants at least 4 rungs");
  return out;
}

cplx parse_point(const std::string& spec) {
  auto parts = split(spec, ',');
  if (parts.size() == 1) return {to_double(parts[0], "z"), 0.0};
  if (parts.size() == 2) return {to_double(parts[0], "z"), to_double(parts[1], "z")};
  throw Error("cli", "bad_point", "z wants re or re,im");
}

RadialSeries radial_from_list(const std::string& spec, int order, int bits) {
  RadialSeries s(order, bits);
  if (spec.empty()) return s;
  auto parts = split(spec, ',');
  for (size_t i = 0; i < parts.size(); ++i) {
    if (static_cast<int>(i) + 1 > order) break;
    s[static_cast<int>(i) + 1] = Real(parts[i], bits);
  }
  return s;
}

void warn_near_resonance(const Normalization& norm, int bits) {
  if (norm.near_resonant.empty()) return;
  std::string degs;
  for (int d : norm.near_resonant) degs += (degs.empty() ? "" : ", ") + std::to_string(d);
  std::fprintf(stderr,
               "note: near-resonant small divisors at degree(s) %s; "
               "coefficients there are amplified — consider raising --bits above %d\n",
               degs.c_str(), bits);
}

json normalize_artifact(const RunConfig& cfg) {
  FoliationMap F = build_map(cfg);
  Normalization norm = solve_homological(F, cfg.order, build_gauge(cfg));
  warn_near_resonance(norm, cfg.bits);
  return normalization_json(norm);
}

json transform_artifact(const RunConfig& cfg) {
  FoliationMap F = build_map(cfg);
  Normalization norm = solve_homological(F, cfg.order, Gauge::basic());
  warn_near_resonance(norm, cfg.bits);
  GaugeMap H = make_gauge_map(radial_from_list(cfg.gauge_a, cfg.order, cfg.bits),
                              radial_from_list(cfg.gauge_b, cfg.order, cfg.bits));
  NormalFormPair nf = apply_gauge(norm.n, F.f, H, F.mult, cfg.order);
  if (cfg.poly) return poly_nf_json(polynomial_normal_form(nf, cfg.order));
  return normal_form_json(nf);
}

json neumann_artifact(const RunConfig& cfg) {
  FoliationMap F = build_map(cfg);
  Normalization norm = solve_homological(F, cfg.order, Gauge::basic());
  RadialSeries n = norm.n;
  if (cfg.n_jet >= 0) {
    RadialSeries cut(std::max(cfg.n_jet, 1), cfg.bits);
    for (int s = 1; s <= cut.order() && s <= n.order(); ++s) cut[s] = n[s];
    n = cut;
  }
  if (!cfg.n_deviation.empty()) {
    int k = -1;
    double eps = 0.1;
    for (const auto& part : split(cfg.n_deviation, ',')) {
      auto kv = split(part, '=');
      if (kv.size() != 2)
        throw Error("cli", "bad_deviation", "deviation wants k=K or k=K,eps=E");
      if (kv[0] == "k")
        k = static_cast<int>(to_long(kv[1], "deviation k"));
      else if (kv[0] == "eps")
        eps = to_double(kv[1], "deviation eps");
      else
        throw Error("cli", "bad_deviation", "unknown deviation field: " + kv[0]);
    }
    if (k < 1 || k > n.order())
      throw Error("cli", "bad_deviation", "deviation order k outside the torsion jet");
    n[k] = n[k] + Real(eps, cfg.bits);
  }
  NeumannRun run = neumann_run(F, n, parse_point(cfg.z), parse_ladder(cfg.ladder));
  return neumann_json(run);
}

json sternberg_artifact(const RunConfig& cfg) {
  FoliationMap F = build_map(cfg);
  Normalization norm = solve_homological(F, cfg.order, Gauge::basic());
  BiSeries ng(F.g.order(), cfg.bits, true);
  for (int s = 1; s <= norm.n.order(); ++s)
    ng.at(s, s) = Complex(norm.n[s], Real(0.0, cfg.bits));
  FoliationMap N = make_custom(F.mult, F.f, ng);

  json points = json::array();
  for (int i = 0; i < 5; ++i) {
    double r = cfg.r0 * (0.25 + 0.7 * i / 4.0);
    for (int j = 0; j < 8; ++j) {
      double th = 2.0 * 3.14159265358979323846 * j / 8.0;
      cplx zz = std::polar(r, th);
      cplx w = sternberg_eval(F, N, zz, cfg.r0);
      cplx lhs = sternberg_eval(F, N, iterate(F, zz, 1), cfg.r0);
      cplx rhs = iterate(N, w, 1);
      points.push_back({{"r", r},
                        {"theta", th},
                        {"z_re", zz.real()},
                        {"z_im", zz.imag()},
                        {"w_re", w.real()},
                        {"w_im", w.imag()},
                        {"conj_err", std::abs(lhs - rhs)},
                        {"radius_err", std::abs(std::abs(w) - std::abs(zz))}});
    }
  }
  return json{{"r0", cfg.r0}, {"points", std::move(points)}};
}

std::string sternberg_csv(const json& table) {
  std::string csv = "r,theta,z_re,z_im,w_re,w_im,conj_err,radius_err\n";
  char buf[256];
  for (const json& p : table.at("points")) {
    std::snprintf(buf, sizeof buf, "%.6f,%.6f,%.17g,%.17g,%.17g,%.17g,%.3e,%.3e\n",
                  p.at("r").get<double>(), p.at("theta").get<double>(),
                  p.at("z_re").get<double>(), p.at("z_im").get<double>(),
                  p.at("w_re").get<double>(), p.at("w_im").get<double>(),
                  p.at("conj_err").get<double>(), p.at("radius_err").get<double>());
    csv += buf;
  }
  return csv;
}

TongueScan tongues_scan(const RunConfig& cfg) {
  if (cfg.family == "arnold") {
    std::vector<double> grid =
        linspace_spec(cfg.grid.empty() ? "0:1:101" : cfg.grid, "tongue grid");
    return tongue_scan_arnold(grid, cfg.t, cfg.q_max, cfg.tol);
  }
  FoliationMap F = build_map(cfg);
  std::vector<double> grid =
      linspace_spec(cfg.grid.empty() ? "0.02:0.4:77" : cfg.grid, "tongue grid");
  return tongue_scan_family(F, grid, cfg.q_max, cfg.tol);
}

GrowthProfile growth_profile(const RunConfig& cfg) {
  FoliationMap F = build_map(cfg);
  Normalization norm = solve_homological(F, cfg.order, build_gauge(cfg));
  warn_near_resonance(norm, cfg.bits);
  return coefficient_growth(norm);
}

json diagnose_artifact(const RunConfig& cfg) {
  if (cfg.what == "cf")
    return cf_json(continued_fraction(build_multiplier(cfg), cfg.depth));
  if (cfg.what == "brjuno")
    return brjuno_json(brjuno(build_multiplier(cfg), cfg.depth));
  if (cfg.what == "crafted") {
    json j{{"rule", "a_{n+1} = 10^{q_n}"},
           {"cf", cf_json(cf_exponential_quotients(cfg.depth, cfg.bits))}};
    json partials = json::array();
    for (const Real& x : brjuno_exponential_partials(cfg.depth, cfg.bits))
      partials.push_back(real_str(x));
    j["partials"] = std::move(partials);
    return j;
  }
  if (cfg.what == "growth") return growth_json(growth_profile(cfg));
  if (cfg.what == "slope") {
    FoliationMap F = build_map(cfg);
    SlopeReduction red = slope_reduction(F, cfg.order);
    if (red.attained && red.N > 0) {
      Normalization norm = solve_homological(F, cfg.order, Gauge::basic());
      Real res = reduction_consistency(F, norm, cfg.order);
      return slope_json(red, &res);
    }
    return slope_json(red);
  }
  throw Error("cli", "bad_what", "diagnose wants --what cf|brjuno|crafted|growth|slope");
}

void emit_json(const RunConfig& cfg, const json& j) {
  std::string text = j.dump(2) + "\n";
  if (cfg.out.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(cfg.out, text);
}

void emit_text(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(cfg.out, text);
}

}  // namespace

Multiplier parse_omega(const std::string& spec, int bits) {
  if (spec == "golden") return Multiplier::golden(bits);
  if (spec.rfind("quad:", 0) == 0) {
    auto parts = split(spec.substr(5), ',');
    if (parts.size() != 4)
      throw Error("cli", "bad_omega", "quad form wants quad:p,q,D,r");
    return Multiplier::quad(to_long(parts[0], "p"), to_long(parts[1], "q"),
                            to_long(parts[2], "D"), to_long(parts[3], "r"), bits);
  }
  if (spec.rfind("cf:", 0) == 0) {
    std::vector<long long> a;
    for (const auto& p : split(spec.substr(3), ',')) a.push_back(to_long(p, "cf entry"));
    return Multiplier::cf_prefix(a, bits);
  }
  return Multiplier::literal_str(spec, bits);
}

int run(const RunConfig& cfg) {
  if (cfg.bits < 64) throw Error("cli", "bad_bits", "precision must be >= 64 bits");
  if (cfg.order < 1 || cfg.order > 80)
    throw Error("cli", "bad_order", "order must lie in 1..80");
  if (cfg.command == "normalize") {
    emit_json(cfg, normalize_artifact(cfg));
  } else if (cfg.command == "transform") {
    emit_json(cfg, transform_artifact(cfg));
  } else if (cfg.command == "neumann") {
    emit_json(cfg, neumann_artifact(cfg));
  } else if (cfg.command == "sternberg") {
    emit_text(cfg, sternberg_csv(sternberg_artifact(cfg)));
  } else if (cfg.command == "tongues") {
    TongueScan scan = tongues_scan(cfg);
    if (cfg.out.empty()) {
      std::fputs(tongue_csv(scan).c_str(), stdout);
    } else {
      write_file(cfg.out + ".csv", tongue_csv(scan));
      write_file(cfg.out + ".svg", tongue_svg(scan));
      write_file(cfg.out + ".json", tongue_json(scan).dump(2) + "\n");
    }
  } else if (cfg.command == "diagnose") {
    if (cfg.what == "growth" && !cfg.out.empty()) {
      // growth gets the CSV companion next to the JSON
      GrowthProfile prof = growth_profile(cfg);
      write_file(cfg.out + ".csv", growth_csv(prof));
      RunConfig sub = cfg;
      sub.out = cfg.out + ".json";
      emit_json(sub, growth_json(prof));
    } else {
      emit_json(cfg, diagnose_artifact(cfg));
    }
  } else {
    throw Error("cli", "bad_command", "unknown command: " + cfg.command);
  }
  return 0;
}

std::string run_json(const RunConfig& cfg) {
  if (cfg.bits < 64) throw Error("cli", "bad_bits", "precision must be >= 64 bits");
  if (cfg.order < 1 || cfg.order > 80)
    throw Error("cli", "bad_order", "order must lie in 1..80");
  json j;
  if (cfg.command == "normalize")
    j = normalize_artifact(cfg);
  else if (cfg.command == "transform")
    j = transform_artifact(cfg);
  else if (cfg.command == "neumann")
    j = neumann_artifact(cfg);
  else if (cfg.command == "sternberg")
    j = sternberg_artifact(cfg);
  else if (cfg.command == "tongues")
    j = tongue_json(tongues_scan(cfg));
  else if (cfg.command == "diagnose")
    j = diagnose_artifact(cfg);
  else
    throw Error("cli", "bad_command", "unknown command: " + cfg.command);
  return j.dump(2) + "\n";
}

int cli_main(int argc, char** argv) {
  RunConfig cfg;
  if (const char* env = std::getenv("CIRCLENF_BITS")) {
    int b = std::atoi(env);
    if (b > 0) cfg.bits = b;
  }

  CLI::App app{"normal forms of foliation-preserving maps: solve, transform, iterate"};
  app.require_subcommand(1);

  auto add_map_flags = [&](CLI::App* sub) {
    sub->add_option("--family", cfg.family, "A | B | C | custom");
    sub->add_option("--omega", cfg.omega, "golden | quad:p,q,D,r | cf:a0,a1,... | decimal");
    sub->add_option("--modulus", cfg.modulus, "multiplier modulus in (0,1]");
    sub->add_option("--a", cfg.a, "family coefficient");
    sub->add_option("--d", cfg.d, "family valuation");
    sub->add_option("--order", cfg.order, "truncation order");
    sub->add_option("--bits", cfg.bits, "working precision (default CIRCLENF_BITS or 256)");
    sub->add_option("--map", cfg.map_file, "JSON map description file");
    sub->add_option("--out", cfg.out, "artifact path (stdout when omitted)");
  };

  CLI::App* norm = app.add_subcommand("normalize", "solve the homological equation");
  add_map_flags(norm);
  norm->add_option("--gauge", cfg.gauge, "basic | kill-torsion | custom-diagonal | strong");
  norm->add_option("--diag", cfg.diag, "custom-diagonal entries")->delimiter(',');

  CLI::App* tr = app.add_subcommand("transform", "gauge action / polynomial normal form");
  add_map_flags(tr);
  tr->add_option("--gauge-a", cfg.gauge_a, "radial part of H, comma list");
  tr->add_option("--gauge-b", cfg.gauge_b, "angular part of H, comma list");
  tr->add_flag("--poly", cfg.poly, "emit the polynomial normal form");

  CLI::App* ne = app.add_subcommand("neumann", "partial-sum ladder and verdict");
  add_map_flags(ne);
  ne->add_option("--z", cfg.z, "base point, re or re,im");
  ne->add_option("--ladder", cfg.ladder, "m0:m1 doubling range or comma list");
  ne->add_option("--n-jet", cfg.n_jet, "truncate the fed torsion to this degree");
  ne->add_option("--n-deviation", cfg.n_deviation, "perturb the torsion: k=K[,eps=E]");

  CLI::App* st = app.add_subcommand("sternberg", "pointwise conjugacy table");
  add_map_flags(st);
  st->add_option("--r0", cfg.r0, "outer radius of the construction");

  CLI::App* to = app.add_subcommand("tongues", "rotation-number scan with plateaus");
  add_map_flags(to);
  to->add_option("--t", cfg.t, "Arnold slice parameter");
  to->add_option("--grid", cfg.grid, "lo:hi:n scan grid");
  to->add_option("--qmax", cfg.q_max, "largest plateau denominator");
  to->add_option("--tol", cfg.tol, "rotation-number tolerance");

  CLI::App* di = app.add_subcommand("diagnose", "arithmetic and divergence reports");
  add_map_flags(di);
  di->add_option("--what", cfg.what, "cf | brjuno | crafted | growth | slope");
  di->add_option("--depth", cfg.depth, "continued-fraction depth");
  di->add_option("--gauge", cfg.gauge, "gauge for --what growth");
  di->add_option("--diag", cfg.diag, "custom-diagonal entries")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  for (CLI::App* sub : app.get_subcommands()) cfg.command = sub->get_name();

  try {
    return run(cfg);
  } catch (const Error& e) {
    std::fputs((error_json(e).dump(2) + "\n").c_str(), stdout);
    return 2;
  } catch (const std::exception& e) {
    Error wrapped("cli", "internal", e.what());
    std::fputs((error_json(wrapped).dump(2) + "\n").c_str(), stdout);
    return 3;
  }
}

}  // namespace circlenf
