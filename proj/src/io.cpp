#include "circlenf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace circlenf {

namespace {

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string g17(double x) { return fmt("%.17g", x); }

// a Real that survives a double round trip is written as a JSON number,
// anything else as a full-precision decimal string
json real_field(const Real& x) {
  double d = x.d();
  if (std::isfinite(d) && Real(d, x.prec()) == x) return json(d);
  return json(real_str(x));
}

Real real_from_field(const json& j, int bits) {
  if (j.is_string()) return Real(j.get<std::string>(), bits);
  return Real(j.get<double>(), bits);
}

json complex_json(const Complex& z) {
  return json{{"re", real_str(z.re())}, {"im", real_str(z.im())}};
}

}  // namespace

std::string real_str(const Real& x) {
  if (!mpfr_number_p(x.raw()))
    return mpfr_nan_p(x.raw()) ? "nan" : (x.sgn() < 0 ? "-inf" : "inf");
  return x.str();
}

json series_json(const BiSeries& s) {
  json terms = json::array();
  for (int l = 1; l <= s.order(); ++l)
    for (int j = 0; j <= l; ++j) {
      const Complex& c = s.at(j, l - j);
      if (c.re().is_zero() && c.im().is_zero()) continue;
      terms.push_back({{"j", j},
                       {"k", l - j},
                       {"re", real_str(c.re())},
                       {"im", real_str(c.im())}});
    }
  return json{{"order", s.order()}, {"terms", std::move(terms)}};
}

json series_json(const RadialSeries& s) {
  json terms = json::array();
  for (int k = 0; k <= s.order(); ++k) {
    if (s[k].is_zero()) continue;
    terms.push_back({{"j", k}, {"k", k}, {"re", real_str(s[k])}, {"im", "0"}});
  }
  return json{{"order", s.order()}, {"terms", std::move(terms)}};
}

json series_json(const ComplexSeries& s) {
  json terms = json::array();
  for (int k = 0; k <= s.order(); ++k) {
    if (s[k].re().is_zero() && s[k].im().is_zero()) continue;
    terms.push_back({{"j", k},
                     {"k", 0},
                     {"re", real_str(s[k].re())},
                     {"im", real_str(s[k].im())}});
  }
  return json{{"order", s.order()}, {"terms", std::move(terms)}};
}

json multiplier_json(const Multiplier& m) {
  json j;
  switch (m.form()) {
    case Multiplier::Form::Golden: j["form"] = "golden"; break;
    case Multiplier::Form::Literal: j["form"] = "literal"; break;
    case Multiplier::Form::Quad: j["form"] = "quad"; break;
    case Multiplier::Form::CfPrefix: j["form"] = "cf"; break;
  }
  if (m.form() == Multiplier::Form::Quad) {
    const auto& qp = m.quad_params();
    j["p"] = qp[0];
    j["q"] = qp[1];
    j["D"] = qp[2];
    j["r"] = qp[3];
  }
  if (m.form() == Multiplier::Form::CfPrefix) j["cf"] = m.cf_hint();
  j["value"] = real_str(m.omega());
  j["modulus"] = real_field(m.modulus());
  return j;
}

Multiplier multiplier_from_json(const json& j, int bits) {
  std::string form = j.value("form", "literal");
  Multiplier m = Multiplier::golden(bits);
  if (form == "golden") {
    // done
  } else if (form == "quad") {
    m = Multiplier::quad(j.at("p").get<long>(), j.at("q").get<long>(),
                         j.at("D").get<long>(), j.at("r").get<long>(), bits);
  } else if (form == "cf") {
    m = Multiplier::cf_prefix(j.at("cf").get<std::vector<long long>>(), bits);
  } else if (form == "literal") {
    m = Multiplier::literal_str(j.at("value").get<std::string>(), bits);
  } else {
    throw Error("io", "bad_omega_form", "unknown omega form: " + form);
  }
  if (j.contains("modulus")) {
    Real mod = real_from_field(j.at("modulus"), bits);
    if (mod < Real(1.0, bits)) m = m.with_modulus(mod);
  }
  return m;
}

namespace {

const char* family_name(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::Custom: return "custom";
  }
  return "custom";
}

Family family_from_name(const std::string& s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  if (s == "C" || s == "c") return Family::C;
  if (s == "custom") return Family::Custom;
  throw Error("io", "bad_family", "unknown family: " + s);
}

}  // namespace

json map_json(const FoliationMap& F) {
  json f = json::array();
  for (int s = 1; s <= F.f.order(); ++s) f.push_back(real_str(F.f[s]));
  json j{{"family", family_name(F.tag)},
         {"omega", multiplier_json(F.mult)},
         {"modulus", real_field(F.mult.modulus())},
         {"a", real_field(F.a)},
         {"d", F.d},
         {"order", F.order()},
         {"bits", F.bits()},
         {"f", std::move(f)},
         {"g", series_json(F.g)["terms"]}};
  return j;
}

FoliationMap map_from_json(const json& j) {
  int bits = j.value("bits", 256);
  int order = j.value("order", 16);
  Family tag = family_from_name(j.value("family", "custom"));
  Multiplier mult = multiplier_from_json(j.at("omega"), bits);
  if (j.contains("modulus")) {
    Real mod = real_from_field(j.at("modulus"), bits);
    if (mod < Real(1.0, bits)) mult = mult.with_modulus(mod);
  }
  if (tag != Family::Custom) {
    Real a = j.contains("a") ? real_from_field(j.at("a"), bits) : Real(-1.0, bits);
    return make_family(tag, mult, a, j.value("d", 1), order, bits);
  }
  RadialSeries f(order, bits);
  if (j.contains("f")) {
    const json& arr = j.at("f");
    for (size_t i = 0; i < arr.size() && static_cast<int>(i) < order; ++i)
      f[static_cast<int>(i) + 1] = real_from_field(arr[i], bits);
  }
  BiSeries g(order, bits, true);
  if (j.contains("g"))
    for (const json& t : j.at("g")) {
      int p = t.at("j").get<int>(), q = t.at("k").get<int>();
      if (p < 0 || q < 0 || p + q > order)
        throw Error("io", "bad_term", "g term outside the triangle");
      g.at(p, q) = Complex(real_from_field(t.at("re"), bits),
                           real_from_field(t.value("im", json("0")), bits));
    }
  return make_custom(mult, f, g);
}

FoliationMap map_from_file(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error("io", "bad_json", std::string("cannot parse ") + path + ": " + e.what());
  }
  return map_from_json(j);
}

json normalization_json(const Normalization& norm) {
  json phi = json::array();
  for (int l = 1; l <= norm.phi.order(); ++l)
    for (int p = 0; p <= l; ++p) {
      const Complex& c = norm.phi.at(p, l - p);
      if (c.re().is_zero() && c.im().is_zero()) continue;
      phi.push_back({{"p", p},
                     {"q", l - p},
                     {"re", real_str(c.re())},
                     {"im", real_str(c.im())}});
    }
  json n = json::array();
  for (int s = 1; s <= norm.n.order(); ++s) {
    if (norm.n[s].is_zero()) continue;
    n.push_back({{"s", s}, {"value", real_str(norm.n[s])}});
  }
  json msd = json::array();
  for (const auto& [deg, v] : norm.small_divisor_log)
    msd.push_back({{"degree", deg}, {"value", real_str(v)}});
  return json{{"gauge", gauge_name(norm.gauge.kind)},
              {"phi", std::move(phi)},
              {"n", std::move(n)},
              {"residual", real_str(norm.residual)},
              {"min_small_divisor", std::move(msd)}};
}

json normal_form_json(const NormalFormPair& nf) {
  json alpha = json::array(), beta = json::array();
  for (int s = 1; s <= nf.alpha.order(); ++s)
    if (!nf.alpha[s].is_zero())
      alpha.push_back({{"s", s}, {"value", real_str(nf.alpha[s])}});
  for (int s = 1; s <= nf.beta.order(); ++s)
    if (!nf.beta[s].is_zero())
      beta.push_back({{"s", s}, {"value", real_str(nf.beta[s])}});
  return json{{"omega", multiplier_json(nf.mult)},
              {"alpha", std::move(alpha)},
              {"beta", std::move(beta)}};
}

json poly_nf_json(const PolyNormalForm& p) {
  json P = json::array();
  for (int k = 0; k <= p.P.order(); ++k) {
    if (p.P[k].re().is_zero() && p.P[k].im().is_zero()) continue;
    P.push_back({{"k", k}, {"re", real_str(p.P[k].re())}, {"im", real_str(p.P[k].im())}});
  }
  json Q = json::array(), G = json::array();
  for (int s = 0; s <= p.Q.order(); ++s)
    if (!p.Q[s].is_zero()) Q.push_back({{"s", s}, {"value", real_str(p.Q[s])}});
  for (int s = 0; s <= p.G.order(); ++s)
    if (!p.G[s].is_zero()) G.push_back({{"s", s}, {"value", real_str(p.G[s])}});
  return json{{"r", p.r},
              {"b", real_str(p.b)},
              {"c", real_str(p.c)},
              {"P", std::move(P)},
              {"Q", std::move(Q)},
              {"G", std::move(G)},
              {"residual", real_str(p.residual)},
              {"residual_split", real_str(p.residual_split)}};
}

json neumann_json(const NeumannRun& run) {
  json ladder = json::array();
  for (const auto& step : run.ladder)
    ladder.push_back(
        {{"M", step.M}, {"S_re", step.S.real()}, {"S_im", step.S.imag()}});
  return json{{"ladder", std::move(ladder)},
              {"verdict", run.verdict},
              {"exponent", run.exponent}};
}

json tongue_json(const TongueScan& scan) {
  json plateaus = json::array();
  for (const Plateau& pl : scan.plateaus)
    plateaus.push_back({{"p", pl.p},
                        {"q", pl.q},
                        {"lo", pl.lo},
                        {"hi", pl.hi},
                        {"width", pl.hi - pl.lo}});
  json j{{"arnold", scan.arnold}};
  if (scan.arnold) j["t"] = scan.t;
  j["grid"] = scan.grid;
  j["rho"] = scan.rho;
  j["plateaus"] = std::move(plateaus);
  return j;
}

json cf_json(const ContinuedFraction& cf) {
  json a = json::array(), p = json::array(), q = json::array();
  for (const Real& x : cf.a) a.push_back(real_str(x));
  for (const Real& x : cf.p) p.push_back(real_str(x));
  for (const Real& x : cf.q) q.push_back(real_str(x));
  return json{{"a", std::move(a)},
              {"p", std::move(p)},
              {"q", std::move(q)},
              {"reliable_depth", cf.reliable_depth},
              {"exhausted", cf.exhausted}};
}

json brjuno_json(const BrjunoReport& rep) {
  json partials = json::array();
  for (const Real& x : rep.partials) partials.push_back(real_str(x));
  return json{{"verdict", rep.verdict},
              {"term_trend", rep.term_trend},
              {"partials", std::move(partials)},
              {"cf", cf_json(rep.cf)}};
}

json growth_json(const GrowthProfile& prof) {
  json rows = json::array();
  for (const auto& row : prof.rows)
    rows.push_back({{"degree", row.degree},
                    {"max_coeff", real_str(row.max_coeff)},
                    {"root_test", row.root_test},
                    {"min_small_divisor", real_str(row.min_small_divisor)}});
  return json{{"heuristic", prof.heuristic}, {"trend", prof.trend}, {"rows", std::move(rows)}};
}

json slope_json(const SlopeReduction& red, const Real* consistency) {
  json ladder = json::array();
  for (const auto& rung : red.ladder)
    ladder.push_back({rung[0], rung[1], rung[2]});
  json j{{"N", red.N},
         {"M", red.M},
         {"rho", red.M > 0 ? static_cast<double>(red.N) / red.M : 0.0},
         {"attained", red.attained},
         {"base_integral", red.base_integral},
         {"P", red.P},
         {"Q", red.Q},
         {"ladder", std::move(ladder)},
         {"g0", series_json(red.g0)["terms"]},
         {"F0", series_json(red.F0)["terms"]},
         {"lambda_N", complex_json(red.lambdaN)}};
  if (!red.note.empty()) j["note"] = red.note;
  if (consistency) j["consistency"] = real_str(*consistency);
  return j;
}

json error_json(const Error& e) {
  return json{{"code", e.code}, {"module", e.module}, {"message", e.what()}};
}

std::string tongue_csv(const TongueScan& scan) {
  std::string out = scan.arnold ? "s,t,rho\n" : "r,rho\n";
  for (size_t i = 0; i < scan.grid.size(); ++i) {
    out += g17(scan.grid[i]);
    if (scan.arnold) out += "," + g17(scan.t);
    out += "," + g17(i < scan.rho.size() ? scan.rho[i] : 0.0) + "\n";
  }
  return out;
}

std::string growth_csv(const GrowthProfile& prof) {
  std::string out = "degree,max_coeff,root_test,min_small_divisor\n";
  for (const auto& row : prof.rows)
    out += std::to_string(row.degree) + "," + g17(row.max_coeff.d()) + "," +
           g17(row.root_test) + "," + g17(row.min_small_divisor.d()) + "\n";
  return out;
}

std::string tongue_svg(const TongueScan& scan) {
  const double W = 720, H = 480;
  const double L = 64, R = 700, T = 24, B = 436;
  double x0 = 0, x1 = 1;
  if (!scan.grid.empty()) {
    x0 = scan.grid.front();
    x1 = scan.grid.back();
  }
  if (x1 <= x0) x1 = x0 + 1;
  double y0 = 0, y1 = 1;
  if (!scan.rho.empty()) {
    y0 = y1 = scan.rho[0];
    for (double r : scan.rho) {
      y0 = std::min(y0, r);
      y1 = std::max(y1, r);
    }
    double pad = std::max(0.05 * (y1 - y0), 1e-3);
    y0 -= pad;
    y1 += pad;
  }
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (R - L); };
  auto sy = [&](double y) { return B - (y - y0) / (y1 - y0) * (B - T); };
  auto px = [&](double v) { return fmt("%.2f", v); };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  s << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H
    << "\" fill=\"white\"/>\n";
  // plateau shading (clipped to the plot area)
  for (const Plateau& pl : scan.plateaus) {
    double lo = std::max(pl.lo, x0), hi = std::min(pl.hi, x1);
    if (hi <= lo) continue;
    s << "<rect x=\"" << px(sx(lo)) << "\" y=\"" << px(T) << "\" width=\""
      << px(sx(hi) - sx(lo)) << "\" height=\"" << px(B - T)
      << "\" fill=\"#f2c9c9\"/>\n";
  }
  // axes
  s << "<line x1=\"" << px(L) << "\" y1=\"" << px(B) << "\" x2=\"" << px(R) << "\" y2=\""
    << px(B) << "\" stroke=\"#222\" stroke-width=\"1\"/>\n";
  s << "<line x1=\"" << px(L) << "\" y1=\"" << px(T) << "\" x2=\"" << px(L) << "\" y2=\""
    << px(B) << "\" stroke=\"#222\" stroke-width=\"1\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    double fx = x0 + (x1 - x0) * i / 5.0;
    double fy = y0 + (y1 - y0) * i / 5.0;
    s << "<line x1=\"" << px(sx(fx)) << "\" y1=\"" << px(B) << "\" x2=\"" << px(sx(fx))
      << "\" y2=\"" << px(B + 5) << "\" stroke=\"#222\"/>\n";
    s << "<text x=\"" << px(sx(fx)) << "\" y=\"" << px(B + 18)
      << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#333\" "
         "text-anchor=\"middle\">"
      << fmt("%.4g", fx) << "</text>\n";
    s << "<line x1=\"" << px(L - 5) << "\" y1=\"" << px(sy(fy)) << "\" x2=\"" << px(L)
      << "\" y2=\"" << px(sy(fy)) << "\" stroke=\"#222\"/>\n";
    s << "<text x=\"" << px(L - 8) << "\" y=\"" << px(sy(fy) + 4)
      << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#333\" "
         "text-anchor=\"end\">"
      << fmt("%.4g", fy) << "</text>\n";
  }
  s << "<text x=\"" << px((L + R) / 2) << "\" y=\"" << px(H - 8)
    << "\" font-family=\"monospace\" font-size=\"12\" fill=\"#111\" "
       "text-anchor=\"middle\">"
    << (scan.arnold ? "s" : "r") << "</text>\n";
  s << "<text x=\"14\" y=\"" << px((T + B) / 2)
    << "\" font-family=\"monospace\" font-size=\"12\" fill=\"#111\" "
       "text-anchor=\"middle\" transform=\"rotate(-90 14 "
    << px((T + B) / 2) << ")\">rotation number</text>\n";
  if (scan.arnold)
    s << "<text x=\"" << px((L + R) / 2) << "\" y=\"16\" font-family=\"monospace\" "
         "font-size=\"12\" fill=\"#111\" text-anchor=\"middle\">tongues, t="
      << fmt("%.6g", scan.t) << "</text>\n";
  // the rotation-number curve
  if (!scan.grid.empty()) {
    s << "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < scan.grid.size() && i < scan.rho.size(); ++i) {
      if (i) s << " ";
      s << px(sx(scan.grid[i])) << "," << px(sy(scan.rho[i]));
    }
    s << "\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io", "read_failed", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io", "write_failed", "cannot open " + path);
  out << content;
  if (!out) throw Error("io", "write_failed", "short write to " + path);
}

}  // namespace circlenf
