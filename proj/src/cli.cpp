#include "runge/cli.hpp"

#include <cstdlib>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "runge/analytic.hpp"
#include "runge/bounds.hpp"
#include "runge/cusps.hpp"
#include "runge/error.hpp"
#include "runge/modnt.hpp"
#include "runge/sweeps.hpp"
#include "runge/units.hpp"

namespace runge::cli {

namespace {

using nlohmann::json;

enum class Format { Json, Text };

struct Config {
  Format format = Format::Json;
  mpfr_prec_t precision = kDefaultPrecision;
  unsigned jobs = 1;
  std::string group;
  std::string sigma = "infinity";
  std::size_t s = 0;
  std::vector<std::uint64_t> finite_primes;
  bool via_g = false;
  std::string theorem;
  std::uint64_t p = 0;
  std::string j = "1";
  std::string q, r;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

json big(const mpz_class& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

json ball_json(const RealBall& b) {
  return json{{"upper", b.upper_d()}, {"lower", b.lower_d()}, {"mid", b.mid_d()}, {"rad", b.rad_d()}};
}

json group_json(const std::string& spec, const SubgroupG& g) {
  return json{{"spec", spec}, {"N", g.modulus()}, {"order", g.order()}, {"det_full", det_image(g).is_full}};
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int exit_code_for(Errc c) {
  switch (c) {
    case Errc::InvalidArgument:
    case Errc::ParseError:
    case Errc::NonInvertibleGenerator:
    case Errc::ModulusMismatch:
    case Errc::UnsupportedModulus:
    case Errc::GroupTooLarge:
      return 2;
    default:
      return 1;
  }
}

// ---- cusps ----

int cmd_cusps(const Config& cfg, std::ostream& out) {
  const SubgroupG g = parse_group_spec(cfg.group);
  const CuspTable table(g);
  const bool rational = table.defined_over_q();
  json cusps = json::array();
  for (std::size_t i = 0; i < table.cusps().size(); ++i) {
    const CuspClass& c = table.cusps()[i];
    json e{{"index", i}, {"rep", {c.x, c.y}}, {"width", c.width}};
    if (rational) {
      const std::size_t o = table.orbit_of(i);
      e["orbit_id"] = o;
      e["orbit_degree"] = table.orbit_members()[o].size();
    } else {
      e["orbit_id"] = nullptr;
      e["orbit_degree"] = nullptr;
    }
    cusps.push_back(e);
  }
  json rep{{"schema", 1},
           {"command", "cusps"},
           {"group", group_json(cfg.group, g)},
           {"cusps", cusps},
           {"cusp_count", table.cusps().size()},
           {"orbit_count", rational ? json(table.orbit_count()) : json(nullptr)}};
  if (cfg.format == Format::Json) {
    emit(out, rep);
    return 0;
  }
  out << "group " << cfg.group << ": N=" << g.modulus() << " |G|=" << g.order() << "\n";
  out << table.cusps().size() << " cusps";
  if (rational) out << ", " << table.orbit_count() << " Galois orbits";
  out << "\n";
  out << std::left << std::setw(6) << "index" << std::setw(14) << "rep" << std::setw(7) << "width" << std::setw(7)
      << "orbit" << "degree\n";
  for (const auto& c : rep["cusps"]) {
    std::ostringstream r;
    r << "(" << c["rep"][0] << "," << c["rep"][1] << ")";
    out << std::setw(6) << c["index"].get<std::size_t>() << std::setw(14) << r.str() << std::setw(7)
        << c["width"].get<unsigned>() << std::setw(7) << c["orbit_id"].dump() << c["orbit_degree"].dump() << "\n";
  }
  return 0;
}

// ---- runge-unit ----

int cmd_runge_unit(const Config& cfg, std::ostream& out) {
  const SubgroupG g = parse_group_spec(cfg.group);
  const CuspTable table(g);
  const std::vector<std::size_t> sigma = resolve_sigma(table, cfg.sigma);
  const std::size_t s = cfg.s ? cfg.s : std::max<std::size_t>(1, sigma.size());
  const RungeUnit u = runge_unit(g, sigma, s);
  json exps = json::array();
  for (const auto& e : u.exponents) exps.push_back({{"a", {e.a.a1, e.a.a2}}, {"b", big(e.b)}});
  json div = json::array();
  for (std::size_t i = 0; i < u.divisor.size(); ++i) {
    const CuspClass& c = table.cusps()[i];
    div.push_back({{"cusp", i}, {"rep", {c.x, c.y}}, {"orbit_id", table.orbit_of(i)}, {"ord", big(u.divisor[i])}});
  }
  json rep{{"schema", 1},
           {"command", "runge-unit"},
           {"group", group_json(cfg.group, g)},
           {"sigma", u.sigma},
           {"s", u.s},
           {"exponents", exps},
           {"divisor", div},
           {"l1_norm", big(u.l1_norm)},
           {"bound_B", u.bound_B},
           {"bound_B_squared", big(u.bound_B_squared)},
           {"lambda_height_budget",
            {{"log2_form", u.lambda_budget_log2}, {"relaxed", u.lambda_budget_relaxed}}}};
  if (cfg.format == Format::Json) {
    emit(out, rep);
    return 0;
  }
  out << "Runge unit for " << cfg.group << ", sigma = " << json(u.sigma).dump() << ", s = " << u.s << "\n";
  out << "w = prod w_a^b_a:\n";
  for (const auto& e : u.exponents) out << "  a=(" << e.a.a1 << "," << e.a.a2 << ")/" << e.a.n << "  b=" << e.b << "\n";
  out << "divisor:\n";
  for (const auto& d : div)
    out << "  cusp " << d["cusp"] << " (" << d["rep"][0] << "," << d["rep"][1] << ") orbit " << d["orbit_id"]
        << ": " << d["ord"].dump() << "\n";
  out << "l1 norm = " << u.l1_norm << "\n";
  out << "B = sqrt(" << u.bound_B_squared << ") <= " << fmt_double(u.bound_B) << "\n";
  out << "lambda budget: 12*B*|G|*N*log 2 <= " << fmt_double(u.lambda_budget_log2)
      << ", 9*B*|G|*N <= " << fmt_double(u.lambda_budget_relaxed) << "\n";
  return 0;
}

// ---- bound ----

json bound_json(const BoundReport& b) {
  json inputs = json::object();
  for (const auto& [k, v] : b.inputs) inputs[k] = v;
  return json{{"schema", 1},
              {"command", "bound"},
              {"name", b.name},
              {"inputs", inputs},
              {"value_exact_form", b.value_exact_form},
              {"value_instantiated", b.value_instantiated},
              {"value_log", b.applicable ? json(b.value_upper()) : json(nullptr)},
              {"value_ball", b.applicable ? ball_json(b.value) : json(nullptr)},
              {"exact", b.exact ? json(b.exact->get_str()) : json(nullptr)},
              {"applicable", b.applicable},
              {"reason", b.reason}};
}

void bound_text(std::ostream& out, const BoundReport& b) {
  out << b.name << ":";
  for (const auto& [k, v] : b.inputs) out << " " << k << "=" << v;
  out << "\n";
  if (!b.applicable) {
    out << "  not applicable: " << b.reason << "\n";
    return;
  }
  out << "  " << b.value_exact_form << " = " << b.value_instantiated;
  if (b.exact)
    out << " (exact)\n";
  else
    out << " <= " << fmt_double(b.value_upper()) << "\n";
}

int cmd_bound(const Config& cfg, std::ostream& out) {
  BoundReport b;
  json extra = json::object();
  int code = 0;
  if (cfg.theorem == "th1") {
    if (cfg.group.empty()) throw UsageError("--group is required for th1");
    const SubgroupG g = parse_group_spec(cfg.group);
    try {
      b = bound_th1(g, cfg.precision);
    } catch (const Error& e) {
      if (e.code() != Errc::HypothesisFailed) throw;
      b.name = "th1";
      b.inputs = {{"G_order", std::to_string(g.order())}, {"N", std::to_string(g.modulus())}};
      b.value_exact_form = "30*|G|*N^2*log(N)";
      b.applicable = false;
      b.reason = e.what();
      code = 1;
    }
  } else if (cfg.theorem == "tbo") {
    if (cfg.group.empty()) throw UsageError("--group is required for tbo");
    if (cfg.s == 0) throw UsageError("--s is required for tbo");
    const SubgroupG g = parse_group_spec(cfg.group);
    const CalR r = calR(g.modulus(), cfg.finite_primes, cfg.precision);
    b = bound_tbo(cfg.s, g.order(), g.modulus(), r, cfg.via_g, cfg.precision);
    extra["calR"] = {{"value", ball_json(r.value)}, {"primes_used", r.primes_used}, {"log_N_cap", r.log_n_cap.upper_d()},
                     {"within_cap", r.within_cap}};
  } else if (cfg.theorem == "tspto") {
    if (cfg.p == 0) throw UsageError("--p is required for tspto");
    const TsptoReport t = bound_tspto(cfg.p, cfg.precision);
    b = t.bound;
    extra["general_bound"] = {{"form", "60*p^2*(p-1)^2*log(p)"}, {"value", t.general_bound.upper_d()},
                              {"strictly_below", t.below_general}};
  } else {
    throw UsageError("--theorem must be one of th1, tbo, tspto");
  }
  json rep = bound_json(b);
  for (auto& [k, v] : extra.items()) rep[k] = v;
  if (cfg.format == Format::Json) {
    emit(out, rep);
  } else {
    bound_text(out, b);
    if (extra.contains("general_bound"))
      out << "  below 60*p^2*(p-1)^2*log(p) <= " << fmt_double(extra["general_bound"]["value"].get<double>()) << ": "
          << (extra["general_bound"]["strictly_below"].get<bool>() ? "yes" : "no") << "\n";
    if (extra.contains("calR")) out << "  R <= " << fmt_double(extra["calR"]["value"]["upper"].get<double>()) << "\n";
  }
  return code;
}

// ---- verify-analytic ----

int cmd_verify(const Config& cfg, std::ostream& out) {
  SweepOptions opt;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.jobs = cfg.jobs;
  opt.verify.start_precision = cfg.precision;
  opt.verify.max_precision = std::max(kMaxPrecision, cfg.precision);
  const auto sums = run_analytic_sweeps(opt);
  std::size_t checked = 0, holds = 0, fails = 0, indet = 0;
  double worst = 0;
  bool first = true;
  json checks = json::array();
  for (const auto& s : sums) {
    checked += s.checked;
    holds += s.holds;
    fails += s.fails;
    indet += s.indeterminate;
    if (s.holds > 0) {
      worst = first ? s.worst_margin : std::min(worst, s.worst_margin);
      first = false;
    }
    checks.push_back({{"name", s.name},
                      {"checked", s.checked},
                      {"holds", s.holds},
                      {"fails", s.fails},
                      {"indeterminate", s.indeterminate},
                      {"worst_margin", s.worst_margin}});
  }
  json rep{{"schema", 1},    {"command", "verify-analytic"}, {"samples", cfg.samples},
           {"seed", cfg.seed}, {"checked", checked},           {"holds", holds},
           {"fails", fails},   {"indeterminate", indet},       {"worst_margin", worst},
           {"checks", checks}};
  if (cfg.format == Format::Json) {
    emit(out, rep);
  } else {
    out << "seed " << cfg.seed << ", " << cfg.samples << " samples per check\n";
    for (const auto& s : sums)
      out << "  " << std::left << std::setw(22) << s.name << " holds " << s.holds << "/" << s.checked << ", fails "
          << s.fails << ", indeterminate " << s.indeterminate << ", worst margin " << fmt_double(s.worst_margin)
          << "\n";
  }
  return fails == 0 && indet == 0 ? 0 : 1;
}

// ---- serre-check ----

int cmd_serre(const Config& cfg, std::ostream& out) {
  if (cfg.p == 0) throw UsageError("--p is required");
  mpz_class j;
  if (j.set_str(cfg.j, 10) != 0) throw UsageError("--j must be an integer");
  const SerreReport r = serre_check(cfg.p, j);
  const mpz_class threshold = three_prime_threshold();
  json three{{"inequality", "p^3 <= p*q*r <= kappa*(1+23*p*log(p))^2"},
             {"threshold", threshold.get_str()},
             {"p_at_or_beyond_threshold", mpz_class(std::to_string(cfg.p)) >= threshold}};
  if (!cfg.q.empty() || !cfg.r.empty()) {
    mpz_class q, rr;
    if (q.set_str(cfg.q, 10) != 0 || rr.set_str(cfg.r, 10) != 0) throw UsageError("--q and --r must be integers");
    const ThreePrimeCheck t = three_prime_check(mpz_class(std::to_string(cfg.p)), q, rr);
    three["q"] = q.get_str();
    three["r"] = rr.get_str();
    three["product"] = t.product.get_str();
    three["cap"] = t.cap.upper_d();
    three["rejected"] = t.rejected;
  }
  json rep{{"schema", 1},
           {"command", "serre-check"},
           {"p", cfg.p},
           {"j", j.get_str()},
           {"height", ball_json(r.height)},
           {"integral_bound", {{"form", "23*p*log(p)"}, {"value", r.integral_bound.upper_d()}}},
           {"consistent", r.consistent},
           {"level_cap",
            {{"form", "kappa*(1+h)^2"},
             {"value", r.cap.cap.upper_d()},
             {"kappa", r.cap.kappa.get_str()},
             {"kappa_origin", r.cap.kappa_origin}}},
           {"max_n", r.max_n},
           {"conductor_cap", r.conductor_cap ? json(r.conductor_cap->get_str()) : json(nullptr)},
           {"grh",
            {{"form", "kappa*log(N_E)*(log(log(2*N_E)))^6"},
             {"value_kappa_1", r.grh_value ? json(r.grh_value->upper_d()) : json(nullptr)},
             {"grh_constant_unknown", r.grh_constant_unknown}}},
           {"three_prime", three}};
  if (cfg.format == Format::Json) {
    emit(out, rep);
    return 0;
  }
  out << "p = " << cfg.p << ", j = " << j << "\n";
  out << "  log max(|j|,1) <= " << fmt_double(r.height.upper_d()) << "\n";
  out << "  23*p*log(p) = " << 23 * cfg.p << "*log(" << cfg.p << ") <= " << fmt_double(r.integral_bound.upper_d())
      << ": " << (r.consistent ? "consistent" : "inconsistent (no integral point possible)") << "\n";
  out << "  level cap kappa*(1+h)^2 <= " << fmt_double(r.cap.cap.upper_d()) << ", kappa = 16*10^82 ("
      << r.cap.kappa_origin << ")\n";
  out << "  largest n with p^n under the cap: " << r.max_n << "\n";
  if (r.conductor_cap) out << "  conductor cap 2^8*3^5*j^2*(j-1728)^2 = " << *r.conductor_cap << "\n";
  out << "  three-prime threshold: " << threshold << "\n";
  if (three.contains("rejected")) out << "  triple rejected: " << (three["rejected"].get<bool>() ? "yes" : "no") << "\n";
  return 0;
}

// ---- selftest ----

int cmd_selftest(const Config& cfg, std::ostream& out) {
  std::vector<std::pair<std::string, std::function<bool()>>> checks;
  checks.emplace_back("split_cartan_cusp_counts", [] {
    for (std::uint32_t p = 3; p <= 31; p += 2) {
      if (!is_prime(p)) continue;
      const CuspTable t(preset_subgroup(PresetKind::SplitNormalizer, p, 1));
      if (t.cusps().size() != (p + 1) / 2 || t.orbit_count() != 2) return false;
    }
    return true;
  });
  checks.emplace_back("divisor_degree_zero_and_rank", [] {
    for (std::uint32_t p : {3u, 5u, 7u}) {
      const SubgroupG g = preset_subgroup(PresetKind::SplitNormalizer, p, 1);
      const DivisorMatrix m = divisor_matrix(g);
      for (std::size_t c = 0; c < m.entries.cols(); ++c) {
        mpz_class sum = 0;
        for (std::size_t r = 0; r < m.entries.rows(); ++r)
          sum += m.entries(r, c) * static_cast<unsigned long>(m.degrees[r]);
        if (sum != 0) return false;
      }
      if (divisor_rank(m) != m.entries.rows() - 1) return false;
    }
    return true;
  });
  checks.emplace_back("runge_unit_positive_on_sigma", [] {
    const SubgroupG g = preset_subgroup(PresetKind::SplitNormalizer, 7, 1);
    const CuspTable t(g);
    for (std::size_t o = 0; o < t.orbit_count(); ++o) {
      const RungeUnit u = runge_unit(g, {o}, 1);
      for (std::size_t c = 0; c < u.divisor.size(); ++c)
        if (t.orbit_of(c) == o && u.divisor[c] <= 0) return false;
    }
    return true;
  });
  checks.emplace_back("j_q_expansion_head", [] {
    const auto c = j_q_expansion(3);
    return c[0] == 1 && c[1] == 744 && c[2] == 196884;
  });
  checks.emplace_back("j_at_i", [] {
    const ComplexBall j = eval_j(UpperHalfPoint::from_doubles(0, 1, 128), 128);
    return j.re.contains(mpq_class(1728)) && j.im.contains(mpq_class(0));
  });
  checks.emplace_back("exact_bound_values", [] {
    const auto t = bound_tbo(1, 72, 7, RealBall::exact(0L, kBoundPrecision), true, false);
    const auto pe = pellarin_degree(1, RealBall::exact(0L, kBoundPrecision), true);
    mpz_class e82;
    mpz_ui_pow_ui(e82.get_mpz_t(), 10, 82);
    return t.exact && *t.exact == 740880 && pe.exact && *pe.exact == e82 && bound_tspto(7).below_general;
  });
  checks.emplace_back("twist_equation_invariants", [] {
    for (long k = -20; k <= 20; ++k) {
      mpq_class j(k * 97 + 5, 7);
      j.canonicalize();
      if (j == 0 || j == 1728) continue;
      const auto e = twist_equation(j);
      if (e.j_invariant != j) return false;
    }
    return true;
  });
  checks.emplace_back("three_prime_threshold_rejects", [] {
    const mpz_class t = three_prime_threshold();
    mpz_class p, q, r;
    mpz_nextprime(p.get_mpz_t(), mpz_class(t - 1).get_mpz_t());
    mpz_nextprime(q.get_mpz_t(), p.get_mpz_t());
    mpz_nextprime(r.get_mpz_t(), q.get_mpz_t());
    return three_prime_check(p, q, r).rejected && !three_prime_check(11, 13, 17).rejected;
  });
  const Config c = cfg;
  checks.emplace_back("analytic_sweeps_small", [c] {
    SweepOptions opt;
    opt.samples = 40;
    opt.seed = c.seed;
    opt.jobs = c.jobs;
    for (const auto& s : run_analytic_sweeps(opt))
      if (s.fails != 0 || s.indeterminate != 0) return false;
    return true;
  });

  json arr = json::array();
  bool all = true;
  for (const auto& [name, f] : checks) {
    bool ok = false;
    std::string note;
    try {
      ok = f();
    } catch (const std::exception& e) {
      note = e.what();
    }
    all = all && ok;
    json e{{"name", name}, {"pass", ok}};
    if (!note.empty()) e["error"] = note;
    arr.push_back(e);
  }
  if (cfg.format == Format::Json) {
    emit(out, json{{"schema", 1}, {"command", "selftest"}, {"checks", arr}, {"passed", all}});
  } else {
    for (const auto& e : arr) out << (e["pass"].get<bool>() ? "PASS " : "FAIL ") << e["name"].get<std::string>() << "\n";
  }
  return all ? 0 : 1;
}

mpfr_prec_t default_precision() {
  if (const char* env = std::getenv("RUNGE_PRECISION")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v >= 32 && v <= 65536) return v;
  }
  return kDefaultPrecision;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config cfg;
  cfg.precision = default_precision();
  std::string format = "json";
  long precision = cfg.precision;

  CLI::App app{"Runge's method on modular curves: cusps, units, bounds and certified analytic checks", "runge"};
  app.require_subcommand(1);
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--precision", precision, "Working precision in bits (default 128, or RUNGE_PRECISION)")
      ->check(CLI::Range(32L, 65536L));
  app.add_option("--jobs", cfg.jobs, "Worker threads for sweeps")->check(CLI::Range(1u, 256u));

  auto* cusps = app.add_subcommand("cusps", "Cusps of X_G with widths and Galois orbits");
  cusps->add_option("--group", cfg.group, "Preset (split:p^n, nonsplit:p^n, borel:p^n, full:p^n) or group file")
      ->required();

  auto* unit = app.add_subcommand("runge-unit", "Runge unit for a set of cusp orbits");
  unit->add_option("--group", cfg.group, "Group spec")->required();
  unit->add_option("--sigma", cfg.sigma, "infinity, rational, nonrational or comma-separated orbit ids");
  unit->add_option("--s", cfg.s, "Size of S (default |sigma|)")->check(CLI::PositiveNumber);

  auto* bound = app.add_subcommand("bound", "Explicit height bounds");
  bound->add_option("--theorem", cfg.theorem, "th1, tbo or tspto")->required()->check(
      CLI::IsMember({"th1", "tbo", "tspto"}));
  bound->add_option("--group", cfg.group, "Group spec (th1, tbo)");
  bound->add_option("--s", cfg.s, "Size of S (tbo)")->check(CLI::PositiveNumber);
  bound->add_option("--finite-primes", cfg.finite_primes, "Primes below the finite places of S (tbo)")
      ->delimiter(',');
  bound->add_flag("--via-g", cfg.via_g, "Label the group order as |G| rather than |G'| (tbo)");
  bound->add_option("--p", cfg.p, "Odd prime (tspto)");

  auto* verify = app.add_subcommand("verify-analytic", "Seeded sweeps of the analytic inequalities");
  verify->add_option("--samples", cfg.samples, "Samples per inequality")->check(CLI::Range(1ul, 10000000ul));
  verify->add_option("--seed", cfg.seed, "RNG seed");

  auto* serre = app.add_subcommand("serre-check", "Integral j at a split Cartan level: consistency chain");
  serre->add_option("--p", cfg.p, "Odd prime")->required();
  serre->add_option("--j", cfg.j, "Integer j-invariant");
  serre->add_option("--q", cfg.q, "Second prime of a three-prime test");
  serre->add_option("--r", cfg.r, "Third prime of a three-prime test");

  auto* self = app.add_subcommand("selftest", "Run the built-in invariant suite");
  self->add_option("--seed", cfg.seed, "RNG seed for the analytic part");

  for (auto* sub : {cusps, unit, bound, verify, serre, self}) sub->fallthrough();

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  cfg.format = format == "text" ? Format::Text : Format::Json;
  cfg.precision = static_cast<mpfr_prec_t>(precision);

  try {
    if (*cusps) return cmd_cusps(cfg, out);
    if (*unit) return cmd_runge_unit(cfg, out);
    if (*bound) return cmd_bound(cfg, out);
    if (*verify) return cmd_verify(cfg, out);
    if (*serre) return cmd_serre(cfg, out);
    if (*self) return cmd_selftest(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  }
  return 2;
}

}  // namespace runge::cli
