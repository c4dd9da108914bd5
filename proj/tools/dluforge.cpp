// dluforge command-line front end. Exit codes: 0 ok, 1 usage, 2 asserted
// bound violated, 3 budget miss, 4 construction/evaluation failure.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dluforge/dluforge.hpp"

using namespace dluforge;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kUsage = 1, kBound = 2, kBudget = 3, kFailure = 4 };

std::uint64_t env_seed() {
  const char* s = std::getenv("DLU_FORGE_SEED");
  if (!s || !*s) return kDefaultSeed;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 0);
    if (used == std::string(s).size()) return v;
  } catch (const std::exception&) {
  }
  throw ParameterError(std::string("DLU_FORGE_SEED is not an integer: ") + s);
}

Params parse_params(const std::vector<std::string>& kv) {
  Params p;
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ParameterError("expected key=value, got '" + item + "'");
    p.set(item.substr(0, eq), item.substr(eq + 1));
  }
  return p;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const std::string tok = s.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParameterError("cannot read '" + tok + "' as a number");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// name=a..b[:step] or name=v1,v2,...
std::pair<std::string, std::vector<double>> parse_range(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ParameterError("--param wants name=a..b or name=v1,v2,...");
  const std::string name = spec.substr(0, eq), rest = spec.substr(eq + 1);
  const auto dots = rest.find("..");
  if (dots == std::string::npos) return {name, parse_list(rest)};
  std::string hi = rest.substr(dots + 2);
  double step = 1.0;
  if (const auto colon = hi.find(':'); colon != std::string::npos) {
    step = parse_list(hi.substr(colon + 1)).at(0);
    hi = hi.substr(0, colon);
  }
  const double a = parse_list(rest.substr(0, dots)).at(0), b = parse_list(hi).at(0);
  if (!(step > 0.0)) throw ParameterError("range step must be positive");
  std::vector<double> v;
  for (long i = 0;; ++i) {
    const double x = a + i * step;
    if (x > b + 1e-9 * step) break;
    v.push_back(x);
  }
  return {name, v};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") std::cout << text;
  else write_text_file(path, text);
}

json audit_json(const StructuralAudit& a, bool claimed) {
  json j = {{"depth", a.depth}, {"width", a.width}, {"nonzero_weights", a.nonzero_weights}};
  if (claimed) {
    j["claim"] = {a.claimed_depth, a.claimed_width, a.claimed_weights};
    j["within_budget"] = a.within_budget;
    j["budget_miss"] = !a.within_budget;
  } else {
    j["claim"] = nullptr;
  }
  return j;
}

std::string params_text(const Params& p) {
  std::string s;
  for (const auto& [k, v] : p.values()) s += (s.empty() ? "" : " ") + k + "=" + v;
  return s;
}

GridSpec make_grid(std::size_t dim, long points, const std::string& kind, std::uint64_t seed) {
  GridSpec g = default_grid(dim, seed);
  if (!kind.empty()) g.kind = grid_kind_from_string(kind);
  if (points > 0) g.points = points;
  g.seed = g.kind == GridKind::MonteCarlo ? std::optional<std::uint64_t>(seed) : std::nullopt;
  return g;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dluforge: training-free DLU network constructions and their checks"};
  app.require_subcommand(1);
  int code = kOk;

  // build
  std::string family, out_path, report_path, norm_text = "sup", grid_kind;
  std::vector<std::string> kv;
  long grid_points = 0;
  bool check = false, list = false;
  auto* build = app.add_subcommand("build", "build a network family and audit it against its claimed budget");
  build->add_option("family", family, "family name (see --list)");
  build->add_option("params", kv, "key=value parameters");
  build->add_flag("--list", list, "list families and their parameters");
  build->add_option("-o,--output", out_path, "network JSON path");
  build->add_option("--report", report_path, "build report path (default stdout)");
  build->add_flag("--check", check, "also measure against the family's target");
  build->add_option("--norm", norm_text, "norm for --check");
  build->add_option("--grid", grid_points, "grid points for --check");
  build->add_option("--grid-kind", grid_kind, "uniform|mc|chebyshev");

  // eval
  std::string net_path, at;
  auto* eval = app.add_subcommand("eval", "evaluate a network at one point");
  eval->add_option("net", net_path)->required();
  eval->add_option("--at", at, "x1,x2,...")->required();

  // audit
  std::string claim_text;
  auto* aud = app.add_subcommand("audit", "count depth, width and weights against a claim");
  aud->add_option("net", net_path)->required();
  aud->add_option("--claim", claim_text, "d,w,n");

  // measure
  std::string target_name;
  std::optional<std::uint64_t> seed_opt;
  std::optional<double> bound_opt;
  auto* meas = app.add_subcommand("measure", "error of a network against a target");
  meas->add_option("net", net_path)->required();
  meas->add_option("--target", target_name, "registry target name");
  meas->add_option("--family", family, "use this family's own target instead");
  meas->add_option("--set", kv, "family parameters key=value");
  meas->add_option("--norm", norm_text, "sup|l1|l2|lp:P, optionally weighted-");
  meas->add_option("--grid", grid_points, "grid points");
  meas->add_option("--grid-kind", grid_kind, "uniform|mc|chebyshev");
  meas->add_option("--seed", seed_opt, "Monte-Carlo seed (default DLU_FORGE_SEED or 0x5EED)");
  meas->add_option("--bound", bound_opt, "assert measured <= max(1e-10, bound)");
  meas->add_option("-o,--output", out_path, "report path (default stdout)");

  // sweep
  std::string param_spec, rate_text = "ratio", csv_path, json_path;
  auto* sw = app.add_subcommand("sweep", "measure a family over a parameter range");
  sw->add_option("family", family)->required();
  sw->add_option("--param", param_spec, "name=a..b[:step] or name=v1,v2,...")->required();
  sw->add_option("--target", target_name, "registry target (default: the family's own)");
  sw->add_option("--set", kv, "fixed parameters key=value");
  sw->add_option("--norm", norm_text, "sup|l1|l2|lp:P, optionally weighted-");
  sw->add_option("--grid", grid_points, "grid points");
  sw->add_option("--grid-kind", grid_kind, "uniform|mc|chebyshev");
  sw->add_option("--seed", seed_opt, "Monte-Carlo seed");
  sw->add_option("--rate", rate_text, "ratio|slope");
  sw->add_option("--csv", csv_path, "CSV output path");
  sw->add_option("--json", json_path, "JSON output path");

  // compare
  std::string which, ms_text = "4,6,8,10";
  int degree = 8;
  auto* cmp = app.add_subcommand("compare", "same polynomial compiled with DLU and ReLU");
  cmp->add_option("which", which)->required()->check(CLI::IsMember({"dlu-vs-relu"}));
  cmp->add_option("--target", target_name, "1-D registry target on [0, 1]")->required();
  cmp->add_option("--degree", degree, "interpolation degree");
  cmp->add_option("--m", ms_text, "ReLU levels, comma separated");
  cmp->add_option("-o,--output", out_path);

  // report
  std::string input_path, format = "csv";
  auto* rep = app.add_subcommand("report", "convert a sweep JSON to CSV or JSON");
  rep->add_option("--input", input_path, "sweep JSON")->required();
  rep->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  rep->add_option("-o,--output", out_path);

  // relu helpers
  int m = 3, k = 2, L = 1, W = 1;
  auto* rl = app.add_subcommand("relu", "ReLU baseline tools");
  rl->require_subcommand(1);
  auto* rsq = rl->add_subcommand("square", "Yarotsky square error and shape");
  rsq->add_option("--m", m);
  auto* rbp = rl->add_subcommand("breakpoints", "breakpoints of a 1-input ReLU network on [0, 1]");
  rbp->add_option("net", net_path)->required();
  auto* rlb = rl->add_subcommand("lowerbound", "lower bound on sup|x^k - Phi| for depth L, width W");
  rlb->add_option("--k", k);
  rlb->add_option("--L", L);
  rlb->add_option("--W", W);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int r = app.exit(e);
    return r == 0 ? kOk : kUsage;
  }

  try {
    const std::uint64_t seed = seed_opt ? *seed_opt : env_seed();

    if (*build) {
      if (list) {
        for (const auto& f : families()) {
          std::cout << f.name << ": " << f.description << "\n";
          for (const auto& p : f.params) std::cout << "    " << p.name << "=" << p.default_value << "  " << p.help << "\n";
        }
        return kOk;
      }
      if (family.empty()) throw ParameterError("build needs a family (try --list)");
      const Params params = parse_params(kv);
      std::optional<FamilyInstance> built;
      try {
        built = family_by_name(family).build(params);
      } catch (const ConstructionError& e) {
        std::cerr << "construction failed: " << e.what() << "\n";
        return kFailure;
      }
      const FamilyInstance& fi = *built;
      if (!out_path.empty()) write_text_file(out_path, serialize(fi.net));
      json j;
      j["family"] = family;
      j["params"] = params_text(params);
      j["network_id"] = fi.id;
      StructuralAudit a = fi.claim ? audit(fi.net, *fi.claim) : structure_of(fi.net);
      j["audit"] = audit_json(a, fi.claim.has_value());
      j["notes"] = fi.notes;
      if (fi.claim && !a.within_budget) code = kBudget;
      if (check && fi.target) {
        ErrorReport r = measure_error(fi.net, *fi.target, norm_from_string(norm_text),
                                      make_grid(fi.target->dim, grid_points, grid_kind, seed), fi.id, fi.claim);
        r.theoretical_bound = fi.bound;
        j["measurement"] = to_json(r);
        j["bound_kind"] = fi.bound_kind == BoundKind::Asserted ? "asserted"
                          : fi.bound_kind == BoundKind::Reported ? "reported"
                                                                 : "none";
        const bool violated = bound_violated(fi, r.measured_error);
        j["bound_violated"] = violated;
        if (violated) code = kBound;
      }
      emit(dump_report(j), report_path);
      return code;
    }

    if (*eval) {
      Network net = deserialize(read_text_file(net_path));
      auto x = parse_list(at);
      auto y = net.forward(x);
      for (std::size_t i = 0; i < y.size(); ++i) std::cout << (i ? "," : "") << fmt(y[i]);
      std::cout << "\n";
      return kOk;
    }

    if (*aud) {
      Network net = deserialize(read_text_file(net_path));
      if (claim_text.empty()) {
        std::cout << dump_report(audit_json(structure_of(net), false));
        return kOk;
      }
      auto c = parse_list(claim_text);
      if (c.size() != 3) throw ParameterError("--claim wants d,w,n");
      StructuralAudit a = audit(net, Budget{static_cast<long>(c[0]), static_cast<long>(c[1]), static_cast<long>(c[2])});
      std::cout << dump_report(audit_json(a, true));
      return a.within_budget ? kOk : kBudget;
    }

    if (*meas) {
      Network net = deserialize(read_text_file(net_path));
      TargetFunction target;
      if (!family.empty()) {
        auto fi = family_by_name(family).build(parse_params(kv));
        if (!fi.target) throw ParameterError("family has no target");
        target = *fi.target;
      } else if (!target_name.empty()) {
        target = target_by_name(target_name);
      } else {
        throw ParameterError("measure needs --target or --family");
      }
      ErrorReport r =
          measure_error(net, target, norm_from_string(norm_text), make_grid(target.dim, grid_points, grid_kind, seed),
                        net_path);
      r.theoretical_bound = bound_opt;
      emit(dump_report(to_json(r)), out_path);
      if (bound_opt && r.measured_error > std::max(kExactSlack, *bound_opt)) return kBound;
      return kOk;
    }

    if (*sw) {
      const Family& fam = family_by_name(family);
      const auto [name, values] = parse_range(param_spec);
      Params base = parse_params(kv);
      // the family's own target at the first value, unless one is named
      Params first = base;
      first.set(name, fmt(values.empty() ? 0.0 : values.front()));
      TargetFunction target = target_name.empty() ? *fam.build(first).target : target_by_name(target_name);
      bool violated = false;
      std::vector<BoundKind> kinds;
      auto builder = [&](double v) {
        Params p = base;
        p.set(name, fmt(v));
        FamilyInstance fi = fam.build(p);
        kinds.push_back(fi.bound_kind);
        return BuiltNetwork{fi.net, fi.id, fi.claim, fi.bound};
      };
      SweepResult s = sweep(name, values, builder, target, norm_from_string(norm_text),
                            make_grid(target.dim, grid_points, grid_kind, seed), rate_fit_from_string(rate_text));
      bool miss = false;
      for (std::size_t i = 0; i < s.reports.size(); ++i) {
        const auto& r = s.reports[i];
        if (r.budget_claimed && !r.audit.within_budget) miss = true;
        // bounds only mean something against the family's own target
        if (target_name.empty() && bound_violated(kinds[i], r.theoretical_bound, r.measured_error)) violated = true;
      }
      if (!csv_path.empty()) write_text_file(csv_path, to_csv(s));
      if (!json_path.empty()) write_text_file(json_path, dump_report(to_json(s)));
      if (csv_path.empty() && json_path.empty()) std::cout << to_csv(s);
      std::cerr << "rate (" << to_string(s.method) << "): " << (s.rate ? fmt(*s.rate) : std::string("n/a")) << "\n";
      if (s.partial) {
        std::cerr << "partial sweep: " << s.failure << "\n";
        return kFailure;
      }
      return violated ? kBound : miss ? kBudget : kOk;
    }

    if (*cmp) {
      std::vector<int> ms;
      for (double v : parse_list(ms_text)) ms.push_back(static_cast<int>(v));
      emit(compare_to_csv(compare_dlu_relu(target_by_name(target_name), degree, ms)), out_path);
      return kOk;
    }

    if (*rep) {
      SweepResult s = sweep_from_json(json::parse(read_text_file(input_path)));
      emit(format == "csv" ? to_csv(s) : dump_report(to_json(s)), out_path);
      return kOk;
    }

    if (*rsq) {
      Network net = yarotsky_square(m);
      ErrorReport r = measure_error(net, target_by_name("square"), NormSpec::sup(),
                                    GridSpec{GridKind::Uniform, (1L << 14) + 1, std::nullopt}, "yarotsky_square");
      json j = {{"m", m},
                {"measured_error", r.measured_error},
                {"bound", yarotsky_square_bound(m)},
                {"audit", audit_json(r.audit, false)}};
      std::cout << dump_report(j);
      return kOk;
    }

    if (*rbp) {
      Network net = deserialize(read_text_file(net_path));
      PiecewiseLinear1D pl = extract_breakpoints(net);
      json j = {{"breakpoints", pl.breakpoints()},
                {"count", pl.breakpoint_count()},
                {"bound", breakpoint_bound(net)},
                {"recursion_bound", breakpoint_recursion_bound(net)}};
      std::cout << dump_report(j);
      return kOk;
    }

    if (*rlb) {
      LowerBound b = lower_bound_power(k, L, W);
      json j = {{"k", k},          {"L", L},
                {"W", W},          {"m", b.m},
                {"m_formula", b.m_formula},
                {"overflow", b.overflow},
                {"stated", b.stated},
                {"certified", b.certified}};
      std::cout << dump_report(j);
      return kOk;
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return code;
}
