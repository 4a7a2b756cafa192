#include "fuzzband/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace fuzzband {

using nlohmann::json;

namespace {

[[noreturn]] void bad_input(const std::string& what) {
  throw std::invalid_argument(what);
}

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!j.is_object()) bad_input(where + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      bad_input("unknown field '" + it.key() + "' in " + where);
  }
}

double get_number(const json& j, const std::string& key,
                  const std::string& where) {
  if (!j.contains(key)) bad_input(where + " is missing field '" + key + "'");
  if (!j.at(key).is_number())
    bad_input("field '" + key + "' in " + where + " must be a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) bad_input(where + " is missing field '" + key + "'");
  if (!j.at(key).is_number_integer())
    bad_input("field '" + key + "' in " + where + " must be an integer");
  return j.at(key).get<int>();
}

std::vector<double> get_array(const json& j, const std::string& where) {
  if (!j.is_array()) bad_input(where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) bad_input(where + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

FuzzyValueSpec parse_fuzzy_value(const json& j, const std::string& where) {
  if (j.is_number()) return FuzzyValueSpec::crisp_value(j.get<double>());
  if (!j.is_object()) bad_input(where + " must be a number or an object");
  if (j.contains("triangular")) {
    require_keys(j, {"triangular"}, where);
    std::vector<double> t = get_array(j.at("triangular"), where);
    if (t.size() != 3) bad_input(where + ": triangular needs [l, m, r]");
    return FuzzyValueSpec::triangular_value(t[0], t[1], t[2]);
  }
  if (j.contains("lower") || j.contains("upper")) {
    require_keys(j, {"lower", "upper"}, where);
    if (!j.contains("lower") || !j.contains("upper"))
      bad_input(where + ": band needs both 'lower' and 'upper'");
    return FuzzyValueSpec::band_value(
        get_array(j.at("lower"), where + ".lower"),
        get_array(j.at("upper"), where + ".upper"));
  }
  bad_input(where + " must be a number, {triangular: [l,m,r]}, or a band");
}

json fuzzy_value_to_json(const FuzzyValueSpec& v) {
  switch (v.kind) {
    case FuzzyValueSpec::Kind::crisp:
      return v.c;
    case FuzzyValueSpec::Kind::triangular:
      return json{{"triangular", {v.l, v.m, v.r}}};
    case FuzzyValueSpec::Kind::band:
      return json{{"lower", v.lower}, {"upper", v.upper}};
  }
  return json();
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad_input("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    bad_input("malformed JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace

ProblemSpec parse_problem(const json& j) {
  require_keys(j,
               {"a", "q", "u0", "rhs", "R", "K", "n", "gamma", "tol",
                "max_iter"},
               "problem");
  ProblemSpec spec;
  spec.a = get_number(j, "a", "problem");
  spec.q = get_number(j, "q", "problem");
  spec.ball_radius = get_number(j, "R", "problem");
  if (j.contains("K")) spec.alpha_cells = get_int(j, "K", "problem");
  if (j.contains("n")) spec.time_cells = get_int(j, "n", "problem");
  if (j.contains("tol")) spec.tol = get_number(j, "tol", "problem");
  if (j.contains("max_iter"))
    spec.max_iter = get_int(j, "max_iter", "problem");

  if (!j.contains("rhs")) bad_input("problem is missing field 'rhs'");
  const json& rj = j.at("rhs");
  if (!rj.is_object() || !rj.contains("kind"))
    bad_input("rhs must be an object with a 'kind'");
  const std::string kind = rj.at("kind").get<std::string>();
  if (kind == "linear") {
    require_keys(rj, {"kind", "lambda"}, "rhs");
    spec.rhs.kind = RhsKind::linear;
    spec.rhs.lambda = get_number(rj, "lambda", "rhs");
  } else if (kind == "affine") {
    require_keys(rj, {"kind", "c", "g"}, "rhs");
    spec.rhs.kind = RhsKind::affine;
    if (!rj.contains("c") || !rj.contains("g"))
      bad_input("affine rhs needs 'c' and 'g'");
    if (rj.at("c").is_array()) {
      spec.rhs.c_is_table = true;
      spec.rhs.c_table = get_array(rj.at("c"), "rhs.c");
    } else if (rj.at("c").is_number()) {
      spec.rhs.c_const = rj.at("c").get<double>();
    } else {
      bad_input("rhs.c must be a number or an array");
    }
    if (rj.at("g").is_object() && rj.at("g").contains("table")) {
      require_keys(rj.at("g"), {"table"}, "rhs.g");
      spec.rhs.g_is_table = true;
      for (const auto& gv : rj.at("g").at("table"))
        spec.rhs.g_table.push_back(parse_fuzzy_value(gv, "rhs.g.table entry"));
    } else {
      spec.rhs.g_const = parse_fuzzy_value(rj.at("g"), "rhs.g");
    }
  } else if (kind == "singular_linear") {
    require_keys(rj, {"kind", "lambda", "r"}, "rhs");
    spec.rhs.kind = RhsKind::singular_linear;
    spec.rhs.lambda = get_number(rj, "lambda", "rhs");
    spec.rhs.r = get_number(rj, "r", "rhs");
  } else {
    bad_input("unknown rhs kind '" + kind + "'");
  }

  // Default grading clusters nodes near the data singularity.
  if (j.contains("gamma")) {
    spec.grading = get_number(j, "gamma", "problem");
  } else if (spec.rhs.kind == RhsKind::singular_linear) {
    spec.grading = std::max(1.0, 2.0 / (1.0 - spec.rhs.r));
  }

  if (!j.contains("u0")) bad_input("problem is missing field 'u0'");
  const json& uj = j.at("u0");
  if (uj.is_object() && uj.contains("table")) {
    require_keys(uj, {"table"}, "u0");
    spec.u0.is_table = true;
    for (const auto& uv : uj.at("table"))
      spec.u0.table.push_back(parse_fuzzy_value(uv, "u0 table entry"));
  } else {
    spec.u0.constant = parse_fuzzy_value(uj, "u0");
  }

  validate_problem(spec);
  return spec;
}

ProblemSpec parse_problem_file(const std::string& path) {
  return parse_problem(load_json_file(path));
}

json problem_to_json(const ProblemSpec& spec) {
  json j;
  j["a"] = spec.a;
  j["q"] = spec.q;
  j["R"] = spec.ball_radius;
  j["K"] = spec.alpha_cells;
  j["n"] = spec.time_cells;
  j["gamma"] = spec.grading;
  j["tol"] = spec.tol;
  j["max_iter"] = spec.max_iter;
  if (spec.u0.is_table) {
    json table = json::array();
    for (const auto& v : spec.u0.table) table.push_back(fuzzy_value_to_json(v));
    j["u0"] = json{{"table", table}};
  } else {
    j["u0"] = fuzzy_value_to_json(spec.u0.constant);
  }
  json rj;
  switch (spec.rhs.kind) {
    case RhsKind::linear:
      rj["kind"] = "linear";
      rj["lambda"] = spec.rhs.lambda;
      break;
    case RhsKind::affine: {
      rj["kind"] = "affine";
      if (spec.rhs.c_is_table)
        rj["c"] = spec.rhs.c_table;
      else
        rj["c"] = spec.rhs.c_const;
      if (spec.rhs.g_is_table) {
        json table = json::array();
        for (const auto& v : spec.rhs.g_table)
          table.push_back(fuzzy_value_to_json(v));
        rj["g"] = json{{"table", table}};
      } else {
        rj["g"] = fuzzy_value_to_json(spec.rhs.g_const);
      }
      break;
    }
    case RhsKind::singular_linear:
      rj["kind"] = "singular_linear";
      rj["lambda"] = spec.rhs.lambda;
      rj["r"] = spec.rhs.r;
      break;
  }
  j["rhs"] = rj;
  return j;
}

FamilySample parse_family(const json& j) {
  require_keys(j, {"label", "K", "members", "triangular_sweep", "power_upper"},
               "family");
  std::string label = j.contains("label") ? j.at("label").get<std::string>()
                                          : std::string("family");
  const int k = j.contains("K") ? get_int(j, "K", "family") : 32;
  if (k < 2) bad_input("family K must be >= 2");
  const AlphaGrid grid(k);

  std::vector<FuzzyNumber> members;
  if (j.contains("members")) {
    if (!j.at("members").is_array()) bad_input("family members must be an array");
    for (const auto& mv : j.at("members"))
      members.push_back(parse_fuzzy_value(mv, "family member").build(grid));
  } else if (j.contains("triangular_sweep")) {
    const json& sj = j.at("triangular_sweep");
    require_keys(sj, {"count", "from", "to", "l", "m", "r"},
                 "triangular_sweep");
    const int count = get_int(sj, "count", "triangular_sweep");
    const double from = get_number(sj, "from", "triangular_sweep");
    const double to = get_number(sj, "to", "triangular_sweep");
    if (count < 1) bad_input("triangular_sweep count must be >= 1");
    auto coeffs = [&](const char* key) {
      std::vector<double> c = get_array(sj.at(key), "triangular_sweep");
      if (c.size() != 2)
        bad_input("triangular_sweep corners are [offset, slope] pairs");
      return c;
    };
    const auto cl = coeffs("l"), cm = coeffs("m"), cr = coeffs("r");
    for (int i = 0; i < count; ++i) {
      const double s =
          count == 1 ? from : from + (to - from) * i / (count - 1);
      members.push_back(FuzzyNumber::triangular(grid, cl[0] + cl[1] * s,
                                                cm[0] + cm[1] * s,
                                                cr[0] + cr[1] * s));
    }
  } else if (j.contains("power_upper")) {
    const json& pj = j.at("power_upper");
    require_keys(pj, {"n_max"}, "power_upper");
    const int n_max = get_int(pj, "n_max", "power_upper");
    if (n_max < 1) bad_input("power_upper n_max must be >= 1");
    for (int n = 1; n <= n_max; ++n) {
      std::vector<double> lower(grid.node_count(), 0.0);
      std::vector<double> upper(grid.node_count());
      for (int i = 0; i <= grid.cells; ++i)
        upper[i] = std::pow(1.0 - grid.node(i), n);
      members.push_back(FuzzyNumber(grid, std::move(lower), std::move(upper)));
    }
  } else {
    bad_input("family needs 'members', 'triangular_sweep', or 'power_upper'");
  }
  return FamilySample(std::move(members), std::move(label));
}

FamilySample parse_family_file(const std::string& path) {
  return parse_family(load_json_file(path));
}

namespace {

json check_to_json(const CheckResult& c) {
  return json{{"pass", c.pass},
              {"measured", c.measured},
              {"bound", c.bound},
              {"note", c.note}};
}

}  // namespace

json report_to_json(const SolveReport& report, const ProblemSpec& spec) {
  json j;
  j["status"] = report.status == SolveStatus::converged ? "converged"
                                                        : "non_converged";
  j["initial_bound"] = report.initial_bound;
  j["rhs_bound"] = report.rhs_bound;
  j["rhs_bound_method"] = report.rhs_bound_method;
  j["horizon"] = report.horizon;
  j["iterations"] = report.iterations;
  j["windows"] = report.windows;
  j["final_residual"] = report.final_residual;
  j["residual_trace"] = report.residual_trace;
  json checks;
  for (const auto& [name, check] : report.checks)
    checks[name] = check_to_json(check);
  j["checks"] = checks;
  j["warnings"] = report.warnings;
  j["problem"] = problem_to_json(spec);
  if (report.solution) {
    j["time_nodes"] = report.solution->grid.nodes;
    const FuzzyNumber& last = report.solution->values.back();
    j["value_at_horizon"] =
        json{{"lower", last.lower()}, {"upper", last.upper()}};
  }
  return j;
}

json compactness_to_json(const CompactnessReport& report,
                         const std::string& label, size_t member_count,
                         int alpha_cells, double refinement_delta) {
  json j;
  j["label"] = label;
  j["members"] = member_count;
  j["K"] = alpha_cells;
  j["bound"] = report.bound;
  j["bound_cap"] = report.bound_cap;
  j["bounded"] = report.bounded_verdict;
  j["epsilon"] = report.epsilon;
  j["delta"] = report.delta;
  j["modulus_at_delta"] = report.modulus_at_delta;
  json table = json::array();
  for (const auto& [d, omega] : report.modulus) table.push_back({d, omega});
  j["modulus_table"] = table;
  j["equicontinuous"] = report.equicontinuous_verdict;
  j["verdict"] = report.verdict;
  j["evidence"] = report.evidence;
  j["modulus_refinement_delta"] = refinement_delta;
  return j;
}

void write_band_csv(const std::string& path, const FuzzyTrajectory& bands) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "t,alpha,lower,upper\n";
  char buf[160];
  const AlphaGrid& alpha = bands.values.front().grid();
  for (size_t m = 0; m < bands.values.size(); ++m) {
    const FuzzyNumber& v = bands.values[m];
    for (int i = 0; i <= alpha.cells; ++i) {
      std::snprintf(buf, sizeof buf, "%.15g,%.15g,%.15g,%.15g\n",
                    bands.grid.nodes[m], alpha.node(i), v.lower()[i],
                    v.upper()[i]);
      out << buf;
    }
  }
  if (!out) throw std::runtime_error("failed writing band table: " + path);
}

void check_band_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot reopen band table: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "t,alpha,lower,upper")
    throw std::runtime_error("band table header missing or wrong");
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    double t, a, lo, hi;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &t, &a, &lo, &hi) != 4)
      throw std::runtime_error("band table row " + std::to_string(row) +
                               " is not t,alpha,lower,upper");
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi + 1e-9)
      throw std::runtime_error("band table row " + std::to_string(row) +
                               " violates lower <= upper");
    if (!(a >= 0.0 && a <= 1.0))
      throw std::runtime_error("band table row " + std::to_string(row) +
                               " has alpha outside [0, 1]");
  }
  if (row == 1) throw std::runtime_error("band table has no data rows");
}

}  // namespace fuzzband
