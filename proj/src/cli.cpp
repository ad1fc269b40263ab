#include "bisurf/cli.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace bisurf {

using nlohmann::json;

JobSpec parse_job(const json& j) {
  if (!j.is_object()) throw InputError("job must be a JSON object");
  JobSpec job;
  try {
    job.m = j.at("m").get<int>();
    job.n = j.at("n").get<int>();
    const json& a = j.at("a");
    if (!a.is_array() || a.size() != 4)
      throw InputError("\"a\" must be an array of exactly four polynomial strings");
    for (std::size_t i = 0; i < 4; ++i) job.a[i] = a[i].get<std::string>();
    if (j.contains("seed")) job.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("assert_one_to_one")) job.assert_one_to_one = j.at("assert_one_to_one").get<bool>();
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed job: ") + e.what());
  }
  if (job.m < 1 || job.n < 1) throw InputError("m and n must be at least 1");
  return job;
}

JobSpec read_job(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_job(j);
}

Parametrization to_parametrization(const JobSpec& job) {
  std::array<BihomPoly, 4> a;
  for (std::size_t i = 0; i < 4; ++i) {
    try {
      a[i] = parse(job.a[i], BiDegree{job.m, job.n});
    } catch (const ParseError& e) {
      throw InputError("a" + std::to_string(i) + ": " + e.what());
    }
  }
  try {
    return Parametrization(job.m, job.n, std::move(a));
  } catch (const BidegreeError& e) {
    throw InputError(e.what());
  }
}

namespace {

json degree_json(BiDegree d) { return json::array({d.d1, d.d2}); }

json degrees_json(const std::vector<BiDegree>& ds) {
  json out = json::array();
  for (BiDegree d : ds) out.push_back(degree_json(d));
  return out;
}

json point_json(const Point4& p) {
  json out = json::array();
  for (const Rational& q : p) out.push_back(q.get_str());
  return out;
}

json matrix_json(const MMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.size; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.size; ++c) row.push_back(render(m(r, c)));
    rows.push_back(row);
  }
  json cols = json::array();
  for (const BiMonomial& mono : m.column_monomials)
    cols.push_back(mono.str().empty() ? "1" : mono.str());
  return {{"size", m.size},
          {"linear_rows", m.linear_rows},
          {"rows", rows},
          {"row_labels", m.row_labels},
          {"column_monomials", cols}};
}

json input_json(const Parametrization& phi) {
  json a = json::array();
  for (const BihomPoly& p : phi.a()) a.push_back(render(p));
  return {{"m", phi.m()}, {"n", phi.n()}, {"a", a}};
}

}  // namespace

json to_json(const Matrix4& t) {
  json out = json::array();
  for (const auto& row : t) {
    json r = json::array();
    for (const Rational& q : row) r.push_back(q.get_str());
    out.push_back(r);
  }
  return out;
}

json to_json(const ConditionReport& rep) {
  json verdicts = json::object();
  for (std::size_t i = 0; i < 6; ++i)
    verdicts["B" + std::to_string(i + 1)] = {{"pass", rep.verdicts[i].pass},
                                             {"witness", rep.verdicts[i].witness}};
  const BasePointSummary& s = rep.summary;
  json out = {
      {"verdicts", verdicts},
      {"route", to_string(rep.route)},
      {"passed", rep.passed()},
      {"k", s.k},
      {"finite", s.finite},
      {"stabilization", to_string(s.status)},
      {"lci_proxy", s.lci_proxy},
      {"hilbert", {{"window", degrees_json(s.stabilization_window)}, {"values", s.values}}},
      {"hilbert_square",
       {{"window", degrees_json(s.square_window)}, {"values", s.square_values}}},
      {"hilbert_abc", rep.abc_values},
      {"regularity_value", rep.regularity_value},
      {"syz_abc_dim", rep.syz_abc_dim},
      {"saturation",
       {{"member", rep.saturation.member},
        {"power", rep.saturation.power},
        {"bound_reached", rep.saturation.bound_reached}}},
  };
  if (!rep.failure.empty()) out["failure"] = rep.failure;
  if (rep.change)
    out["coordinate_change"] = {{"matrix", to_json(rep.change->matrix)},
                                {"seed", rep.change->seed},
                                {"attempt", rep.change->attempt}};
  else
    out["coordinate_change"] = nullptr;
  return out;
}

json to_json(const Verification& v) {
  json out = {{"samples_requested", v.samples_requested},
              {"samples_passed", v.samples_passed},
              {"expected_degree", v.expected_degree},
              {"degree", v.degree},
              {"degree_ok", v.degree_ok},
              {"leading_x3_nonzero", v.leading_x3_nonzero},
              {"leading_x3_required", v.leading_x3_required},
              {"passed", v.passed()}};
  out["failing_point"] = v.failing_point ? point_json(*v.failing_point) : json(nullptr);
  return out;
}

json to_json(const ImplicitResult& r) {
  json out = {{"polynomial", render(r.polynomial)},
              {"degree", r.degree},
              {"terms", r.polynomial.size()},
              {"k", r.k},
              {"verification", to_json(r.verification)},
              {"matrix", matrix_json(r.matrix)},
              {"det_backend", to_string(r.determinant.used)}};
  if (r.determinant.backends_agree) out["backends_agree"] = *r.determinant.backends_agree;
  out["original_coordinates"] =
      r.original_coordinates ? json(render(*r.original_coordinates)) : json(nullptr);
  return out;
}

namespace {

PipelineConfig pipeline_config(const CommandOptions& o, const JobSpec& job) {
  PipelineConfig cfg;
  cfg.conditions.window = o.window;
  cfg.conditions.sat_bound = o.sat_bound;
  cfg.conditions.seed = o.seed.value_or(job.seed.value_or(0));
  cfg.backend = parse_backend(o.det_backend);
  cfg.samples = o.samples;
  cfg.force = o.force;
  cfg.assert_one_to_one = job.assert_one_to_one;
  return cfg;
}

}  // namespace

json build_report(const CommandOptions& o, int& exit_code) {
  auto start = std::chrono::steady_clock::now();
  JobSpec job = read_job(o.input);
  Parametrization phi = to_parametrization(job);
  if (o.window < 2) throw InputError("--window must be at least 2");
  PipelineConfig cfg;
  try {
    cfg = pipeline_config(o, job);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }

  json rep = {{"schema", kReportSchema},
              {"command", o.command},
              {"input", input_json(phi)},
              {"seed", cfg.conditions.seed},
              {"assert_one_to_one", cfg.assert_one_to_one}};
  exit_code = kExitOk;

  if (o.command == "check") {
    ConditionReport cr = check_all(phi, cfg.conditions);
    rep["conditions"] = to_json(cr);
    exit_code = cr.passed() ? kExitOk : kExitFailure;
  } else if (o.command == "implicitize" || (o.command == "verify" && o.equation.empty())) {
    ConditionReport cr = check_all(phi, cfg.conditions);
    rep["conditions"] = to_json(cr);
    if (!cr.passed()) {
      exit_code = kExitFailure;
    } else {
      try {
        ImplicitResult res = implicitize(cr, cfg);
        bool ok = res.verification.passed() && res.determinant.backends_agree != false;
        if (o.command == "verify") {
          rep["polynomial"] = render(res.polynomial);
          rep["verification"] = to_json(res.verification);
        } else if (ok || cfg.force) {
          rep["implicit"] = to_json(res);
        } else {
          rep["verification"] = to_json(res.verification);
          rep["error"] = "verification failed; rerun with --force to emit the polynomial";
        }
        exit_code = ok ? kExitOk : kExitFailure;
      } catch (const ConstructionError& e) {
        rep["error"] = e.what();
        exit_code = kExitFailure;
      }
    }
  } else if (o.command == "verify") {
    XPoly eq;
    try {
      eq = parse_x(o.equation);
    } catch (const ParseError& e) {
      throw InputError(std::string("equation: ") + e.what());
    }
    if (eq.is_zero()) throw InputError("equation is zero");
    BasePointSummary s = base_point_summary(phi, cfg.conditions.window);
    Verification v = verify(normalize(eq), phi, s.k, cfg.samples, cfg.conditions.seed, false);
    rep["polynomial"] = render(normalize(eq));
    rep["k"] = s.k;
    rep["verification"] = to_json(v);
    exit_code = v.passed() ? kExitOk : kExitFailure;
  } else if (o.command == "hilbert") {
    if (o.power != 1 && o.power != 2) throw InputError("--power must be 1 or 2");
    std::vector<BihomPoly> gens = o.power == 1 ? phi.generators() : phi.squared_generators();
    BiDegree lo = o.from.value_or(BiDegree{0, 0});
    BiDegree hi = o.to.value_or(BiDegree{2 * phi.m() + 1, 2 * phi.n() + 1});
    if (!lo.nonnegative() || !lo.leq(hi)) throw InputError("empty or negative bidegree range");
    json table = json::array();
    for (const HilbertSample& h : hilbert_table(gens, lo, hi))
      table.push_back({{"bidegree", degree_json(h.degree)}, {"dim", h.value}});
    rep["hilbert"] = {{"power", o.power},
                      {"from", degree_json(lo)},
                      {"to", degree_json(hi)},
                      {"table", table}};
  } else {
    throw InputError("unknown command '" + o.command + "'");
  }

  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);
  rep["timings"] = {{"total_ms", ms.count()}};
  return rep;
}

namespace {

void render_text(const json& rep, std::ostream& os) {
  os << "command: " << rep["command"].get<std::string>() << "\n";
  const json& in = rep["input"];
  os << "bidegree (" << in["m"] << "," << in["n"] << ")\n";
  for (std::size_t i = 0; i < 4; ++i) os << "  a" << i << " = " << in["a"][i].get<std::string>() << "\n";
  if (rep.contains("conditions")) {
    const json& c = rep["conditions"];
    for (int i = 1; i <= 6; ++i) {
      const json& v = c["verdicts"]["B" + std::to_string(i)];
      os << "B" << i << ": " << (v["pass"].get<bool>() ? "pass" : "FAIL") << "  ("
         << v["witness"].get<std::string>() << ")\n";
    }
    os << "k = " << c["k"] << ", route: " << c["route"].get<std::string>() << "\n";
    if (!c["coordinate_change"].is_null())
      os << "coordinate change (seed " << c["coordinate_change"]["seed"]
         << "): " << c["coordinate_change"]["matrix"].dump() << "\n";
    if (c.contains("failure")) os << "failure: " << c["failure"].get<std::string>() << "\n";
  }
  if (rep.contains("implicit")) {
    const json& r = rep["implicit"];
    os << "degree " << r["degree"] << ", " << r["terms"] << " terms\n";
    os << r["polynomial"].get<std::string>() << "\n";
    if (!r["original_coordinates"].is_null())
      os << "in original coordinates:\n" << r["original_coordinates"].get<std::string>() << "\n";
    if (r.contains("backends_agree"))
      os << "determinant backends agree: " << (r["backends_agree"].get<bool>() ? "yes" : "NO") << "\n";
  } else if (rep.contains("polynomial")) {
    os << rep["polynomial"].get<std::string>() << "\n";
  }
  const json* v = rep.contains("verification") ? &rep["verification"]
                  : rep.contains("implicit")   ? &rep["implicit"]["verification"]
                                               : nullptr;
  if (v) {
    os << "verification: " << ((*v)["passed"].get<bool>() ? "passed" : "FAILED") << " ("
       << (*v)["samples_passed"] << "/" << (*v)["samples_requested"] << " samples, degree "
       << (*v)["degree"] << " expected " << (*v)["expected_degree"] << ")\n";
    if (!(*v)["failing_point"].is_null())
      os << "  failing point (s,u,t,v) = " << (*v)["failing_point"].dump() << "\n";
  }
  if (rep.contains("hilbert")) {
    const json& h = rep["hilbert"];
    os << "dim (R/I" << (h["power"].get<int>() == 2 ? "^2" : "") << ")_{k,l}\n";
    int lo2 = h["from"][1], hi2 = h["to"][1];
    os << std::setw(6) << "k\\l";
    for (int l = lo2; l <= hi2; ++l) os << std::setw(6) << l;
    int current = -1;
    for (const json& row : h["table"]) {
      int k = row["bidegree"][0];
      if (k != current) {
        os << "\n" << std::setw(6) << k;
        current = k;
      }
      os << std::setw(6) << row["dim"].get<std::size_t>();
    }
    os << "\n";
  }
  if (rep.contains("error")) os << "error: " << rep["error"].get<std::string>() << "\n";
}

}  // namespace

int run_command(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  json rep;
  int code = kExitOk;
  try {
    rep = build_report(options, code);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ConditionFailure& e) {
    err << "condition failure: " << e.what() << "\n";
    return kExitFailure;
  }

  std::ostringstream text;
  if (options.json)
    text << rep.dump(2) << "\n";
  else
    render_text(rep, text);

  if (!options.output.empty()) {
    std::ofstream f(options.output);
    if (!f) {
      err << "input error: cannot write '" << options.output << "'\n";
      return kExitInput;
    }
    f << text.str();
  } else {
    out << text.str();
  }
  return code;
}

}  // namespace bisurf
