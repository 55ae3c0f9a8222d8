#include "scenario.hpp"

#include "equinox/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace equinox::cli {

namespace {

using equilibrium::ApproximateEquilibrium;
using geometry::ConvexBody;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(Errc::schema, where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || item.key() == k;
    if (!known) fail(where, "unknown key \"" + item.key() + "\"");
  }
}

const json& need(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) fail(where, "missing key \"" + std::string(key) + "\"");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "expected a number");
  return v.get<double>();
}

Vector vector_of(const json& v, const std::string& where, int dim) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  if (dim >= 0 && static_cast<int>(v.size()) != dim)
    fail(where, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = number(v[i], where + "[" + std::to_string(i) + "]");
  return out;
}

std::vector<Vector> vectors_of(const json& v, const std::string& where, int dim) {
  if (!v.is_array()) fail(where, "expected an array of vectors");
  std::vector<Vector> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(vector_of(v[i], where + "[" + std::to_string(i) + "]", dim));
  return out;
}

Matrix matrix_of(const json& v, const std::string& where, int dim) {
  const std::vector<Vector> rows = vectors_of(v, where, dim);
  if (static_cast<int>(rows.size()) != dim) fail(where, "expected " + std::to_string(dim) + " rows");
  Matrix m(dim, dim);
  for (int i = 0; i < dim; ++i) m.row(i) = rows[static_cast<std::size_t>(i)].transpose();
  return m;
}

ConvexBody body_of(const json& v, const std::string& where, int dim) {
  only_keys(v, where, {"box", "ball", "vpolytope"});
  if (v.size() != 1) fail(where, "expected exactly one of box, ball, vpolytope");
  if (v.contains("box")) {
    const json& b = v.at("box");
    only_keys(b, where + ".box", {"lower", "upper"});
    return ConvexBody::box(vector_of(need(b, where + ".box", "lower"), where + ".box.lower", dim),
                           vector_of(need(b, where + ".box", "upper"), where + ".box.upper", dim));
  }
  if (v.contains("ball")) {
    const json& b = v.at("ball");
    only_keys(b, where + ".ball", {"center", "radius"});
    return ConvexBody::ball(vector_of(need(b, where + ".ball", "center"), where + ".ball.center", dim),
                            number(need(b, where + ".ball", "radius"), where + ".ball.radius"));
  }
  const json& b = v.at("vpolytope");
  only_keys(b, where + ".vpolytope", {"vertices"});
  return ConvexBody::vpolytope(vectors_of(need(b, where + ".vpolytope", "vertices"), where + ".vpolytope.vertices", dim));
}

json vec_json(const Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

json vecs_json(const std::vector<Vector>& vs) {
  json out = json::array();
  for (const auto& v : vs) out.push_back(vec_json(v));
  return out;
}

// JSON has no infinities or NaNs; they are written as null.
json real_json(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double real_of(const json& v, const std::string& where) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return number(v, where);
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  only_keys(doc, "scenario",
            {"schema", "dimension", "consumers", "production_generators", "interior_points", "solver", "description"});
  const json& schema = need(doc, "scenario", "schema");
  if (!schema.is_number_integer() || schema.get<int>() != kSchemaVersion)
    fail("scenario.schema", "unsupported schema version " + schema.dump());
  const json& d = need(doc, "scenario", "dimension");
  if (!d.is_number_integer() || d.get<int>() < 1) fail("scenario.dimension", "expected a positive integer");
  const int dim = d.get<int>();

  try {
    const json& cs = need(doc, "scenario", "consumers");
    if (!cs.is_array() || cs.empty()) fail("scenario.consumers", "expected a nonempty array");
    std::vector<preferences::Preference> consumers;
    for (std::size_t i = 0; i < cs.size(); ++i) {
      const std::string where = "consumers[" + std::to_string(i) + "]";
      only_keys(cs[i], where, {"set", "bliss_point", "Q"});
      const ConvexBody body = body_of(need(cs[i], where, "set"), where + ".set", dim);
      const Vector bliss = vector_of(need(cs[i], where, "bliss_point"), where + ".bliss_point", dim);
      std::optional<Matrix> q;
      if (cs[i].contains("Q")) q = matrix_of(cs[i].at("Q"), where + ".Q", dim);
      consumers.emplace_back(body, bliss, q);
    }
    const std::vector<Vector> gens =
        vectors_of(need(doc, "scenario", "production_generators"), "production_generators", dim);
    std::optional<std::vector<Vector>> interior;
    if (doc.contains("interior_points")) interior = vectors_of(doc.at("interior_points"), "interior_points", dim);

    SolverSettings solver;
    if (doc.contains("solver")) {
      const json& s = doc.at("solver");
      only_keys(s, "solver", {"epsilon", "seed", "max_refine", "tolerances"});
      if (s.contains("epsilon")) solver.epsilon = number(s.at("epsilon"), "solver.epsilon");
      if (s.contains("seed")) {
        if (!s.at("seed").is_number_unsigned()) fail("solver.seed", "expected a nonnegative integer");
        solver.seed = s.at("seed").get<std::uint64_t>();
      }
      if (s.contains("max_refine")) {
        if (!s.at("max_refine").is_number_integer()) fail("solver.max_refine", "expected an integer");
        solver.max_refine = s.at("max_refine").get<int>();
      }
      if (s.contains("tolerances")) {
        only_keys(s.at("tolerances"), "solver.tolerances", {"verify"});
        if (s.at("tolerances").contains("verify"))
          solver.verify_tol = number(s.at("tolerances").at("verify"), "solver.tolerances.verify");
      }
    }
    return {equilibrium::Economy(std::move(consumers), geometry::FiniteCone(gens), std::move(interior)), solver};
  } catch (const Error& e) {
    if (e.code() == Errc::schema) throw;
    throw Error(Errc::schema, std::string("scenario does not describe a valid economy: ") + e.what());
  }
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::schema, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::schema, path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out || !(out << text)) throw Error(Errc::schema, "cannot write " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_json(path)); }

json to_json(const ApproximateEquilibrium& eq) {
  json residuals = json::array();
  for (double r : eq.metrics.budget_residuals) residuals.push_back(real_json(r));
  return {{"price", vec_json(eq.price)},
          {"allocations", vecs_json(eq.allocations)},
          {"eta", vec_json(eq.eta)},
          {"zeta", vec_json(eq.zeta)},
          {"xi_bar", vec_json(eq.xi_bar)},
          {"t", real_json(eq.t)},
          {"epsilon", real_json(eq.epsilon)},
          {"delta", real_json(eq.delta)},
          {"m_const", real_json(eq.m_const)},
          {"demand_tol", real_json(eq.demand_tol)},
          {"metrics",
           {{"p_dot_eta", real_json(eq.metrics.p_dot_eta)},
            {"dist_eta_to_y", real_json(eq.metrics.dist_eta_to_y)},
            {"budget_residuals", residuals}}}};
}

json to_json(const equilibrium::ValidationReport& rep) {
  json witnesses = json::array();
  for (const auto& w : rep.witnesses) {
    if (w)
      witnesses.push_back({{"point", vec_json(w->point)}, {"radius", real_json(w->radius)}});
    else
      witnesses.push_back(nullptr);
  }
  return {{"ok", rep.ok()},
          {"pointed", rep.pointed},
          {"pointedness_certificate", vecs_json(rep.pointedness_certificate)},
          {"interior_ok", rep.interior_ok},
          {"interior_witnesses", witnesses},
          {"nonsatiation", {{"pass", rep.nonsatiation_pass}, {"fail", rep.nonsatiation_fail}, {"vacuous", rep.nonsatiation_vacuous}}},
          {"notes", rep.notes}};
}

json to_json(const equilibrium::CheckReport& rep) {
  json clauses = json::array();
  for (const auto& c : rep.clauses) clauses.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"ok", rep.ok()}, {"clauses", clauses}};
}

ApproximateEquilibrium certificate_from_json(const json& doc) {
  const json& c = doc.is_object() && doc.contains("certificate") ? doc.at("certificate") : doc;
  const std::string where = "certificate";
  only_keys(c, where,
            {"price", "allocations", "eta", "zeta", "xi_bar", "t", "epsilon", "delta", "m_const", "demand_tol", "metrics"});
  ApproximateEquilibrium eq;
  eq.price = vector_of(need(c, where, "price"), "certificate.price", -1);
  const int dim = static_cast<int>(eq.price.size());
  eq.allocations = vectors_of(need(c, where, "allocations"), "certificate.allocations", dim);
  eq.eta = vector_of(need(c, where, "eta"), "certificate.eta", dim);
  eq.xi_bar = vector_of(need(c, where, "xi_bar"), "certificate.xi_bar", dim);
  eq.epsilon = number(need(c, where, "epsilon"), "certificate.epsilon");
  if (c.contains("zeta")) eq.zeta = vector_of(c.at("zeta"), "certificate.zeta", dim);
  if (c.contains("t")) eq.t = real_of(c.at("t"), "certificate.t");
  if (c.contains("delta")) eq.delta = real_of(c.at("delta"), "certificate.delta");
  if (c.contains("m_const")) eq.m_const = real_of(c.at("m_const"), "certificate.m_const");
  if (c.contains("demand_tol")) eq.demand_tol = real_of(c.at("demand_tol"), "certificate.demand_tol");
  if (c.contains("metrics")) {
    const json& m = c.at("metrics");
    only_keys(m, "certificate.metrics", {"p_dot_eta", "dist_eta_to_y", "budget_residuals"});
    if (m.contains("p_dot_eta")) eq.metrics.p_dot_eta = real_of(m.at("p_dot_eta"), "certificate.metrics.p_dot_eta");
    if (m.contains("dist_eta_to_y"))
      eq.metrics.dist_eta_to_y = real_of(m.at("dist_eta_to_y"), "certificate.metrics.dist_eta_to_y");
    if (m.contains("budget_residuals")) {
      const json& r = m.at("budget_residuals");
      if (!r.is_array()) fail("certificate.metrics.budget_residuals", "expected an array");
      for (const auto& x : r) eq.metrics.budget_residuals.push_back(real_of(x, "certificate.metrics.budget_residuals"));
    }
  }
  return eq;
}

std::string sweep_csv(const equilibrium::RefineSequence& seq, int dimension) {
  auto num = [](double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  };
  std::ostringstream out;
  out << "n,epsilon";
  for (int i = 1; i <= dimension; ++i) out << ",p_" << i;
  out << ",p_dot_eta,dist_eta_Y,price_step\n";
  for (std::size_t n = 0; n < seq.stages.size(); ++n) {
    const auto& s = seq.stages[n];
    out << n << ',' << num(s.epsilon);
    for (double p : s.price) out << ',' << num(p);
    out << ',' << num(s.metrics.p_dot_eta) << ',' << num(s.metrics.dist_eta_to_y) << ',';
    if (n > 0) out << num(seq.price_steps[n - 1]);
    out << '\n';
  }
  return out.str();
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace equinox::cli
