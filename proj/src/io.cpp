#include "rdelab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "rdelab/errors.hpp"

namespace rdelab {

namespace {

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ParseError(path, msg);
}

const Json& need(const Json& doc, const char* key, const std::string& path) {
  if (!doc.is_object()) fail(path.empty() ? "/" : path, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) fail(path + "/" + key, "missing");
  return *it;
}

double need_number(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::vector<std::string> load_states(const Json& doc,
                                     const std::string& base) {
  const Json& states = need(doc, "states", base);
  std::string path = base + "/states";
  if (!states.is_array() || states.empty()) {
    fail(path, "expected a nonempty array of labels");
  }
  std::vector<std::string> labels;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Json& s = states[i];
    if (!s.is_string()) fail(path + "/" + std::to_string(i), "expected a string");
    std::string label = s.get<std::string>();
    if (!seen.insert(label).second) {
      fail(path + "/" + std::to_string(i), "duplicate label \"" + label + "\"");
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

Vec load_weights(const Json& v, const std::string& path, long expect) {
  if (!v.is_array()) fail(path, "expected an array of numbers");
  if (long(v.size()) != expect) {
    fail(path, "expected " + std::to_string(expect) + " entries, got " +
                   std::to_string(v.size()));
  }
  Vec w(expect);
  for (long i = 0; i < expect; ++i) {
    w(i) = need_number(v[std::size_t(i)], path + "/" + std::to_string(i));
  }
  return w;
}

Json parse_file(const std::string& fname) {
  std::ifstream in(fname);
  if (!in) fail("", "cannot open file \"" + fname + "\"");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

RdeSpec load_spec(const Json& doc, int arity_cap) {
  std::vector<std::string> labels = load_states(doc, "");
  int m = int(labels.size());

  const Json& noise = need(doc, "noise", "");
  if (!noise.is_array() || noise.empty()) {
    fail("/noise", "expected a nonempty array of noise atoms");
  }
  std::vector<NoiseAtom> atoms;
  double prob_sum = 0.0;
  for (std::size_t k = 0; k < noise.size(); ++k) {
    std::string base = "/noise/" + std::to_string(k);
    const Json& a = noise[k];
    if (!a.is_object()) fail(base, "expected an object");
    NoiseAtom atom;
    atom.prob = need_number(need(a, "prob", base), base + "/prob");
    if (!(atom.prob >= -kNormTol)) {
      fail(base + "/prob", "probability must be >= 0");
    }
    const Json& arity = need(a, "arity", base);
    if (!arity.is_number_integer()) fail(base + "/arity", "expected an integer");
    atom.arity = arity.get<int>();
    if (atom.arity < 0 || atom.arity > arity_cap) {
      fail(base + "/arity", "arity must lie in 0.." + std::to_string(arity_cap));
    }
    const Json& table = need(a, "table", base);
    std::string tpath = base + "/table";
    long expect = ipow(m, atom.arity);
    if (!table.is_array() || long(table.size()) != expect) {
      fail(tpath, "expected " + std::to_string(expect) + " entries");
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
      const Json& e = table[i];
      if (!e.is_number_integer()) {
        fail(tpath + "/" + std::to_string(i), "expected a state index");
      }
      int s = e.get<int>();
      if (s < 0 || s >= m) {
        fail(tpath + "/" + std::to_string(i),
             "state index " + std::to_string(s) + " outside 0.." +
                 std::to_string(m - 1));
      }
      atom.table.push_back(s);
    }
    prob_sum += std::max(0.0, atom.prob);
    atoms.push_back(std::move(atom));
  }
  if (std::abs(prob_sum - 1.0) > kNormTol) {
    fail("/noise", "probabilities sum to " + std::to_string(prob_sum) +
                       ", not 1");
  }
  return RdeSpec(make_state_space(std::move(labels)), std::move(atoms),
                 arity_cap);
}

RdeSpec load_spec_file(const std::string& path, int arity_cap) {
  return load_spec(parse_file(path), arity_cap);
}

Json spec_to_json(const RdeSpec& spec) {
  Json noise = Json::array();
  for (const NoiseAtom& a : spec.noise()) {
    noise.push_back({{"prob", a.prob}, {"arity", a.arity}, {"table", a.table}});
  }
  return {{"states", spec.space()->labels()}, {"noise", noise}};
}

Json measure_to_json(const Measure& mu) {
  std::vector<double> w(mu.weights().data(),
                        mu.weights().data() + mu.weights().size());
  return {{"states", mu.space()->labels()}, {"weights", w}};
}

Measure load_measure(const Json& doc) {
  std::vector<std::string> labels = load_states(doc, "");
  Vec w = load_weights(need(doc, "weights", ""), "/weights",
                       long(labels.size()));
  try {
    return Measure(make_state_space(std::move(labels)), std::move(w));
  } catch (const InputError& e) {
    fail("/weights", e.what());
  }
}

Measure load_measure_file(const std::string& path) {
  return load_measure(parse_file(path));
}

Json tensor_to_json(const TensorMeasure& nu) {
  std::vector<double> e(nu.entries().data(),
                        nu.entries().data() + nu.entry_count());
  return {{"states", nu.space()->labels()},
          {"order", nu.order()},
          {"entries", e}};
}

TensorMeasure load_tensor(const Json& doc) {
  std::vector<std::string> labels = load_states(doc, "");
  const Json& order = need(doc, "order", "");
  if (!order.is_number_integer()) fail("/order", "expected an integer");
  int n = order.get<int>();
  if (n < 1 || n > kMaxTensorOrder) {
    fail("/order", "order must lie in 1.." + std::to_string(kMaxTensorOrder));
  }
  long expect = ipow(long(labels.size()), n);
  Vec e = load_weights(need(doc, "entries", ""), "/entries", expect);
  try {
    return TensorMeasure(make_state_space(std::move(labels)), n, std::move(e));
  } catch (const InputError& err) {
    fail("/entries", err.what());
  }
}

Json atom_measure_to_json(const SimplexAtomMeasure& rho) {
  Json atoms = Json::array();
  for (const Atom& a : rho.atoms()) {
    std::vector<double> p(a.point.weights().data(),
                          a.point.weights().data() + a.point.size());
    atoms.push_back({{"weight", a.weight}, {"point", p}});
  }
  return {{"states", rho.space()->labels()}, {"atoms", atoms}};
}

SimplexAtomMeasure load_atom_measure(const Json& doc) {
  std::vector<std::string> labels = load_states(doc, "");
  StateSpacePtr space = make_state_space(std::move(labels));
  const Json& atoms = need(doc, "atoms", "");
  if (!atoms.is_array() || atoms.empty()) {
    fail("/atoms", "expected a nonempty array of atoms");
  }
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::string base = "/atoms/" + std::to_string(i);
    const Json& a = atoms[i];
    if (!a.is_object()) fail(base, "expected an object");
    double w = need_number(need(a, "weight", base), base + "/weight");
    Vec p = load_weights(need(a, "point", base), base + "/point",
                         long(space->size()));
    try {
      out.push_back({w, Measure(space, std::move(p))});
    } catch (const InputError& e) {
      fail(base + "/point", e.what());
    }
  }
  try {
    return SimplexAtomMeasure(space, std::move(out));
  } catch (const InputError& e) {
    fail("/atoms", e.what());
  }
}

SimplexAtomMeasure load_atom_measure_file(const std::string& path) {
  return load_atom_measure(parse_file(path));
}

std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string tensor_to_csv(const TensorMeasure& nu) {
  std::ostringstream out;
  for (int j = 1; j <= nu.order(); ++j) out << "c" << j << ",";
  out << "value\n";
  std::vector<int> c(nu.order());
  for (long flat = 0; flat < nu.entry_count(); ++flat) {
    nu.coords_of(flat, c);
    for (int x : c) out << x << ",";
    out << format_double(nu[flat]) << "\n";
  }
  return out.str();
}

std::string higher_report_to_csv(const HigherIterationReport& report) {
  std::ostringstream out;
  out << "t,atom_count,diag_mass,residual\n";
  for (const auto& row : report.rows) {
    out << row.t << "," << row.atom_count << "," << format_double(row.diag_mass)
        << ",";
    if (row.residual) out << format_double(*row.residual);
    out << "\n";
  }
  return out.str();
}

std::string diag_trace_to_csv(const std::vector<DiagTraceRow>& trace) {
  std::ostringstream out;
  out << "t,diag_mass,residual\n";
  for (const auto& row : trace) {
    out << row.t << "," << format_double(row.diag_mass) << ",";
    if (row.residual) out << format_double(*row.residual);
    out << "\n";
  }
  return out.str();
}

Json trace_to_json(const IterationTrace& trace) {
  Json rows = Json::array();
  for (const auto& r : trace.rows) {
    rows.push_back({{"t", r.t}, {"residual", r.residual}});
  }
  return rows;
}

Json higher_report_to_json(const HigherIterationReport& report) {
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row = {{"t", r.t},
                {"atom_count", r.atom_count},
                {"diag_mass", r.diag_mass}};
    row["residual"] = r.residual ? Json(*r.residual) : Json(nullptr);
    rows.push_back(std::move(row));
  }
  return rows;
}

Json tree_to_json(const SampledTree& tree) {
  Json nodes = Json::object();
  for (const auto& [word, omega] : tree.nodes) {
    std::string key;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (i) key += '.';
      key += std::to_string(int(static_cast<unsigned char>(word[i])));
    }
    nodes[key] = omega;
  }
  return {{"depth", tree.depth}, {"seed", tree.seed}, {"nodes", nodes}};
}

Json mc_estimate_to_json(const McEstimate& est) {
  return {{"value", est.value},
          {"n_samples", est.n_samples},
          {"std_error", est.std_error},
          {"seed", est.seed}};
}

Json root_law_to_json(const RootLawEstimate& est) {
  std::vector<double> se(est.std_errors.data(),
                         est.std_errors.data() + est.std_errors.size());
  return {{"law", measure_to_json(est.law)},
          {"std_errors", se},
          {"n_samples", est.n_samples},
          {"seed", est.seed}};
}

Json witness_to_json(const DilationWitness& w) {
  Json kernel = Json::array();
  for (long i = 0; i < w.kernel.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < w.kernel.cols(); ++j) row.push_back(w.kernel(i, j));
    kernel.push_back(std::move(row));
  }
  return {{"kernel", kernel},
          {"min_entry", w.min_entry},
          {"row_sum_residual", w.row_sum_residual},
          {"barycenter_residual", w.barycenter_residual},
          {"mixture_residual", w.mixture_residual}};
}

Json cv_report_to_json(const CvReport& report) {
  Json doc = {{"verdict", to_string(report.verdict)},
              {"first_moment_gap", report.gaps.first_moment_gap},
              {"second_moment_eigen_gap", report.gaps.second_moment_eigen_gap},
              {"phase1_objective", report.phase1_objective},
              {"feasibility_tolerance", report.feasibility_tolerance}};
  doc["witness"] =
      report.witness ? witness_to_json(*report.witness) : Json(nullptr);
  return doc;
}

Json endogeny_verdict_to_json(const EndogenyVerdict& v) {
  Json trace = Json::array();
  for (const auto& row : v.trace) {
    Json r = {{"t", row.t}, {"diag_mass", row.diag_mass}};
    r["residual"] = row.residual ? Json(*row.residual) : Json(nullptr);
    trace.push_back(std::move(r));
  }
  return {{"status", to_string(v.status)},
          {"route", to_string(v.route)},
          {"converged", v.converged},
          {"iterations", v.iterations},
          {"final_diag_mass", v.final_diag_mass},
          {"gap_to_diagonal", v.gap_to_diagonal},
          {"witness", tensor_to_json(v.witness)},
          {"trace", trace}};
}

const char* to_string(CvVerdict v) {
  switch (v) {
    case CvVerdict::Dominated:
      return "Dominated";
    case CvVerdict::NotDominated:
      return "NotDominated";
    case CvVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

const char* to_string(EndogenyStatus s) {
  switch (s) {
    case EndogenyStatus::Endogenous:
      return "Endogenous";
    case EndogenyStatus::NonEndogenous:
      return "NonEndogenous";
    case EndogenyStatus::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

const char* to_string(EndogenyRoute r) {
  switch (r) {
    case EndogenyRoute::bivariate:
      return "bivariate";
    case EndogenyRoute::higher_level:
      return "higher_level";
    case EndogenyRoute::both:
      return "both";
  }
  return "both";
}

}  // namespace rdelab
