#pragma once

#include <string>

#include <json.hpp>

#include "rdelab/convex_order.hpp"
#include "rdelab/endogeny.hpp"
#include "rdelab/higher_level.hpp"
#include "rdelab/measure.hpp"
#include "rdelab/rde_spec.hpp"
#include "rdelab/rtp.hpp"

namespace rdelab {

using Json = nlohmann::json;

// Spec documents: {"states": [...], "noise": [{"prob","arity","table"}...]}.
// The first violation is reported as a ParseError carrying a JSON-pointer
// style path such as "/noise/2/table/5".
RdeSpec load_spec(const Json& doc, int arity_cap = kDefaultArityCap);
RdeSpec load_spec_file(const std::string& path,
                       int arity_cap = kDefaultArityCap);
Json spec_to_json(const RdeSpec& spec);

// Measures: {"states": [...], "weights": [...]}.
Json measure_to_json(const Measure& mu);
Measure load_measure(const Json& doc);
Measure load_measure_file(const std::string& path);

// Tensors: {"states": [...], "order": n, "entries": [...]} with the flat
// big-endian layout.
Json tensor_to_json(const TensorMeasure& nu);
TensorMeasure load_tensor(const Json& doc);

// Measures on the simplex: {"states": [...], "atoms": [{"weight","point"}]}.
Json atom_measure_to_json(const SimplexAtomMeasure& rho);
SimplexAtomMeasure load_atom_measure(const Json& doc);
SimplexAtomMeasure load_atom_measure_file(const std::string& path);

// CSV emitters. Tensors list one entry per row (coordinates, value);
// iteration reports one row per step.
std::string tensor_to_csv(const TensorMeasure& nu);
std::string higher_report_to_csv(const HigherIterationReport& report);
std::string diag_trace_to_csv(const std::vector<DiagTraceRow>& trace);

// Debug dump of a sampled tree: words as dot-joined child indices ("" is
// the root), mapped to the noise atom drawn at that node.
Json tree_to_json(const SampledTree& tree);

Json trace_to_json(const IterationTrace& trace);
Json higher_report_to_json(const HigherIterationReport& report);
Json mc_estimate_to_json(const McEstimate& est);
Json root_law_to_json(const RootLawEstimate& est);
Json witness_to_json(const DilationWitness& witness);
Json cv_report_to_json(const CvReport& report);
Json endogeny_verdict_to_json(const EndogenyVerdict& verdict);

const char* to_string(CvVerdict v);
const char* to_string(EndogenyStatus s);
const char* to_string(EndogenyRoute r);

// Deterministic shortest-roundtrip rendering used by every CSV emitter.
std::string format_double(double v);

}  // namespace rdelab
