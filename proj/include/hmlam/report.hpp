#pragma once

#include <span>
#include <string>

#include "hmlam/group.hpp"
#include "hmlam/lamination.hpp"
#include "hmlam/markov.hpp"
#include "json.hpp"

namespace hmlam {

using Json = nlohmann::ordered_json;

// Machine-readable mirrors of the report types. Angles are radians in the
// disk model; words are printed with the scene's generator names.

Json to_json(const IdealPoint& p);
Json to_json(const Geodesic& g);
Json to_json(const Isometry& m);
Json to_json(const LimitSetSample& s);
Json to_json(const Provenance& p, std::span<const std::string> names);
Json to_json(const GeodesicFamily& f, std::span<const std::string> names);
Json to_json(const ChainKey& k, std::span<const std::string> names);
Json to_json(const LaminationApprox& lam, std::span<const std::string> names);
Json to_json(const CrossingViolation& v);
Json to_json(const MeagerInvariantSet& s);
Json to_json(const EscapeReport& r);
Json to_json(const AxiomReport& r, std::span<const std::string> names);

Json to_json(const IntMatrix& m);
Json to_json(const MarkovCheck& c);
Json to_json(const PerronData& p);
Json to_json(const InvariantMeasures& m);
Json to_json(const AdmissibleWords& w);
Json to_json(const CodingReport& r);

}  // namespace hmlam
