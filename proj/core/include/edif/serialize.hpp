#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "edif/condition.hpp"

namespace edif {

using Json = nlohmann::ordered_json;

/// Condition as {sigma, N, layers: {base, psi, theta}, meta}. Rationals are
/// strings "p/q"; heights are [limit, offset].
Json condition_to_json(const Condition& c);
/// Rebuilds the representation stage by stage. Throws InvalidInput.
Condition condition_from_json(const Json& j);

Json point_to_json(const LabeledPoint& p);
LabeledPoint point_from_json(const Json& j);

/// {"type": "grid", lo, hi, step_log2, limit, base, modulus} or
/// {"type": "list", points: [{v, h}]}.
std::unique_ptr<PointPool> pool_from_json(const Json& j);
Json pool_to_json(const GridPool& g);
Json pool_to_json(const ListPool& l);

/// {"targets": [{v, h}]} or a bare array.
std::vector<LabeledPoint> targets_from_json(const Json& j);

/// 64-bit FNV-1a of the canonical layer serialization, as 16 hex digits.
std::string rep_hash(const FuncRep& rep);

/// Rows x,g,f,errBound at the given abscissae; the header comment carries
/// the representation hash and the seed.
void write_samples_csv(std::ostream& os, const FuncRep& rep, const std::vector<Rational>& xs, std::uint64_t seed);

/// Reads a JSON file. Throws InvalidInput on I/O or parse errors.
Json read_json_file(const std::string& path);

}  // namespace edif
