#pragma once

// JSON encodings of every payload type. Rat1 is [num, den], complex entries
// are [re, im], big integers and rationals are decimal strings.

#include <string>

#include <json.hpp>

#include "acomm/census.hpp"
#include "acomm/errors.hpp"
#include "acomm/exact_arith.hpp"
#include "acomm/gamma_spaces.hpp"
#include "acomm/skew_forms.hpp"
#include "acomm/tuple_lab.hpp"

namespace acomm {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const Rat1& x);
void from_json(const Json& j, Rat1& x);
void to_json(Json& j, const IntMatrix& a);
void from_json(const Json& j, IntMatrix& a);

/// {"n", "entries"} with the full n x n matrix; the parser rejects non-skew input.
void to_json(Json& j, const SkewQZ& d);
void from_json(const Json& j, SkewQZ& d);
void to_json(Json& j, const SkewZ& w);
void from_json(const Json& j, SkewZ& w);

/// Also emits orders and sigma; the parser ignores them.
void to_json(Json& j, const NormalFormQZ& f);
void from_json(const Json& j, NormalFormQZ& f);
void to_json(Json& j, const NormalFormZ& f);
void from_json(const Json& j, NormalFormZ& f);

void to_json(Json& j, const CensusReport& r);
void from_json(const Json& j, CensusReport& r);

void to_json(Json& j, const ACTuple& t);
void from_json(const Json& j, ACTuple& t);
void to_json(Json& j, const ZDParameters& p);
void from_json(const Json& j, ZDParameters& p);
void to_json(Json& j, const SpectralData& s);
void from_json(const Json& j, SpectralData& s);
void to_json(Json& j, const RelationReport& r);
void from_json(const Json& j, RelationReport& r);
void to_json(Json& j, const CharPolyReport& r);
void from_json(const Json& j, CharPolyReport& r);

void to_json(Json& j, const PolyRoot& x);
void from_json(const Json& j, PolyRoot& x);
void to_json(Json& j, const PolySpec& p);
void from_json(const Json& j, PolySpec& p);
void to_json(Json& j, const PolyBlock& b);
void from_json(const Json& j, PolyBlock& b);
void to_json(Json& j, const ModuliFactor& f);
void from_json(const Json& j, ModuliFactor& f);
void to_json(Json& j, const CentralExtension& g);
void from_json(const Json& j, CentralExtension& g);
void to_json(Json& j, const OmegaAnalysis& a);
void from_json(const Json& j, OmegaAnalysis& a);
void to_json(Json& j, const EigenBlock& b);
void from_json(const Json& j, EigenBlock& b);
void to_json(Json& j, const FTerm& t);
void from_json(const Json& j, FTerm& t);
void to_json(Json& j, const FDecomposition& f);
void from_json(const Json& j, FDecomposition& f);
void to_json(Json& j, const FiberInfo& f);
void from_json(const Json& j, FiberInfo& f);
void to_json(Json& j, const RankRCount& c);
void from_json(const Json& j, RankRCount& c);

/// Parses text; malformed JSON becomes InputError.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

/// j.get<T>() with every failure reported as InputError.
template <class T>
T decode(const Json& j) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed JSON payload: ") + e.what());
  }
}

}  // namespace acomm
