#pragma once

// JSON and CSV encodings of the domain types. Parse failures of any kind are
// reported as Error(MalformedInput).

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ambiglab/cones.hpp"
#include "ambiglab/generators.hpp"
#include "ambiglab/quotient.hpp"
#include "ambiglab/verification.hpp"

namespace ambiglab {

using Json = nlohmann::json;

Json to_json(const RealVec& v);
Json to_json(const IndexSet& s);
Json to_json(const ConeSpec& spec);
Json to_json(const AdversarialInstance& inst);
Json to_json(const VerificationReport& report);
Json to_json(const DimProbeResult& result);
Json to_json(const PairType& type);
Json to_json(const std::vector<QuotientElement>& elements);

RealVec vec_from_json(const Json& j);
IndexSet index_set_from_json(const Json& j);
ConeSpec cone_from_json(const Json& j);
AdversarialInstance instance_from_json(const Json& j);

/// Parses text, wrapping syntax errors as malformed-input.
Json parse_json(const std::string& text);

/// Full precision scientific notation, 17 significant digits.
std::string format_real(double v);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace ambiglab
