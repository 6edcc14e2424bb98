#include "ambiglab/serialize.hpp"

#include <cstdio>
#include <ostream>

namespace ambiglab {

namespace {

[[noreturn]] void malformed(const std::string& what) { fail(ErrorCode::MalformedInput, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) malformed(std::string("expected an object containing '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

int int_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) malformed(std::string("field '") + key + "' must be an integer");
  return v.get<int>();
}

double real_value(const Json& v, const char* what) {
  if (!v.is_number()) malformed(std::string(what) + " must be a number");
  return v.get<double>();
}

std::optional<double> optional_real(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return real_value(*it, key);
}

SignalPair pair_from_json(const Json& j) { return {vec_from_json(field(j, "x")), vec_from_json(field(j, "y"))}; }

Json pair_to_json(const SignalPair& p) { return {{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }

}  // namespace

Json to_json(const RealVec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const IndexSet& s) { return Json(s.indices()); }

Json to_json(const ConeSpec& spec) {
  Json j = {{"kind", to_string(spec.kind)}, {"d", spec.d}, {"lambda", to_json(spec.lambda)}};
  if (spec.kind == ConeKind::Coded) j["b"] = to_json(spec.b);
  return j;
}

Json to_json(const AdversarialInstance& inst) {
  Json params = {{"u", to_json(inst.params.u)},
                 {"v", to_json(inst.params.v)},
                 {"theta", inst.params.angles.theta},
                 {"phi", inst.params.angles.phi}};
  if (inst.params.c1) params["c1"] = *inst.params.c1;
  if (inst.params.c2) params["c2"] = *inst.params.c2;
  if (inst.params.c1p) params["c1p"] = *inst.params.c1p;
  if (inst.params.c2p) params["c2p"] = *inst.params.c2p;
  return {{"m", inst.m},
          {"n", inst.n},
          {"pair1", pair_to_json(inst.pair1)},
          {"pair2", pair_to_json(inst.pair2)},
          {"params", params},
          {"cones", Json::array({to_json(inst.cones[0]), to_json(inst.cones[1])})},
          {"claimed_dim", inst.claimed_dim}};
}

Json to_json(const VerificationReport& r) {
  return {{"conv_residual", r.conv_residual},
          {"membership", r.membership},
          {"noncollinear", r.noncollinear},
          {"pathology_free", r.pathology_free},
          {"equivalent_pairs", r.equivalent_pairs},
          {"pass", r.pass}};
}

Json to_json(const DimProbeResult& r) {
  return {{"claimed", r.claimed},
          {"measured_pre_quotient", r.measured_pre_quotient},
          {"measured_post_quotient", r.measured_post_quotient},
          {"samples", r.samples},
          {"agreement", r.agreement},
          {"conclusive", r.conclusive},
          {"inconclusive", r.inconclusive},
          {"agreeing", r.agreeing}};
}

Json to_json(const PairType& t) {
  Json j = {{"type", to_string(t.value)}, {"lambda_star", to_json(t.lambda_star)}};
  j["r"] = t.r ? Json(*t.r) : Json(nullptr);
  return j;
}

Json to_json(const std::vector<QuotientElement>& elements) {
  Json out = Json::array();
  for (const auto& e : elements) out.push_back({{"gamma", e.gamma}, {"w_star", to_json(e.w_star)}});
  return out;
}

RealVec vec_from_json(const Json& j) {
  if (!j.is_array()) malformed("expected an array of numbers");
  RealVec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = real_value(j[i], "vector entry");
  return v;
}

IndexSet index_set_from_json(const Json& j) {
  if (!j.is_array()) malformed("expected an array of indices");
  std::vector<int> idx;
  for (const auto& e : j) {
    if (!e.is_number_integer()) malformed("index entries must be integers");
    idx.push_back(e.get<int>());
  }
  try {
    return IndexSet(std::move(idx));
  } catch (const Error& e) {
    malformed(e.what());
  }
}

ConeSpec cone_from_json(const Json& j) {
  const Json& kind = field(j, "kind");
  if (!kind.is_string()) malformed("cone 'kind' must be a string");
  const std::string k = kind.get<std::string>();
  const int d = int_field(j, "d");
  try {
    if (k == "unconstrained") return ConeSpec::unconstrained(d);
    const IndexSet lambda = j.contains("lambda") ? index_set_from_json(j["lambda"]) : IndexSet{};
    if (k == "zero") return ConeSpec::zero(lambda, d);
    if (k == "coded") return ConeSpec::coded(lambda, vec_from_json(field(j, "b")), d);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::MalformedInput) throw;
    malformed(std::string("invalid cone: ") + e.what());
  }
  malformed("unknown cone kind '" + k + "'");
}

AdversarialInstance instance_from_json(const Json& j) {
  AdversarialInstance inst;
  inst.m = int_field(j, "m");
  inst.n = int_field(j, "n");
  inst.pair1 = pair_from_json(field(j, "pair1"));
  inst.pair2 = pair_from_json(field(j, "pair2"));
  if (inst.m < 2 || inst.n < 2) malformed("m and n must be >= 2");
  for (const auto* p : {&inst.pair1, &inst.pair2})
    if (p->x.size() != inst.m || p->y.size() != inst.n) malformed("pair lengths do not match (m, n)");

  const Json& params = field(j, "params");
  inst.params.u = vec_from_json(field(params, "u"));
  inst.params.v = vec_from_json(field(params, "v"));
  inst.params.angles.theta = real_value(field(params, "theta"), "theta");
  inst.params.angles.phi = real_value(field(params, "phi"), "phi");
  inst.params.c1 = optional_real(params, "c1");
  inst.params.c2 = optional_real(params, "c2");
  inst.params.c1p = optional_real(params, "c1p");
  inst.params.c2p = optional_real(params, "c2p");

  const Json& cones = field(j, "cones");
  if (!cones.is_array() || cones.size() != 2) malformed("'cones' must be an array of two cone specs");
  inst.cones = {cone_from_json(cones[0]), cone_from_json(cones[1])};
  if (inst.cones[0].d != inst.m || inst.cones[1].d != inst.n) malformed("cone dimensions do not match (m, n)");
  inst.claimed_dim = int_field(j, "claimed_dim");
  return inst;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    malformed(std::string("JSON parse error: ") + e.what());
  }
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (filled_++ > 0) out_ << ',';
  if (s.find_first_of(",\"\n") == std::string::npos) {
    out_ << s;
  } else {
    out_ << '"';
    for (char c : s) out_ << (c == '"' ? "\"\"" : std::string(1, c));
    out_ << '"';
  }
  return *this;
}

CsvWriter& CsvWriter::cell(double v) { return cell(format_real(v)); }

CsvWriter& CsvWriter::cell(long long v) { return cell(std::to_string(v)); }

void CsvWriter::end_row() {
  require(filled_ == columns_, "CsvWriter: row has the wrong number of cells");
  out_ << '\n';
  filled_ = 0;
}

}  // namespace ambiglab
