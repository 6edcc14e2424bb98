#include "ambiglab/rng.hpp"

#include "ambiglab/errors.hpp"

namespace ambiglab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InfeasibleSpec: return "infeasible-spec";
    case ErrorCode::NoCertificateFound: return "no-certificate-found";
    case ErrorCode::UnsupportedType: return "unsupported-type";
    case ErrorCode::InternalConsistency: return "internal-consistency-error";
    case ErrorCode::IllConditionedPoint: return "ill-conditioned-point";
    case ErrorCode::Inconclusive: return "inconclusive";
    case ErrorCode::MalformedInput: return "malformed-input";
  }
  return "unknown";
}

}  // namespace ambiglab
