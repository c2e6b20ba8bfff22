#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gmt {

enum class Errc {
  degenerate_input,
  resolution_exceeded,
  pole_outside_domain,
  pole_too_close,
  corkscrew_failure,
  no_interior_point,
  empty_whitney_region,
  indeterminate_classification,
  invalid_argument,
  io_failure,
};

// All recoverable failures flow through this one type; the CLI maps codes to
// exit statuses (validation vs numerical).
class Error : public std::runtime_error {
public:
  Error(Errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::degenerate_input: return "DegenerateInput";
    case Errc::resolution_exceeded: return "ResolutionExceeded";
    case Errc::pole_outside_domain: return "PoleOutsideDomain";
    case Errc::pole_too_close: return "PoleTooClose";
    case Errc::corkscrew_failure: return "CorkscrewFailure";
    case Errc::no_interior_point: return "NoInteriorPoint";
    case Errc::empty_whitney_region: return "EmptyWhitneyRegion";
    case Errc::indeterminate_classification: return "IndeterminateClassification";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::io_failure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace gmt
