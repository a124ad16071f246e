#pragma once

#include <stdexcept>
#include <string>

namespace resonant {

/// Input that violates a loop admissibility condition (non-monotone halves,
/// self-intersection, wrong orientation, branch ordering).
class InadmissibleError : public std::runtime_error {
 public:
  enum class Kind { non_monotonic, self_intersecting, non_dissipative, branch_ordering, inaccessible, domain };

  InadmissibleError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline const char* to_string(InadmissibleError::Kind k) {
  switch (k) {
    case InadmissibleError::Kind::non_monotonic: return "non-monotonic";
    case InadmissibleError::Kind::self_intersecting: return "self-intersecting";
    case InadmissibleError::Kind::non_dissipative: return "non-dissipative";
    case InadmissibleError::Kind::branch_ordering: return "branch-ordering";
    case InadmissibleError::Kind::inaccessible: return "inaccessible";
    case InadmissibleError::Kind::domain: return "domain";
  }
  return "unknown";
}

/// Malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace resonant
