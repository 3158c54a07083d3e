#include "nrlab/errors.hpp"

namespace nrlab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_limit: return "InvalidLimit";
    case errc::limit_exceeded: return "LimitExceeded";
    case errc::mode_mismatch: return "ModeMismatch";
    case errc::invalid_arity: return "InvalidArity";
    case errc::invalid_modulus: return "InvalidModulus";
    case errc::invalid_prime: return "InvalidPrime";
    case errc::no_such_element: return "NoSuchElement";
    case errc::out_of_range: return "OutOfRange";
    case errc::wrong_kind: return "WrongKind";
    case errc::not_primitive: return "NotPrimitive";
    case errc::not_coprime: return "NotCoprime";
    case errc::empty_window: return "EmptyWindow";
    case errc::window_too_small: return "WindowTooSmall";
    case errc::shift_too_large: return "ShiftTooLarge";
    case errc::identity_violation: return "IdentityViolation";
    case errc::grid_too_coarse: return "GridTooCoarse";
    case errc::bad_seed: return "BadSeed";
    case errc::out_of_domain: return "OutOfDomain";
    case errc::missing_identity: return "MissingIdentity";
    case errc::not_proper: return "NotProper";
    case errc::overflow: return "Overflow";
  }
  return "UnknownError";
}

error::error(errc c, const std::string& what)
    : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c) {}

void fail(errc c, const std::string& what) { throw error(c, what); }

}  // namespace nrlab
