#pragma once

#include <stdexcept>
#include <string>

namespace nrlab {

// Every contract violation in the library throws nrlab::error carrying one
// of these codes, so callers and tests can react to the failure mode without
// parsing message strings.
enum class errc {
  invalid_limit,
  limit_exceeded,
  mode_mismatch,
  invalid_arity,
  invalid_modulus,
  invalid_prime,
  no_such_element,
  out_of_range,
  wrong_kind,
  not_primitive,
  not_coprime,
  empty_window,
  window_too_small,
  shift_too_large,
  identity_violation,
  grid_too_coarse,
  bad_seed,
  out_of_domain,
  missing_identity,
  not_proper,
  overflow,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc c, const std::string& what);
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] void fail(errc c, const std::string& what);

}  // namespace nrlab
