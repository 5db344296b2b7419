#pragma once

#include <stdexcept>
#include <string>

namespace charlab {

/// Failure categories surfaced by the library. Every throw site picks one;
/// the CLI maps them onto process exit codes.
enum class errc {
    invalid_argument,
    ill_defined_homomorphism,
    not_invertible,
    precondition_violated,
    vanishing_char,
    not_positive_definite,
    condition11_violated,
    condition11_holds,
    equation3_violated,
    malformed_config,
    internal,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::ill_defined_homomorphism: return "ill-defined-homomorphism";
    case errc::not_invertible: return "not-invertible";
    case errc::precondition_violated: return "precondition-violated";
    case errc::vanishing_char: return "vanishing-char";
    case errc::not_positive_definite: return "not-positive-definite";
    case errc::condition11_violated: return "condition-11-violated";
    case errc::condition11_holds: return "condition-11-holds";
    case errc::equation3_violated: return "equation-3-violated";
    case errc::malformed_config: return "malformed-config";
    case errc::internal: return "internal";
    }
    return "unknown";
}

class error : public std::runtime_error {
  public:
    error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

inline void require(bool ok, errc code, const std::string& msg) {
    if (!ok) fail(code, msg);
}

} // namespace charlab
