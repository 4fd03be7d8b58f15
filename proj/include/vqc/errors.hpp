#pragma once

#include <stdexcept>
#include <string>

namespace vqc {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotHermitian : Error { using Error::Error; };
struct DimMismatch : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct InvalidQubitCount : Error { using Error::Error; };
struct InvalidDepth : Error { using Error::Error; };
struct UnknownGate : Error { using Error::Error; };
struct OutOfRange : Error { using Error::Error; };
struct NoisyModeUnsupported : Error { using Error::Error; };
struct NegativeAmplitude : Error { using Error::Error; };

// Malformed user input (config files, matrix files, serialized records).
struct ConfigError : Error { using Error::Error; };

}  // namespace vqc
