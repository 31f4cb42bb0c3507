#pragma once

#include <stdexcept>
#include <string>

namespace oclab {

// Error hierarchy shared across modules. Each failure mode gets its own type
// so tests and callers can catch precisely.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor shape mismatch or invalid op arguments.
struct ShapeError : Error {
    using Error::Error;
};

// Non-finite value produced or consumed where finiteness is required.
struct NumericError : Error {
    using Error::Error;
};

// Bad or inconsistent configuration (unknown keys, invalid values).
struct ConfigError : Error {
    using Error::Error;
};

// Dataset generation failure (invalid typology, pool exhaustion, ...).
struct GenError : Error {
    using Error::Error;
};

// Malformed input file (JSONL records, missing fields, ...).
struct FormatError : Error {
    using Error::Error;
};

// Known/unknown split cannot be honored.
struct SplitError : Error {
    using Error::Error;
};

// Invalid API usage (bad argument combinations at runtime).
struct UsageError : Error {
    using Error::Error;
};

// Replay buffer sampled before it filled.
struct WarmupError : Error {
    using Error::Error;
};

// Sequence exceeds the learner's maximum length.
struct LengthError : Error {
    using Error::Error;
};

// Input values outside the documented domain of an op.
struct InputError : Error {
    using Error::Error;
};

// Degenerate geometry (zero-length trajectory, ...).
struct DegenerateError : Error {
    using Error::Error;
};

}  // namespace oclab
