#pragma once

#include <stdexcept>
#include <string>

namespace chaosbreak {

/// Shape/length disagreement between an image, permutation, key stream or pipeline.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed file content (PGM headers, JSON configs).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The target does not satisfy an attack's preconditions (step condition violated,
/// no complete chain, insensitive diffusion, model mismatch). CLI maps this to exit 3.
class AttackError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// No rule-satisfying complete chain exists in an association table.
class NoChainError : public AttackError {
public:
    using AttackError::AttackError;
};

} // namespace chaosbreak
