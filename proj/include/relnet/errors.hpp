#pragma once

#include <stdexcept>
#include <string>

namespace relnet {

// Failure categories that callers (the CLI in particular) need to tell apart.
// Plain contract violations use std::invalid_argument / std::out_of_range.

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A class needed for balancing has no records.
struct BalanceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A model and a dataset disagree on features or input width.
struct SchemaMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation received the wrong family of model.
struct ModelKindMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace relnet
