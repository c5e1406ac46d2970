#pragma once

#include <stdexcept>
#include <string>

namespace wachcoh {

/* Base class for all failures this library raises on purpose. */
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/* The requested result cannot be represented at the available p-adic or
 * series precision. */
struct precision_error : error {
    using error::error;
};

/* An exact division failed; the message names the first obstructing
 * coefficient. */
struct not_divisible_error : error {
    using error::error;
};

/* Inversion of a non-unit was requested. */
struct not_a_unit_error : error {
    using error::error;
};

/* A series expected to be F_p^x-invariant is not. */
struct not_invariant_error : error {
    using error::error;
};

/* A module file violates the on-disk schema. */
struct schema_error : error {
    using error::error;
};

/* An operation requires a module whose axioms hold, and they do not. */
struct axiom_error : error {
    using error::error;
};

}  // namespace wachcoh
