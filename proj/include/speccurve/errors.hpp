#ifndef SPECCURVE_ERRORS_HPP
#define SPECCURVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace speccurve {

// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad mathematical input: zero polynomial where nonzero required, singular
// frame, residue sums that do not cancel, and the like.
struct value_error : error {
    explicit value_error(const std::string& msg) : error(msg) {}
};

// Malformed textual input (config files, scalar strings).
struct parse_error : error {
    explicit parse_error(const std::string& msg) : error(msg) {}
};

// A series operation needed coefficients beyond the stored truncation order,
// or a branch computation could not separate/decide at the requested order.
// Never silently fabricates zeros.
struct precision_error : error {
    explicit precision_error(const std::string& msg) : error(msg) {}
};

// Two routes that must agree disagreed (declared jets vs computed expansion,
// section bounds on a characteristic polynomial of a validated field, ...).
struct consistency_error : error {
    explicit consistency_error(const std::string& msg) : error(msg) {}
};

// A blow-up center or jet coefficient does not lie in Q(i).
struct inexact_error : error {
    explicit inexact_error(const std::string& msg) : error(msg) {}
};

} // namespace speccurve

#endif
