#pragma once

#include <stdexcept>
#include <string>

namespace cantorsum {

/// Malformed digit set or base (bad ordering, missing 0 or n-1, n < 3, ...).
class invalid_digit_set : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its documented domain.
class precondition_error : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// The requested analysis does not apply to this input (e.g. a Cantor-set
/// dimension for a sum that contains an interval).
class not_applicable : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// The oracle would need more start-table entries than its budget allows.
class budget_exceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive search was asked for a base it refuses to enumerate.
class infeasible_search : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace cantorsum

namespace cantorsum {

/// No base set is available for the requested tower chain.
class missing_base : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

} // namespace cantorsum
