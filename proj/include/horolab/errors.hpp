#pragma once

#include <stdexcept>
#include <string>

namespace horolab {

// Error taxonomy. The CLI maps kinds to process exit codes:
// invariant failures -> 2, budget/coverage/data/capacity -> 3, schema -> 4.
enum class errc {
    invalid_argument,  // bad ranges, degenerate inputs, identity where forbidden
    constraint,        // a named construction constraint failed
    budget,            // enumeration/search budget exhausted before a decision
    coverage,          // orbit cover certified insufficient for the query
    capacity,          // memory/size cap exceeded
    data,              // not enough usable data to estimate
    schema,            // malformed input file
    structure,         // malformed in-memory object (e.g. tree without children)
};

class error : public std::runtime_error {
public:
    error(errc kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    errc kind() const { return kind_; }

private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& what) { throw error(kind, what); }

} // namespace horolab
