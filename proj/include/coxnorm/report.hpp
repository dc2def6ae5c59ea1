#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace coxnorm {

// Outcome record for a single verification: an inequality lhs <= rhs checked
// with tolerance `tol`, or a structural check encoded as lhs = violation
// count against rhs = 0.  `meta` carries free-form details (sizes, orbit
// info, annotations) so reports stay self-describing when serialized.
struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> meta;

    double margin() const { return rhs - lhs; }
    bool pass() const { return margin() >= -tol; }
};

}  // namespace coxnorm
