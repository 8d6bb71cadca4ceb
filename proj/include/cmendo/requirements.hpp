#pragma once

#include <string>
#include <vector>

#include "cmendo/orders.hpp"

namespace cmendo {

struct RequirementsReport {
    bool ordinary = false;
    bool irreducible = false;
    bool units_equal = false;        // O_K^* = O_F^*
    bool narrow_class_one = false;   // narrow class number of F is 1
    bool odd_conductor_gap = false;  // [O_F : Z[s]] odd
    std::vector<std::string> messages;

    bool all() const { return ordinary && irreducible && units_equal && narrow_class_one && odd_conductor_gap; }
    bool operator==(const RequirementsReport&) const = default;
};

struct QuadraticClassInfo {
    Int disc;
    Int narrow_class_number;
    Int class_number;
    int unit_norm;  // norm of the fundamental unit, +1 or -1
};

// Narrow class number of the real quadratic order of discriminant D > 0
// (non-square) from the cycles of reduced indefinite forms.
QuadraticClassInfo real_quadratic_class_info(const Int& D);

// Roots of unity of order 5 in O_K, found among elements with T2 = 4.
bool contains_fifth_roots_of_unity(const Order& OK);

// Never throws; the maximal order is computed when needed.
RequirementsReport validate_requirements(const Ctx& ctx, const OrderPtr& OK = nullptr);

}  // namespace cmendo
