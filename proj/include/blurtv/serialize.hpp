#pragma once

#include <string>

#include "json.hpp"

#include "blurtv/bounds.hpp"
#include "blurtv/kernels.hpp"

namespace blurtv {

/// {method, alpha, h, n, m, B, estimate, lcb, ucb_raw, ucb, margins, diagnostics, notes, seed}.
/// Absent B or lcb are written as null.
nlohmann::json to_json(const BoundResult& result);

/// `{"family":"gaussian","dim":d}` or
/// `{"family":"gaussian_mixture_1d","means":[…],"weights":[…],"sds":[…]}`.
Kernel kernel_from_json(const nlohmann::json& spec);
nlohmann::json kernel_to_json(const Kernel& kernel);

/// Compact JSON text; doubles round-trip exactly.
std::string dump(const nlohmann::json& value);

}  // namespace blurtv
