#pragma once

#include <cstddef>
#include <cstdint>

// Runtime-configurable guardrails. Exceeding a cap is always a hard error,
// never a silent truncation.
namespace modlie::limits {

// Maximum total extension degree over the prime field (default 12).
uint32_t max_extension_degree();
void set_max_extension_degree(uint32_t cap);

// Maximum dimension a module construction may produce (default 4096).
std::size_t max_module_dim();
void set_max_module_dim(std::size_t cap);

}  // namespace modlie::limits
