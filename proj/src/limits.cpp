#include "modlie/limits.hpp"

#include <atomic>

namespace modlie::limits {

namespace {
std::atomic<uint32_t> g_max_ext_degree{12};
std::atomic<std::size_t> g_max_module_dim{4096};
}  // namespace

uint32_t max_extension_degree() { return g_max_ext_degree.load(); }
void set_max_extension_degree(uint32_t cap) { g_max_ext_degree.store(cap); }

std::size_t max_module_dim() { return g_max_module_dim.load(); }
void set_max_module_dim(std::size_t cap) { g_max_module_dim.store(cap); }

}  // namespace modlie::limits
