#include "fracspec/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace fracspec::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    static const bool has = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    return has;
#else
    return false;
#endif
}

const KernelTable* table_for(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return &scalar_table();
    case Isa::Avx2: return cpu_has_avx2() ? avx2_table() : nullptr;
    case Isa::Neon: return neon_table();
    }
    return nullptr;
}

Isa detect() {
    if (const char* env = std::getenv("FRACSPEC_FORCE_SCALAR"); env && std::string_view(env) == "1")
        return Isa::Scalar;
    if (table_for(Isa::Avx2)) return Isa::Avx2;
    if (table_for(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) { return table_for(isa) != nullptr; }

Isa active_isa() { return current().load(); }

bool set_isa(Isa isa) {
    if (!isa_supported(isa)) return false;
    current().store(isa);
    return true;
}

const KernelTable& table() { return *table_for(current().load()); }

}  // namespace fracspec::kernels
