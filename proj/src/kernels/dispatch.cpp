#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace polsq::kernels {

const char *isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar:
        return "scalar";
    case Isa::avx2:
        return "avx2";
    }
    return "unknown";
}

const KernelTable &scalar_table() {
    static const KernelTable table{Isa::scalar, detail::s1_factor_row_scalar,
                                   detail::cdot_scalar, detail::rdot_scalar,
                                   detail::raxpy_scalar};
    return table;
}

const KernelTable *avx2_table() {
#if defined(POLSQ_HAVE_AVX2)
    static const bool supported = [] {
        __builtin_cpu_init();
        return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    }();
    static const KernelTable table{Isa::avx2, detail::s1_factor_row_avx2,
                                   detail::cdot_avx2, detail::rdot_avx2,
                                   detail::raxpy_avx2};
    return supported ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable &active() {
    static const KernelTable &chosen = []() -> const KernelTable & {
        const char *force = std::getenv("POLSQ_FORCE_SCALAR");
        if (force != nullptr && std::strcmp(force, "0") != 0 && *force != '\0')
            return scalar_table();
        if (const KernelTable *t = avx2_table())
            return *t;
        return scalar_table();
    }();
    return chosen;
}

} // namespace polsq::kernels
