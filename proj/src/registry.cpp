#include "dsape/cstr4.hpp"
#include "dsape/model.hpp"

namespace dsape {

// Called from the registry accessors so built-ins are present even when this
// translation unit has no other referenced symbol.
void ensure_builtin_models() {
    static const bool once = [] {
        register_model("cstr4", [] { return cstr4::discretize_rk4(cstr4::kDefaultDt); });
        register_model("cstr4-normalized",
                       [] { return cstr4::discretize_rk4_normalized(cstr4::kDefaultDt); });
        return true;
    }();
    (void)once;
}

} // namespace dsape
