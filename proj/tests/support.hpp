#pragma once

#include <doctest.h>

#include <ostream>

#include "gradcalc/render.hpp"
#include "gradcalc/tensor.hpp"

namespace gradcalc {

// doctest prints these on failure
inline std::ostream& operator<<(std::ostream& os, const TensorField& t) {
  return os << (t.chart().valid() ? render_tensor(t) : std::string("<no chart>"));
}
inline std::ostream& operator<<(std::ostream& os, const Degree& d) { return os << d.to_string(); }

}  // namespace gradcalc

namespace testing {

using namespace gradcalc;

inline Chart plane(std::string label = "R2") { return make_chart({"x", "y"}, {{0}, {0}}, {}, std::move(label)); }
inline Chart space(std::string label = "R3") {
  return make_chart({"x", "y", "z"}, {{0}, {0}, {0}}, {}, std::move(label));
}
/// {x:0, y:1, z:2}
inline Chart graded3() { return make_chart({"x", "y", "z"}, {{0}, {1}, {2}}, {}, "F"); }

inline TensorField vf(const Chart& c, std::initializer_list<std::pair<const char*, Poly>> parts) {
  TensorField t(c, 1, 0);
  for (const auto& [n, f] : parts) t.add({c.at(n).index}, f);
  return t;
}
inline TensorField d_(const Chart& c, const char* n) { return TensorField::vector_basis(c, c.at(n)); }
inline TensorField dx_(const Chart& c, const char* n) { return TensorField::covector_basis(c, c.at(n)); }
inline TensorField fn(const Chart& c, const Poly& f) { return TensorField::scalar(c, f); }

}  // namespace testing
