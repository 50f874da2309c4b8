#pragma once

// Canonical ASCII text for polynomials and tensors.
//
//   x*d/dy + x_1*d/dy_1          vector field
//   (x + y)*dx ^^ dy             antisymmetric block
//   x*y*d/dy ox dx               mixed valence
//
// Symmetric blocks are written out in full as ox products.

#include <string>

#include "gradcalc/tensor.hpp"

namespace gradcalc {

std::string render_poly(const Poly& f, const Chart& chart);
std::string render_tensor(const TensorField& k);
std::string render_degree(const Degree& d);
std::string symmetry_name(Symmetry s);

}  // namespace gradcalc
