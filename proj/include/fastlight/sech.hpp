#pragma once

#include <cmath>

namespace fastlight {

/// sech(u) without overflow in the tails.
template <typename Scalar>
Scalar sech(Scalar u) {
  using std::abs;
  using std::exp;
  const Scalar e = exp(-abs(u));
  return Scalar(2) * e / (Scalar(1) + e * e);
}

}  // namespace fastlight
