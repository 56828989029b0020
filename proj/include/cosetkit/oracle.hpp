#pragma once

#include <optional>

#include "cosetkit/setexpr.hpp"

namespace cosetkit {

// Bounded evaluation window: exactly the ball enumeration point set.
struct Window {
  GroupCarrier carrier;
  Int radius;
};

// Brute-force comparison by direct AST evaluation at every window point, in
// enumeration order; reports the first disagreement. Deliberately independent
// of the normal-form machinery.
inline std::optional<GroupElement> compare_on_window(const SetExpr& a, const SetExpr& b,
                                                     const Window& w) {
  auto ca = a.carrier();
  auto cb = b.carrier();
  if (ca) require_same_carrier(*ca, w.carrier);
  if (cb) require_same_carrier(*cb, w.carrier);
  for (const GroupElement& g : enumerate_ball(w.carrier, w.radius))
    if (eval_membership(a, g) != eval_membership(b, g)) return g;
  return std::nullopt;
}

}  // namespace cosetkit
