// Compares {8,5} with {7,6} under one ranking of eight goods.

#include <cmath>
#include <iostream>

#include "ddfair/extensions.hpp"

using namespace ddfair;

int main() {
  const Ranking r = Ranking::descending(8);  // item i has level 8 - i
  MultiBundle x, y;
  x.add(r.at_level(8));
  x.add(r.at_level(5));
  y.add(r.at_level(7));
  y.add(r.at_level(6));

  for (RelationKind kind : {RelationKind::nec, RelationKind::ndd, RelationKind::pdd, RelationKind::pos}) {
    std::cout << "X " << to_string(kind) << " Y: " << (holds(kind, x, y, r) ? "yes" : "no") << "\n";
  }

  auto u = UtilityFunction<double>::from_levels(r, [](Level l) { return std::sqrt(double(l)); });
  std::cout << "sqrt levels: u(X) = " << utility_of(x, u) << ", u(Y) = " << utility_of(y, u) << "\n";
  if (const auto refuter = refuting_utility(RelationKind::nec, x, y, r)) {
    std::cout << "additive refuter of X nec Y: u(X) = " << utility_of(x, *refuter)
              << ", u(Y) = " << utility_of(y, *refuter) << "\n";
  }
}
