// Builds the NDDEF instance for an X3C input and solves both sides.

#include <iostream>

#include "ddfair/io.hpp"
#include "ddfair/search.hpp"

using namespace ddfair;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: x3c_reduction X3C.json\n";
    return 2;
  }
  try {
    const X3CInstance x3c = x3c_from_json(detail::read_json_file(argv[1]));
    const ReducedInstance reduced = reduce(x3c);
    const Profile profile = reduced_profile(reduced);
    std::cout << profile.agents.size() << " agents, " << profile.items.size() << " items\n";

    if (const auto cover = solve_x3c(x3c)) {
      std::cout << "cover:";
      for (std::size_t t : *cover) std::cout << " " << t;
      std::cout << "\n";
    } else {
      std::cout << "no cover\n";
    }
    if (const auto alloc = exists_allocation(profile.instance, {Criterion::ef, RelationKind::ndd})) {
      std::cout << allocation_to_json(profile, *alloc).dump(2) << "\n";
    } else {
      std::cout << "no NDDEF allocation\n";
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
