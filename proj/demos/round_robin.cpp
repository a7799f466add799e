#include <iostream>

#include "ddfair/fairness.hpp"
#include "ddfair/io.hpp"
#include "ddfair/protocols.hpp"

using namespace ddfair;

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: round_robin PROFILE.json\n";
    return 2;
  }
  try {
    const Profile profile = read_profile(argv[1]);
    const ExistenceReport report = nddpr_exists(profile.instance);
    if (report.exists != Existence::yes) {
      std::cout << "no NDDPR allocation\n";
      return 1;
    }
    const Allocation alloc = balanced_round_robin(profile.instance);
    for (std::size_t i = 0; i < alloc.agent_count(); ++i) {
      std::cout << profile.agents[i] << ": " << format_bundle(profile, alloc.bundle(i)) << "\n";
    }
    const bool ok = check_proportional(alloc, profile.instance, RelationKind::ndd).result;
    std::cout << "NDDPR: " << (ok ? "yes" : "no") << "\n";
    return ok ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
