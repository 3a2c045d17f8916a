// Reference solver for the wire protocol: answers every query in closed form
// on the ellipsoid with the given semi-axes (all 1 for the unit sphere).
//
//   mkfifo link
//   hyperbox serve --start-box box.json --out points.csv < link | hyperbox-quadric-solver 1 1 1 > link

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <hyperbox/protocol.hpp>
#include <hyperbox/scalarization.hpp>

int main(int argc, char** argv) {
  std::vector<double> axes;
  for (int i = 1; i < argc; ++i) {
    char* end = nullptr;
    const double value = std::strtod(argv[i], &end);
    if (end == argv[i] || *end != '\0' || !(value > 0.0)) {
      std::cerr << "usage: hyperbox-quadric-solver AXIS AXIS [AXIS...]\n";
      return 2;
    }
    axes.push_back(value);
  }
  if (axes.size() < 2) {
    std::cerr << "usage: hyperbox-quadric-solver AXIS AXIS [AXIS...]\n";
    return 2;
  }

  std::string line;
  try {
    while (std::getline(std::cin, line)) {
      const auto query = hyperbox::protocol::decode_query(line);
      if (!query) return 0;
      if (query->p.size() != axes.size()) throw hyperbox::ProtocolError("query dimension does not match the axes");
      try {
        std::cout << hyperbox::protocol::encode_solution(hyperbox::solve_quadric_ps(*query, axes)) << '\n';
      } catch (const hyperbox::NoIntersection&) {
        std::cout << hyperbox::protocol::encode_no_intersection(query->query_id) << '\n';
      }
      std::cout.flush();
    }
  } catch (const std::exception& e) {
    std::cerr << "solver: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
