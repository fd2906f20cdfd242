#include <cstdio>

#include "wost/io.hpp"
#include "wost/oracle.hpp"
#include "wost/queries.hpp"
#include "wost/scene_parse.hpp"
#include "wost/solver.hpp"
#include "wost/version.hpp"

int main() {
  std::printf("wost %s\n", wost::kVersion);
  return 0;
}
