#include <shelfguess/acceptance.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>

int main(int argc, char** argv) {
  const int count = static_cast<int>(shelfguess::acceptance_criteria().size());
  int first = 1, last = count;
  if (argc > 1) first = last = std::atoi(argv[1]);
  int failed = 0;
  for (int id = first; id <= last; ++id) {
    const auto r = shelfguess::run_criterion(id);
    std::printf("%s\n", r.line().c_str());
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d of %d criteria passed\n", last - first + 1 - failed, last - first + 1);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
