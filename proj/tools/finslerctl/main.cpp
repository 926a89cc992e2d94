#include <iostream>

#include "app.hpp"
#include "finsler/parallel.hpp"

int main(int argc, char** argv) {
  finsler::set_thread_count(finsler::default_thread_count());
  std::vector<std::string> args(argv + 1, argv + argc);
  return finslerctl::run(args, std::cout, std::cerr);
}
