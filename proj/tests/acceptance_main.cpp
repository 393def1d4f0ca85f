#include <iostream>

#include "netbound/acceptance.hpp"

int main() {
  const auto results = netbound::acceptance::run_checks();
  netbound::acceptance::print_report(std::cout, results);
  return netbound::acceptance::all_passed(results) ? 0 : 1;
}
