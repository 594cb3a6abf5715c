// Copyright 2026 The permball Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. With arguments, runs only the named criteria.

#include <iostream>
#include <set>
#include <string>

#include "permball/verify.hpp"

int main(int argc, char** argv) {
  std::set<std::string> wanted(argv + 1, argv + argc);
  int failures = 0;
  int ran = 0;
  for (const auto& check : permball::acceptance_checks()) {
    if (!wanted.empty() && !wanted.count(check.name)) continue;
    const permball::CheckReport rep = permball::run_check(check);
    std::cout << permball::format_report_line(rep) << std::endl;
    failures += rep.passed ? 0 : 1;
    ++ran;
  }
  if (ran == 0) {
    std::cerr << "no criterion matched\n";
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
