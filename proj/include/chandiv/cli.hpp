// Copyright 2026 The chandiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CHANDIV_CLI_HPP_
#define CHANDIV_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace chandiv::cli {

/// Runs the command-line front end.  Standard output carries only JSON;
/// diagnostics go to err.  Exit codes: 0 success, 1 input error,
/// 2 numerical failure or non-convergence, 3 verification violations.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in);

}  // namespace chandiv::cli

#endif  // CHANDIV_CLI_HPP_
