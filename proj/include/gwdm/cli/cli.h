// Copyright 2026 The GuessWhat-DM Authors
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

#ifndef GWDM_CLI_CLI_H_
#define GWDM_CLI_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace gwdm {

// Runs one command line (without the program name). Returns the process exit
// code: 0 success, 1 usage, 2 data error, 3 numeric failure.
int RunCli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
           std::ostream& err);

}  // namespace gwdm

#endif  // GWDM_CLI_CLI_H_
