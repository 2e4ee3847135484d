/* Copyright 2026 The elidar Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef ELIDAR_CLI_HPP_
#define ELIDAR_CLI_HPP_

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "elidar/sensor.hpp"

namespace elidar::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kDataError = 2,
  kInternalError = 3,
};

// Runs one subcommand. Summaries go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// ASCII PLY with gray color from intensity plus intensity and object_id
// properties.
std::string format_ply(const PointCloudFrame& frame);

}  // namespace elidar::cli

#endif  // ELIDAR_CLI_HPP_
