// Copyright 2026 The qarb Authors
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

// qarb <command> --config <path> [--seed S] [--out DIR] [--override key=value]...
//
// Exit status: 0 all checks passed, 1 a check failed, 2 usage or config
// error, 3 any other error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qarb.h"

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitError = 3;

const char* const kCommands[] = {"encode", "bounds",        "table1",   "attack",
                                 "defend", "risk", "concentration", "audit-all"};

int report_error(qarb_status status) {
  std::cerr << "qarb: " << qarb_last_error_message() << '\n';
  return status == QARB_ERR_CONFIG || status == QARB_ERR_ARGUMENT ? kExitUsage
                                                                  : kExitError;
}

bool apply(std::string& config, const std::string& assignment, qarb_status& status) {
  char* out = nullptr;
  status = qarb_config_override(config.c_str(), assignment.c_str(), &out);
  if (status != QARB_OK) return false;
  config = out;
  qarb_string_free(out);
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adversarial-robustness bounds and audits for quantum classifiers"};
  app.set_version_flag("--version", std::string(qarb_version()));
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  std::vector<std::string> overrides;
  app.add_option("command", command, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(std::vector<std::string>(std::begin(kCommands), std::end(kCommands))));
  app.add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Root seed; overrides the config");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--override", overrides, "key=value applied after the config file")
      ->allow_extra_args(false);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "qarb: cannot read config '" << config_path << "'\n";
    return kExitUsage;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  std::string config = buf.str();

  qarb_status status = QARB_OK;
  // Flags win over the file: command and seed are applied last.
  for (const std::string& o : overrides) {
    if (!apply(config, o, status)) return report_error(status);
  }
  if (!apply(config, "command=\"" + command + "\"", status)) return report_error(status);
  if (seed && !apply(config, "seed=" + std::to_string(*seed), status)) {
    return report_error(status);
  }

  char* report = nullptr;
  int all_passed = 0;
  status = qarb_run_experiment(config.c_str(), out_dir.c_str(), &report, &all_passed);
  if (status != QARB_OK) return report_error(status);
  qarb_string_free(report);

  std::ifstream text(out_dir + "/report.txt");
  std::cout << text.rdbuf();
  return all_passed ? 0 : kExitCheckFailed;
}
