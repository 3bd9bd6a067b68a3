#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kirchhoff.h"

namespace {

constexpr int kExitConfig = 2;

struct Flags {
  std::string config;
  std::string out;
  unsigned jobs = 0;
  long long seed = -1;
};

void add_flags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "JSON experiment config")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", flags.out, "report path; tables go next to it as .csv");
  cmd->add_option("--jobs", flags.jobs, "worker threads for independent solves")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "seed for randomized starts")->check(CLI::NonNegativeNumber);
}

bool write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  return static_cast<bool>(os);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational toolkit for the critical Kirchhoff problem"};
  app.set_version_flag("--version", std::string(kh_version()));
  app.require_subcommand(1, 1);
  Flags flags;
  for (const char* name : {"thresholds", "bubble-check", "solve", "continuation", "scan-lambda"}) {
    add_flags(app.add_subcommand(name), flags);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::ifstream in(flags.config, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (!in) {
    std::cerr << "error: cannot read " << flags.config << "\n";
    return kExitConfig;
  }

  kh_run_options options{command.c_str(), flags.jobs, flags.seed >= 0 ? 1 : 0,
                         static_cast<uint64_t>(flags.seed >= 0 ? flags.seed : 0)};
  kh_report* report = nullptr;
  const kh_status status = kh_run_config(buffer.str().c_str(), &options, &report);
  if (report == nullptr) {
    std::cerr << "error: " << kh_status_name(status) << ": " << kh_last_error() << "\n";
    return kExitConfig;
  }

  const std::string json = std::string(kh_report_json(report)) + "\n";
  const std::string csv = kh_report_csv(report);
  const int code = kh_report_exit_code(report);
  kh_report_destroy(report);

  // --out wins over the config's "output" key.
  if (flags.out.empty()) {
    const auto echo = nlohmann::json::parse(json);
    if (echo.contains("config") && echo["config"].value("output", "") != "") flags.out = echo["config"]["output"];
  }
  if (flags.out.empty()) {
    std::cout << json;
  } else {
    std::filesystem::path out(flags.out);
    if (!write_file(out, json)) {
      std::cerr << "error: cannot write " << flags.out << "\n";
      return kExitConfig;
    }
    if (!csv.empty()) {
      std::filesystem::path table = out;
      table.replace_extension(".csv");
      if (!write_file(table, csv)) {
        std::cerr << "error: cannot write " << table << "\n";
        return kExitConfig;
      }
    }
  }
  if (status != KH_OK) std::cerr << "error: " << kh_status_name(status) << ": " << kh_last_error() << "\n";
  return code;
}
