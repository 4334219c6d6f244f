// Command-line front end. Talks to the core exclusively through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cnsfv.h"

namespace {

void print_and_free(char* text) {
  if (!text) return;
  std::fputs(text, stdout);
  cns_free(text);
}

int report_failure(const char* what, cns_status st) {
  std::fprintf(stderr, "%s: %s\n", what, cns_last_error());
  return static_cast<int>(st);
}

struct ConfigHandle {
  cns_config* c = nullptr;
  ~ConfigHandle() { cns_config_destroy(c); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-volume chemotaxis-fluid simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<double> eps_list = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<int> sizes;
  double m_exponent = 2.0;

  CLI::App* cmd_run = app.add_subcommand("run", "advance a configured scenario");
  cmd_run->add_option("--config", config_path, "config file")->required();
  cmd_run->add_option("--out", out_dir, "output directory (overrides out.dir)");

  CLI::App* cmd_eps = app.add_subcommand(
      "eps-study", "repeat a scenario across regularization strengths");
  cmd_eps->add_option("--config", config_path, "config file")->required();
  cmd_eps->add_option("--eps", eps_list, "non-increasing eps values")
      ->delimiter(',');
  cmd_eps->add_option("--out", out_dir, "output directory (overrides out.dir)");

  CLI::App* cmd_validate =
      app.add_subcommand("validate", "screen model assumptions");
  cmd_validate->add_option("--config", config_path, "config file")->required();

  CLI::App* cmd_mms =
      app.add_subcommand("mms", "order check against the series reference");
  cmd_mms->add_option("--sizes", sizes, "doubling grid sizes")
      ->delimiter(',')
      ->required();
  cmd_mms->add_option("--out", out_dir, "output directory");

  CLI::App* cmd_bb = app.add_subcommand(
      "barenblatt", "order check against the self-similar profile");
  cmd_bb->add_option("--m", m_exponent, "diffusion exponent (> 1)");
  cmd_bb->add_option("--sizes", sizes, "increasing grid sizes")
      ->delimiter(',')
      ->required();
  cmd_bb->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(CNS_ERROR_CONFIG);
  }

  if (cmd_run->parsed()) {
    ConfigHandle cfg;
    cns_status st = cns_config_load(config_path.c_str(), &cfg.c);
    if (st != CNS_OK) return report_failure("run", st);
    char* summary = nullptr;
    st = cns_run(cfg.c, out_dir.empty() ? nullptr : out_dir.c_str(), &summary);
    if (st != CNS_OK) return report_failure("run", st);
    print_and_free(summary);
    return 0;
  }

  if (cmd_eps->parsed()) {
    ConfigHandle cfg;
    cns_status st = cns_config_load(config_path.c_str(), &cfg.c);
    if (st != CNS_OK) return report_failure("eps-study", st);
    char* report = nullptr;
    int pass = 0;
    st = cns_eps_study(cfg.c, eps_list.data(),
                       static_cast<int>(eps_list.size()),
                       out_dir.empty() ? nullptr : out_dir.c_str(), &report,
                       &pass);
    if (st != CNS_OK) return report_failure("eps-study", st);
    print_and_free(report);
    return pass ? 0 : static_cast<int>(CNS_ERROR_INVARIANT);
  }

  if (cmd_validate->parsed()) {
    ConfigHandle cfg;
    cns_status st = cns_config_load(config_path.c_str(), &cfg.c);
    if (st != CNS_OK) return report_failure("validate", st);
    char* report = nullptr;
    int pass = 0;
    st = cns_validate(cfg.c, &report, &pass);
    if (st != CNS_OK) return report_failure("validate", st);
    print_and_free(report);
    return pass ? 0 : static_cast<int>(CNS_ERROR_CONFIG);
  }

  if (cmd_mms->parsed()) {
    char* report = nullptr;
    int pass = 0;
    cns_status st = cns_mms_study(sizes.data(), static_cast<int>(sizes.size()),
                                  out_dir.empty() ? nullptr : out_dir.c_str(),
                                  &report, &pass);
    if (st != CNS_OK) return report_failure("mms", st);
    print_and_free(report);
    return pass ? 0 : static_cast<int>(CNS_ERROR_INVARIANT);
  }

  if (cmd_bb->parsed()) {
    char* report = nullptr;
    int pass = 0;
    cns_status st = cns_barenblatt_study(
        m_exponent, sizes.data(), static_cast<int>(sizes.size()),
        out_dir.empty() ? nullptr : out_dir.c_str(), &report, &pass);
    if (st != CNS_OK) return report_failure("barenblatt", st);
    print_and_free(report);
    return pass ? 0 : static_cast<int>(CNS_ERROR_INVARIANT);
  }

  return 0;
}
