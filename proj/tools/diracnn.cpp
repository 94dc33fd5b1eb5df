#include "diracnn/config.hpp"
#include "diracnn/driver.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> max_epochs;
  bool quiet = false;
};

void add_common(CLI::App *cmd, Overrides &o) {
  cmd->add_option("--config", o.config, "INI configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "override network.seed");
  cmd->add_option("--out", o.out, "override output.directory");
  cmd->add_option("--max-epochs", o.max_epochs, "override training.max_epochs")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("-q,--quiet", o.quiet, "only print the summary");
}

void stamp(const std::string &msg) {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  std::clog << std::put_time(&tm, "%H:%M:%S") << ' ' << msg << std::endl;
}

void print_summary(const nlohmann::json &doc) {
  std::cout << std::setprecision(12);
  for (const auto &row : doc["states"]) {
    const std::string name =
        row.contains("experiment") ? row["experiment"].get<std::string>()
                                   : row["state"].get<std::string>();
    std::cout << std::left << std::setw(26) << name;
    if (row.contains("error")) {
      std::cout << "failed: " << row["error"].get<std::string>() << '\n';
      continue;
    }
    std::cout << " epsilon " << row["epsilon"].get<double>();
    if (row.contains("relative_error")) {
      std::cout << "  rel.err " << std::setprecision(3)
                << row["relative_error"].get<double>() << std::setprecision(12);
    }
    if (row.contains("stop")) {
      std::cout << "  (" << row["stop"].get<std::string>() << ")";
    }
    std::cout << '\n';
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bound states of the radial Dirac equation from a neural "
               "network trial function"};
  app.require_subcommand(1);
  Overrides o;
  using Runner = nlohmann::json (*)(const diracnn::RunContext &);
  struct Command {
    const char *name;
    const char *help;
    Runner run;
  };
  const Command commands[] = {
      {"solve", "train one network per requested state", diracnn::run_solve},
      {"spectrum", "train every level below the Fermi energy",
       diracnn::run_spectrum},
      {"benchmark", "reference eigenvalues from the shift-invert solver",
       diracnn::run_benchmark},
      {"ablation", "architecture and loss comparisons on hydrogen",
       diracnn::run_ablation},
  };
  Runner chosen = nullptr;
  for (const Command &c : commands) {
    CLI::App *cmd = app.add_subcommand(c.name, c.help);
    add_common(cmd, o);
    cmd->callback([&chosen, run = c.run] { chosen = run; });
  }
  CLI11_PARSE(app, argc, argv);

  try {
    diracnn::RunContext ctx;
    ctx.config = diracnn::load_config(o.config);
    if (o.seed) {
      ctx.config.network.seed = *o.seed;
    }
    if (o.out) {
      ctx.config.output.directory = *o.out;
    }
    if (o.max_epochs) {
      ctx.config.training.max_epochs = *o.max_epochs;
    }
    diracnn::validate(ctx.config);
    ctx.out_dir = ctx.config.output.directory;
    if (!o.quiet) {
      ctx.log = stamp;
    }
    const nlohmann::json doc = chosen(ctx);
    print_summary(doc);
    std::cout << "wrote " << (ctx.out_dir / "energies.json").string() << '\n';
  } catch (const diracnn::ConfigError &e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
