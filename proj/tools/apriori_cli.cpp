#include "apriori/commands.hpp"
#include "apriori/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"apriori: tree algebra, exact exponents and a priori bound experiments"};
  app.require_subcommand(1);
  apriori::CommandOptions opts;
  std::uint64_t seed = 0;
  for (const auto& name : apriori::command_names()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config, "JSON config")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opts.out, "output directory");
    sub->add_option("--threads", opts.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "base seed, overrides the config");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : apriori::io::kUsage;
  }
  CLI::App* sub = app.get_subcommands().front();
  if (sub->count("--seed")) opts.seed = seed;
  if (const char* level = std::getenv("APRIORI_LOG"); level && std::string(level) == "debug")
    std::cerr << "running " << sub->get_name() << " with config " << opts.config << "\n";
  return apriori::run_command(sub->get_name(), opts, std::cerr);
}
