#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "mmt/runner.hpp"

int main(int argc, char** argv) {
  using mmt::runner::Options;
  CLI::App app{"Numerical companion for the fractional MMT model"};
  app.set_version_flag("--version", std::string(mmt::runner::artifact_version()));
  app.require_subcommand(1);

  Options opt;
  std::optional<double> assert_slope;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out_dir;

  auto common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) sub->add_option("--config", opt.config_path, "JSON config or a previous run manifest")->required();
    sub->add_option("--out-dir", out_dir, "output directory (default runs/<timestamp>)");
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--threads", threads, "worker threads (fallback: MMT_THREADS)")->check(CLI::PositiveNumber);
  };
  const std::pair<const char*, const char*> subs[] = {{"simulate", "integrate the model from a config"},
                                                      {"probe", "norm-inflation probe and slope fit"},
                                                      {"map", "well-posedness region chart"},
                                                      {"bench", "counting-bound estimate bench"}};
  for (auto [name, desc] : subs) {
    auto* sub = app.add_subcommand(name, desc);
    common(sub, true);
    if (std::string(name) == "probe")
      sub->add_option("--assert-slope", assert_slope, "exit 3 if |fitted - predicted| exceeds this")
          ->check(CLI::NonNegativeNumber);
  }
  auto* self = app.add_subcommand("selftest", "fast invariant suite");
  common(self, false);
  self->add_option("--inject-fault", opt.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : mmt::runner::kConfigError;
  }
  opt.command = app.get_subcommands().front()->get_name();
  opt.assert_slope = assert_slope;
  opt.seed = seed;
  opt.threads = threads;
  opt.out_dir = out_dir;
  return mmt::runner::run(opt, std::cout, std::cerr);
}
