#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "grt/parallel.hpp"

namespace {

using grt::app::ExitCode;

struct Options {
  std::string config;
  std::string out;
  unsigned threads = 1;
  bool plot = false;
  std::string input;
};

void add_common(CLI::App &cmd, Options &o) {
  cmd.add_option("--config", o.config, "experiment config file")->required();
  cmd.add_option("--out", o.out, "output directory (overrides output.dir)");
  cmd.add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 1024u));
  cmd.add_flag("--plot", o.plot, "also write SVG plots");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Generalized Radon transform edge experiments"};
  app.require_subcommand(1);
  Options o;

  CLI::App *simulate = app.add_subcommand("simulate", "synthesize coarse data of the disk phantom");
  CLI::App *reconstruct = app.add_subcommand("reconstruct", "upsample data and solve");
  CLI::App *predict = app.add_subcommand("predict", "tangencies and predicted transition");
  CLI::App *compare = app.add_subcommand("compare", "profile of a reconstruction vs prediction");
  CLI::App *run = app.add_subcommand("run", "simulate, reconstruct, predict and compare");
  for (CLI::App *cmd : {simulate, reconstruct, predict, compare, run}) add_common(*cmd, o);
  reconstruct->add_option("--input", o.input, "coarse sinogram (default OUT/sinogram.bin)");
  compare->add_option("--image", o.input, "reconstructed image (default OUT/image.bin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::config_error);
  }

  const ExitCode code = grt::app::guarded(
      [&] {
        grt::set_thread_count(o.threads);
        const grt::app::ExperimentConfig cfg = grt::app::load_config(o.config);
        grt::app::RunOptions opt;
        opt.out_dir = o.out.empty() ? cfg.output_dir : o.out;
        opt.plot = o.plot;
        opt.log = &std::cout;
        namespace artifact = grt::app::artifact;

        if (simulate->parsed()) {
          grt::app::cmd_simulate(cfg, opt);
        } else if (reconstruct->parsed()) {
          const auto in = o.input.empty() ? opt.out_dir / artifact::sinogram
                                          : std::filesystem::path(o.input);
          if (!grt::app::cmd_reconstruct(cfg, opt, in).converged) return ExitCode::not_converged;
        } else if (predict->parsed()) {
          grt::app::cmd_predict(cfg, opt);
        } else if (compare->parsed()) {
          const auto in = o.input.empty() ? opt.out_dir / artifact::image
                                          : std::filesystem::path(o.input);
          grt::app::cmd_compare(cfg, opt, in);
        } else {
          return grt::app::cmd_run(cfg, opt);
        }
        return ExitCode::ok;
      },
      std::cerr);
  return static_cast<int>(code);
}
