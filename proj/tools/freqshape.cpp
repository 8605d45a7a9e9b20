#include <CLI11.hpp>
#include <iostream>

#include "freqshape/errors.hpp"
#include "freqshape/figure_data.hpp"
#include "freqshape/run.hpp"

using freqshape::cli::ExitCode;

int main(int argc, char** argv) {
  CLI::App app{"Frequency-shaping control design for a grid-forming inverter and an aggregate machine", "freqshape"};
  app.set_version_flag("--version", freqshape::cli::kVersion);

  std::string mode_name;
  std::string config_path;
  std::string out_dir;
  std::string figure;
  app.add_option("mode", mode_name, "synth | certify | simulate | pareto | mismatch | sensitivity");
  app.add_option("--config", config_path, "run configuration file");
  app.add_option("--out", out_dir, "output directory (overrides output_dir)");
  auto* quote = app.add_option("--quote-figure", figure, "print a built-in reference table and exit");
  quote->check(CLI::IsMember(freqshape::figures::figure_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ExitCode::kOk : ExitCode::kValidationError;
  }

  if (!figure.empty()) {
    std::cout << freqshape::figures::figure_table(figure);
    return ExitCode::kOk;
  }
  try {
    if (mode_name.empty()) throw freqshape::InvalidParameter("a mode is required");
    if (config_path.empty()) throw freqshape::InvalidParameter("--config is required");
    const auto mode = freqshape::cli::parse_mode(mode_name);
    const auto config = freqshape::cli::load_config(config_path);
    return freqshape::cli::run(config, mode, out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir),
                               std::cout, std::cerr);
  } catch (const freqshape::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return ExitCode::kValidationError;
  }
}
