#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "conley/errors.hpp"
#include "conley_cli/config.hpp"
#include "conley_cli/report.hpp"
#include "conley_cli/run.hpp"

int main(int argc, char** argv) {
  using namespace conley::cli;
  CLI::App app{"Conley indices of planar vector fields on cubical grids"};
  app.set_version_flag("--version", std::string(kVersion));
  std::string command;
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  app.add_option("command", command, "block | index | winding | morse | verify | orbits | scan")
      ->required()
      ->check(CLI::IsMember({"block", "index", "winding", "morse", "verify", "orbits", "scan"}));
  app.add_option("--config", config_path, "INI run configuration")->required();
  app.add_option("--out", out_path, "report file; CSV exports go beside it");
  app.add_option("--format", format, "json | text")->check(CLI::IsMember({"json", "text"}));
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const RunConfig config = load_config(config_path);
    std::optional<std::filesystem::path> csv_dir;
    if (!out_path.empty()) {
      csv_dir = std::filesystem::absolute(out_path).parent_path();
    }
    const RunOutcome outcome = run(config, parse_command(command), csv_dir);
    const Format fmt = format == "text" ? Format::Text : Format::Json;
    if (out_path.empty()) {
      emit(outcome.report, fmt, std::cout);
    } else {
      std::ofstream out(out_path);
      if (!out) throw conley::IoError("cannot write " + out_path);
      emit(outcome.report, fmt, out);
    }
    return outcome.exit_code;
  } catch (const conley::Error& e) {
    std::cerr << "error: " << e.kind() << ": " << e.what() << '\n';
    return 2;
  }
}
