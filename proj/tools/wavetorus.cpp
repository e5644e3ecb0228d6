// wavetorus <command> --config path [--out dir] [--seed n]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wavetorus/cli.hpp"

namespace fs = std::filesystem;
using namespace wavetorus;

namespace {

// Field paths in a config are relative to the config file.
void resolve(std::optional<std::string>& path, const fs::path& base) {
  if (path && fs::path(*path).is_relative()) *path = (base / *path).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galerkin solver and verification harness for the periodic nonlinear wave equation"};
  app.set_version_flag("--version", std::string(cli::kVersion));
  std::string command, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  app.add_option("command", command, "solve | continue | multi | verify | norms | mms | linking")
      ->required()
      ->check(CLI::IsMember(cli::commands()));
  app.add_option("--config,-c", config_path, "JSON config file")->required();
  app.add_option("--out,-o", out_dir, "output directory (overrides config \"out\")");
  app.add_option("--seed", seed, "master seed (overrides config \"seed\")");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kConfigError;
  }

  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: Io: cannot open " << config_path << '\n';
    return cli::kConfigError;
  }
  std::stringstream text;
  text << in.rdbuf();

  cli::RunConfig cfg;
  try {
    std::string patched = text.str();
    if (seed) {
      auto doc = nlohmann::json::parse(patched);
      if (doc.is_object()) doc["seed"] = *seed;
      patched = doc.dump();
    }
    cfg = cli::parse_config(patched, command);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: ParseError: " << e.what() << '\n';
    return cli::kConfigError;
  }
  const fs::path base = fs::path(config_path).parent_path();
  resolve(cfg.initial, base);
  resolve(cfg.forcing, base);
  if (!cfg.norms.field.empty() && fs::path(cfg.norms.field).is_relative())
    cfg.norms.field = (base / cfg.norms.field).string();
  if (!out_dir.empty()) cfg.out_dir = out_dir;

  const int status = cli::run(cfg);
  std::cout << "wavetorus " << cfg.command << ": exit " << status << ", report in "
            << (fs::path(cfg.out_dir) / "report.json").string() << '\n';
  return status;
}
