// Command-line front end: one subcommand per operation, parameters taken
// from --key value flags and/or a --config file (flags win), deterministic
// result files in an output directory. Exit codes: 0 success, 2 config
// error, 3 numerical failure, 4 I/O error.

#include <cstdio>
#include <list>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "bosegas/cli.hpp"

namespace {

void emit_error(const char* category, const std::string& message, int code) {
  bosegas::io::JsonNode node = bosegas::io::JsonNode::object();
  bosegas::io::JsonNode error = bosegas::io::JsonNode::object();
  error["category"] = category;
  error["message"] = message;
  node["error"] = std::move(error);
  node["exit_code"] = code;
  std::fputs(node.dump().c_str(), stderr);
}

struct Leaf {
  const bosegas::cli::CommandSchema* schema = nullptr;
  CLI::App* app = nullptr;
  std::map<std::string, std::string> storage;
  std::map<std::string, CLI::Option*> options;
};

}  // namespace

int main(int argc, char** argv) {
  using bosegas::cli::CommandSchema;

  CLI::App app{"Bose gas toolkit: scattering lengths, condensation, "
               "Gross-Pitaevskii states and dynamics, Bogoliubov spectra, "
               "and exact Fock-space oracles."};
  app.require_subcommand(0, 1);

  std::string config_path;
  std::string out_dir;
  const auto add_common = [&](CLI::App* host) {
    host->add_option("--config", config_path,
                     "config file (JSON object or key=value lines)");
    host->add_option("--out", out_dir, "output directory (overrides all)");
  };
  add_common(&app);

  std::map<std::string, CLI::App*> parents;
  std::list<Leaf> leaves;
  for (const CommandSchema& schema : bosegas::cli::schemas()) {
    CLI::App* host = nullptr;
    if (schema.action.empty()) {
      host = app.add_subcommand(schema.command, schema.help);
    } else {
      CLI::App*& parent = parents[schema.command];
      if (parent == nullptr) {
        parent = app.add_subcommand(schema.command, schema.command + " operations");
        parent->require_subcommand(0, 1);
        add_common(parent);
      }
      host = parent->add_subcommand(schema.action, schema.help);
    }
    add_common(host);
    Leaf& leaf = leaves.emplace_back();
    leaf.schema = &schema;
    leaf.app = host;
    for (const auto& param : schema.params)
      leaf.options[param.name] =
          host->add_option("--" + param.name, leaf.storage[param.name], param.help);
  }

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      throw bosegas::ValidationError(e.what());
    }

    bosegas::cli::RunConfig config;
    if (!config_path.empty()) config = bosegas::cli::parse_config(config_path);

    const Leaf* parsed = nullptr;
    for (const Leaf& leaf : leaves)
      if (leaf.app->parsed()) parsed = &leaf;
    if (parsed != nullptr) {
      if (!config.command.empty() &&
          (config.command != parsed->schema->command ||
           (!config.action.empty() && config.action != parsed->schema->action)))
        throw bosegas::ValidationError(
            "config file names command '" + config.command +
            (config.action.empty() ? "" : " " + config.action) +
            "' but the command line selected '" + parsed->schema->command +
            (parsed->schema->action.empty() ? ""
                                            : " " + parsed->schema->action) +
            "'");
      config.command = parsed->schema->command;
      config.action = parsed->schema->action;
      for (const auto& [name, option] : parsed->options)
        if (option->count() > 0) config.values[name] = parsed->storage.at(name);
    }
    if (config.command.empty())
      throw bosegas::ValidationError(
          "no command selected: give a subcommand or a config file with a "
          "'command' key (see --help)");

    const auto outcome = bosegas::cli::run(config, out_dir);
    std::printf("wrote %s (%zu files)\n", outcome.output_dir.string().c_str(),
                outcome.files.size());
    return 0;
  } catch (const bosegas::IoError& e) {
    emit_error("io", e.what(), 4);
    return 4;
  } catch (const bosegas::ConfigError& e) {
    emit_error("config", e.what(), 2);
    return 2;
  } catch (const bosegas::NumericalError& e) {
    emit_error("numerical", e.what(), 3);
    return 3;
  } catch (const std::exception& e) {
    emit_error("internal", e.what(), 1);
    return 1;
  }
}
