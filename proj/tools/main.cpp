#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "quadcover/commands.hpp"

namespace {

using quadcover::cli::Json;

int exit_code_for(const std::exception& e) {
  using namespace quadcover;
  if (dynamic_cast<const ParseError*>(&e)) return 2;
  if (dynamic_cast<const ValidationError*>(&e)) return 3;
  if (dynamic_cast<const NonConvexError*>(&e) || dynamic_cast<const DegenerateError*>(&e) ||
      dynamic_cast<const SingularMapError*>(&e) || dynamic_cast<const OutOfRangeError*>(&e) ||
      dynamic_cast<const NotAnEllipseError*>(&e) || dynamic_cast<const EmptyConicError*>(&e) ||
      dynamic_cast<const NoEllipseRootError*>(&e) || dynamic_cast<const InvalidAxesError*>(&e))
    return 4;
  if (dynamic_cast<const EmptyFeasibleSetError*>(&e) ||
      dynamic_cast<const NonPositiveRateError*>(&e))
    return 5;
  if (dynamic_cast<const Error*>(&e)) return 6;
  return 1;
}

void emit(const Json& report, const std::string& out_path, const std::string& format) {
  std::string payload;
  if (format == "csv") payload = quadcover::cli::flatten_csv(report);
  else payload = report.dump(2) + "\n";

  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw quadcover::ValidationError("cannot open output file '" + out_path + "'");
  out << payload;
  std::cout << quadcover::cli::human_summary(report);
  std::cout << "wrote " << out_path << "\n";
}

void emit_text(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw quadcover::ValidationError("cannot open output file '" + out_path + "'");
  out << payload;
  std::cout << "wrote " << out_path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UAV elliptical coverage planning for convex quadrilateral regions"};
  app.require_subcommand(1);

  std::string config, out_path, env_override;
  std::string mode_str = "inscribed", objective_str = "pathloss", format = "json";
  double h_min = 10.0, h_max = 1000.0;
  int steps = 100;

  const auto add_common = [&](CLI::App* cmd, bool with_mode) {
    cmd->add_option("--config", config, "scenario file")->required();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
    cmd->add_option("--env", env_override,
                    "environment preset override (suburban, urban, dense-urban, highrise-urban)");
    if (with_mode)
      cmd->add_option("--mode", mode_str, "inscribed | circumscribed")
          ->check(CLI::IsMember({"inscribed", "circumscribed"}));
  };

  CLI::App* ellipse = app.add_subcommand("ellipse", "footprint ellipse report");
  add_common(ellipse, true);
  ellipse->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* altitude = app.add_subcommand("altitude", "optimal altitude for one objective");
  add_common(altitude, true);
  altitude->add_option("--objective", objective_str, "pathloss | snr | energy")
      ->check(CLI::IsMember({"pathloss", "snr", "energy"}));
  altitude->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* sweep = app.add_subcommand("sweep", "altitude sweep for plotting");
  add_common(sweep, true);
  sweep->add_option("--objective", objective_str,
                    "accepted for interface compatibility; all columns are emitted");
  sweep->add_option("--h-min", h_min, "sweep start altitude (m)");
  sweep->add_option("--h-max", h_max, "sweep end altitude (m)");
  sweep->add_option("--steps", steps, "number of rows");
  std::string sweep_format = "csv";
  sweep->add_option("--format", sweep_format, "csv | json")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* report = app.add_subcommand("report", "consolidated scenario report");
  add_common(report, false);

  CLI11_PARSE(app, argc, argv);

  try {
    quadcover::cli::Scenario sc = quadcover::cli::load_scenario(config);
    if (!env_override.empty()) {
      sc.env = quadcover::channel::environment_preset(env_override);
      sc.environment_source = "preset:" + sc.env.name;
    }

    if (ellipse->parsed()) {
      emit(quadcover::cli::ellipse_report(sc, quadcover::cli::mode_from_string(mode_str)),
           out_path, format);
    } else if (altitude->parsed()) {
      emit(quadcover::cli::altitude_report(sc, quadcover::cli::objective_from_string(objective_str),
                                           quadcover::cli::mode_from_string(mode_str)),
           out_path, format);
    } else if (sweep->parsed()) {
      const auto mode = quadcover::cli::mode_from_string(mode_str);
      if (sweep_format == "json")
        emit(quadcover::cli::sweep_json(sc, mode, h_min, h_max, steps), out_path, "json");
      else
        emit_text(quadcover::cli::sweep_csv(sc, mode, h_min, h_max, steps), out_path);
    } else if (report->parsed()) {
      const Json j = quadcover::cli::full_report(sc);
      if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw quadcover::ValidationError("cannot open output file '" + out_path + "'");
        out << j.dump(2) << "\n";
        std::cout << quadcover::cli::human_summary(j);
        std::cout << "wrote " << out_path << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
