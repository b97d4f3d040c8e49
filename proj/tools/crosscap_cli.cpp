#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "crosscap/analysis.hpp"

namespace {

using namespace crosscap;

struct Overrides {
  std::string map_file;
  std::optional<int> order;
  std::string point;
  std::string box;
  std::optional<int> grid;
  std::optional<double> tol_singular;
  std::optional<double> tol_symmetry;
  std::string out;
  std::vector<std::string> params;
  std::optional<double> span;
  std::optional<double> step;
  std::string motion = "T1";
};

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double x = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(x);
    } catch (const std::exception&) {
      throw InputError(flag + ": '" + item + "' is not a number");
    }
  }
  return out;
}

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--map", o.map_file, "request JSON file")->required();
  cmd->add_option("--order", o.order, "working jet order, 3..12");
  cmd->add_option("--point", o.point, "explicit singular point U,V");
  cmd->add_option("--box", o.box, "search box UMIN,UMAX,VMIN,VMAX");
  cmd->add_option("--grid", o.grid, "seed lattice or mesh resolution");
  cmd->add_option("--tol-singular", o.tol_singular, "singular residual tolerance");
  cmd->add_option("--tol-symmetry", o.tol_symmetry, "symmetry residual tolerance");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--param", o.params, "name=value or name=v1,v2,... (repeatable)");
}

AnalysisRequest build_request(const Overrides& o) {
  AnalysisRequest r = AnalysisRequest::from_file(o.map_file);
  if (o.order) r.order = *o.order;
  if (!o.point.empty()) {
    const auto p = parse_numbers(o.point, "--point");
    if (p.size() != 2) throw InputError("--point expects U,V");
    r.point = Eigen::Vector2d(p[0], p[1]);
  }
  if (!o.box.empty()) {
    const auto b = parse_numbers(o.box, "--box");
    if (b.size() != 4) throw InputError("--box expects UMIN,UMAX,VMIN,VMAX");
    r.box = SearchBox{b[0], b[1], b[2], b[3]};
  }
  if (o.grid) r.grid = *o.grid;
  if (o.tol_singular) r.tolerances.singular = *o.tol_singular;
  if (o.tol_symmetry) r.tolerances.symmetry = *o.tol_symmetry;
  for (const auto& p : o.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("--param expects name=value, got '" + p + "'");
    r.parameters[p.substr(0, eq)] = parse_numbers(p.substr(eq + 1), "--param " + p.substr(0, eq));
  }
  if (o.span) r.span = *o.span;
  if (o.step) r.step = *o.step;
  return r;
}

void emit(const Overrides& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot write '" + o.out + "'");
  f << text;
}

int fail(const Error& err, int code) {
  std::cerr << format_json(error_json(err));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cross cap normal forms, symmetry classification and double-point curves"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  Overrides o;

  CLI::App* analyze = app.add_subcommand("analyze", "full report per cross cap");
  CLI::App* classify = app.add_subcommand("classify", "symmetry verdicts and witnesses");
  CLI::App* transport = app.add_subcommand("transport", "normal form carried through a congruence motion");
  CLI::App* selfint = app.add_subcommand("selfint", "double-point curve as CSV");
  CLI::App* mesh = app.add_subcommand("mesh", "grid samples of the map as CSV");
  for (CLI::App* cmd : {analyze, classify, transport, selfint, mesh}) add_common(cmd, o);
  transport->add_option("--motion", o.motion, "T0, T1, T2 or T3");
  selfint->add_option("--span", o.span, "arc span per branch");
  selfint->add_option("--step", o.step, "continuation step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    const AnalysisRequest request = build_request(o);
    if (*mesh) {
      request.validate();
      const auto sweep = parameter_sweep(request);
      if (sweep.size() != 1) throw InputError("mesh needs a single parameter combination");
      emit(o, mesh_csv(map_for(request, sweep.front()), request.search_box(), request.grid));
      return 0;
    }
    if (*selfint) {
      try {
        emit(o, curve_to_csv(run_selfint(request)));
        return 0;
      } catch (const SeedFailure& err) {
        return fail(err, 2);
      } catch (const StepCollapse& err) {
        return fail(err, 2);
      }
    }
    const AnalysisReport report = run_analysis(request);
    if (*analyze) emit(o, format_json(report_json(report)));
    if (*classify) emit(o, format_json(classify_json(report)));
    if (*transport) {
      MotionTag tag;
      try {
        tag = motion_from_string(o.motion);
      } catch (const ContractViolation& err) {
        throw InputError(err.what());
      }
      emit(o, format_json(transport_json(report, tag)));
    }
    return report.exit_code();
  } catch (const Error& err) {
    return fail(err, 1);
  }
}
