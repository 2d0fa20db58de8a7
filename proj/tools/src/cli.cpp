#include "qreading/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qreading/error.hpp"

namespace qreading::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int parse_positive_int(const std::string& text, const char* what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || value < 1) {
    throw UsageError(std::string(what) + " must be a positive integer, got '" + text + "'");
  }
  return value;
}

double parse_real(const std::string& text, const char* what) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw UsageError(std::string(what) + " must be a number, got '" + text + "'");
  }
  return value;
}

// name:start:stop:points
sweep::Axis parse_axis(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream in(text);
  for (std::string part; std::getline(in, part, ':');) parts.push_back(part);
  if (parts.size() != 4) {
    throw UsageError("--axis expects name:start:stop:points, got '" + text + "'");
  }
  return sweep::Axis::linear(sweep::parse_parameter(parts[0]), parse_real(parts[1], "axis start"),
                             parse_real(parts[2], "axis stop"),
                             parse_positive_int(parts[3], "axis points"));
}

struct CommonFlags {
  std::optional<double> kappa0;
  std::optional<double> kappa1;
  std::optional<double> prior;
  std::optional<double> photons;
  std::optional<int> cutoff;
  std::string grid;
  std::optional<int> threads;
  std::string out;
  std::string format = "csv";
  bool timing = false;
};

void add_common(CLI::App& app, CommonFlags& f) {
  app.add_option("--kappa0", f.kappa0, "reflectivity of channel 0");
  app.add_option("--kappa1", f.kappa1, "reflectivity of channel 1");
  app.add_option("--prior", f.prior, "prior probability of channel 0 (default 0.5)");
  app.add_option("--photons", f.photons, "mean signal photons per cell");
  app.add_option("--cutoff", f.cutoff, "Fock cutoff (disables automatic growth)");
  app.add_option("--grid", f.grid, "grid points: N or NxM");
  app.add_option("--threads", f.threads, "worker threads (default: QREADING_THREADS or hardware)");
  app.add_option("--out", f.out, "output file (default: stdout)");
  app.add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_flag("--timing", f.timing, "record wall time in the metadata (output is then not reproducible)");
}

std::optional<fock::FockCutoff> cutoff_of(const CommonFlags& f) {
  if (!f.cutoff) return std::nullopt;
  if (*f.cutoff < 2) throw UsageError("--cutoff must be at least 2");
  return fock::FockCutoff(*f.cutoff);
}

int threads_of(const CommonFlags& f) {
  if (!f.threads) return default_threads();
  if (*f.threads < 1) throw UsageError("--threads must be at least 1");
  return *f.threads;
}

std::string format_seconds(double seconds) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.3f", seconds);
  return buffer;
}

void emit(const sweep::Report& report, const CommonFlags& f, std::ostream& out) {
  auto write = [&](std::ostream& s) {
    if (f.format == "json") {
      write_json(s, report);
    } else {
      sweep::write_csv(s, report);
    }
  };
  if (f.out.empty()) {
    write(out);
    return;
  }
  std::ofstream file(f.out, std::ios::binary);
  if (!file) throw UsageError("cannot open '" + f.out + "' for writing");
  write(file);
  if (!file) throw UsageError("failed writing '" + f.out + "'");
}

}  // namespace

std::vector<int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) return {parse_positive_int(text, "--grid")};
  return {parse_positive_int(text.substr(0, x), "--grid"),
          parse_positive_int(text.substr(x + 1), "--grid")};
}

int default_threads() {
  if (const char* env = std::getenv("QREADING_THREADS"); env && *env) {
    return parse_positive_int(env, "QREADING_THREADS");
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void write_json(std::ostream& out, const sweep::Report& report) {
  nlohmann::ordered_json doc;
  doc["meta"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : report.meta) doc["meta"][key] = value;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& table : report.tables) {
    for (const auto& row : table.rows) {
      nlohmann::ordered_json r;
      r["table"] = table.name;
      for (std::size_t c = 0; c < row.size(); ++c) {
        // Round through the 9-digit text so JSON and CSV carry the same values.
        r[table.columns[c]] = std::stod(sweep::format_number(row[c]));
      }
      doc["rows"].push_back(std::move(r));
    }
  }
  out << doc.dump(1) << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum reading capacities of pure-loss optical memories", "qreading"};
  app.require_subcommand(1);

  CommonFlags cap_flags;
  std::vector<std::string> cap_quantities;
  int cap_copies = 1;
  auto* capacity = app.add_subcommand("capacity", "evaluate quantities at one point");
  add_common(*capacity, cap_flags);
  capacity->add_option("--quantity", cap_quantities, "quantity names (repeatable or comma separated)")
      ->delimiter(',');
  capacity->add_option("--copies", cap_copies, "TMSV copies s for theta-s and q")->capture_default_str();
  bool list_quantities = false;
  capacity->add_flag("--list-quantities", list_quantities, "print the known quantity names");

  CommonFlags fig_flags;
  std::string fig_name;
  auto* fig = app.add_subcommand("fig", "reproduce a figure table (fig4 ... fig9)");
  add_common(*fig, fig_flags);
  fig->add_option("name", fig_name, "figure name")->required();

  CommonFlags sweep_flags;
  std::vector<std::string> sweep_axes;
  std::vector<std::string> sweep_quantities;
  int sweep_copies = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "evaluate quantities over a 1-D or 2-D grid");
  add_common(*sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--axis", sweep_axes, "axis as name:start:stop:points (one or two)")
      ->required();
  sweep_cmd->add_option("--quantity", sweep_quantities, "quantity names")->delimiter(',')->required();
  sweep_cmd->add_option("--copies", sweep_copies, "TMSV copies s for theta-s and q")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    sweep::Report report;
    const CommonFlags* flags = nullptr;

    if (capacity->parsed()) {
      flags = &cap_flags;
      if (list_quantities) {
        for (const auto& q : sweep::quantity_catalog()) out << q.name << "\t" << q.description << '\n';
        return kExitOk;
      }
      if (!cap_flags.kappa0 || !cap_flags.kappa1) throw UsageError("capacity needs --kappa0 and --kappa1");
      if (!cap_flags.grid.empty()) throw UsageError("--grid does not apply to capacity");
      sweep::Point p;
      p.kappa0 = *cap_flags.kappa0;
      p.kappa1 = *cap_flags.kappa1;
      p.prior = cap_flags.prior.value_or(0.5);
      p.photons = cap_flags.photons.value_or(1.0);
      p.copies = cap_copies;
      p.cutoff = cutoff_of(cap_flags);
      report = sweep::run_capacity(p, cap_quantities);
    } else if (fig->parsed()) {
      flags = &fig_flags;
      sweep::FigureOptions o;
      o.kappa0 = fig_flags.kappa0;
      o.kappa1 = fig_flags.kappa1;
      o.prior = fig_flags.prior;
      o.photons = fig_flags.photons;
      if (!fig_flags.grid.empty()) o.grid = parse_grid(fig_flags.grid);
      o.cutoff = cutoff_of(fig_flags);
      report = sweep::run_figure(fig_name, o, threads_of(fig_flags));
    } else {
      flags = &sweep_flags;
      sweep::SweepSpec spec;
      for (const auto& a : sweep_axes) spec.axes.push_back(parse_axis(a));
      if (!sweep_flags.grid.empty()) {
        const auto g = parse_grid(sweep_flags.grid);
        if (g.size() != 1 && g.size() != spec.axes.size()) {
          throw UsageError("--grid must give one count or one per axis");
        }
        for (std::size_t i = 0; i < spec.axes.size(); ++i) {
          const auto& v = spec.axes[i].values();
          spec.axes[i] = sweep::Axis::linear(spec.axes[i].parameter(), v.front(), v.back(),
                                             g.size() == 1 ? g[0] : g[i]);
        }
      }
      if (sweep_flags.kappa0) spec.fixed.kappa0 = *sweep_flags.kappa0;
      if (sweep_flags.kappa1) spec.fixed.kappa1 = *sweep_flags.kappa1;
      spec.fixed.prior = sweep_flags.prior.value_or(0.5);
      if (sweep_flags.photons) spec.fixed.photons = *sweep_flags.photons;
      spec.fixed.copies = sweep_copies;
      spec.fixed.cutoff = cutoff_of(sweep_flags);
      spec.quantities = sweep_quantities;
      report = sweep::run_sweep(spec, threads_of(sweep_flags));
    }

    if (flags->timing) {
      const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
      report.meta.emplace_back("wall_time_s", format_seconds(elapsed.count()));
    }
    emit(report, *flags, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "qreading: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CutoffError& e) {
    err << "qreading: cutoff failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const NumericalError& e) {
    err << "qreading: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::logic_error& e) {
    // DomainError and DimensionError: invalid parameters.
    err << "qreading: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "qreading: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace qreading::cli
