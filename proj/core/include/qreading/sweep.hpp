#pragma once

// Grid evaluation of named quantities, the figure tables, and their text
// rendering. Results are independent of the number of worker threads: every
// grid point is a pure function of its coordinates and rows are stored by
// grid index.

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qreading/fock.hpp"

namespace qreading::sweep {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Coordinates of one evaluation.
struct Point {
  double kappa0 = 0.5;
  double kappa1 = 0.9;
  double prior = 0.5;
  double photons = 1.0;
  int copies = 1;  // s for the finite-copy EPR bounds
  std::optional<fock::FockCutoff> cutoff;
};

enum class Parameter { kKappa0, kKappa1, kPrior, kPhotons };

Parameter parse_parameter(std::string_view name);
std::string_view parameter_name(Parameter p);
void set_parameter(Point& point, Parameter p, double value);
double get_parameter(const Point& point, Parameter p);

struct QuantityInfo {
  std::string name;
  std::string description;
};

const std::vector<QuantityInfo>& quantity_catalog();
bool is_known_quantity(std::string_view name);

struct QuantityValue {
  double value = 0.0;
  std::optional<int> cutoff;  // Fock cutoff used, if any
};

/// Throws DomainError for an unknown name.
QuantityValue evaluate_quantity(std::string_view name, const Point& point);

class Axis {
 public:
  /// `points` evenly spaced values from start to stop inclusive.
  static Axis linear(Parameter parameter, double start, double stop, int points);
  static Axis listed(Parameter parameter, std::vector<double> values);

  Parameter parameter() const { return parameter_; }
  const std::vector<double>& values() const { return values_; }

 private:
  Axis(Parameter parameter, std::vector<double> values)
      : parameter_(parameter), values_(std::move(values)) {}

  Parameter parameter_;
  std::vector<double> values_;
};

struct SweepSpec {
  std::vector<Axis> axes;  // first axis varies slowest
  Point fixed;
  std::vector<std::string> quantities;

  /// 1 or 2 axes, at least 2 points each, every quantity known.
  void validate() const;
};

struct ResultTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<ResultTable> tables;
};

// One output column: header, quantity, and a scale applied to the photon
// number before evaluation (used for the strict-energy panel).
struct Column {
  std::string header;
  std::string quantity;
  double photon_scale = 1.0;
};

// A grid table: axes, fixed coordinates, an optional per-point adjustment
// (e.g. kappa0 tied to kappa1), and the columns to evaluate.
struct TableSpec {
  std::string name;
  std::vector<Axis> axes;
  Point fixed;
  std::function<void(Point&)> adjust;
  std::vector<Column> columns;
};

/// Evaluates the tables point by point on `threads` workers. Cutoff metadata
/// ("cutoff.<table>.<column>") records the largest Fock cutoff per column.
Report evaluate_tables(const std::vector<TableSpec>& tables, int threads);

Report run_sweep(const SweepSpec& spec, int threads);
Report run_capacity(const Point& point, const std::vector<std::string>& quantities);

struct FigureOptions {
  std::optional<double> kappa0;
  std::optional<double> kappa1;
  std::optional<double> prior;
  std::optional<double> photons;
  std::vector<int> grid;  // empty: defaults; one or two entries otherwise
  std::optional<fock::FockCutoff> cutoff;
};

const std::vector<std::string>& figure_names();
std::vector<TableSpec> figure_tables(std::string_view name, const FigureOptions& options);
Report run_figure(std::string_view name, const FigureOptions& options, int threads);

/// 9 significant digits, shortest of fixed/scientific (printf %.9g);
/// negative zero prints as 0.
std::string format_number(double value);

void write_csv(std::ostream& out, const Report& report);

}  // namespace qreading::sweep
