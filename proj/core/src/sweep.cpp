#include "qreading/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "qreading/error.hpp"
#include "qreading/reading.hpp"

namespace qreading::sweep {

namespace {

// Per-point memo so that columns sharing an expensive computation (the
// squeezed-coherent optimum) evaluate it once.
struct PointCache {
  std::optional<SqueezedCoherentOptimum> squeezed;
};

PureLossCell cell_of(const Point& p) { return PureLossCell(p.kappa0, p.kappa1, p.prior); }

QuantityValue closed(double v) { return QuantityValue{v, std::nullopt}; }
QuantityValue numeric(const ChiEvaluation& e) { return QuantityValue{e.chi, e.cutoff.dim()}; }

const SqueezedCoherentOptimum& squeezed_optimum(const Point& p, PointCache& cache) {
  if (!cache.squeezed) cache.squeezed = optimize_squeezed_coherent(cell_of(p), p.photons, p.cutoff);
  return *cache.squeezed;
}

using Evaluator = std::function<QuantityValue(const Point&, PointCache&)>;

struct QuantityEntry {
  QuantityInfo info;
  Evaluator evaluate;
};

const std::vector<QuantityEntry>& registry() {
  static const std::vector<QuantityEntry> entries = [] {
    std::vector<QuantityEntry> r;
    auto add = [&](std::string name, std::string description, Evaluator f) {
      r.push_back(QuantityEntry{{std::move(name), std::move(description)}, std::move(f)});
    };
    auto chi = [](auto make) {
      return [make](const Point& p, PointCache&) {
        return numeric(evaluate_transmitter(cell_of(p), make(p), p.cutoff));
      };
    };

    add("kappa0", "reflectivity of channel 0",
        [](const Point& p, PointCache&) { return closed(p.kappa0); });
    add("kappa1", "reflectivity of channel 1",
        [](const Point& p, PointCache&) { return closed(p.kappa1); });
    add("prior", "prior probability of channel 0",
        [](const Point& p, PointCache&) { return closed(p.prior); });
    add("photons", "mean signal photons per cell",
        [](const Point& p, PointCache&) { return closed(p.photons); });

    add("cc", "classical reading capacity C_c (bits/cell)", [](const Point& p, PointCache&) {
      return closed(classical_reading_capacity(cell_of(p), p.photons));
    });
    add("ic", "single-cell classical information I_c = 1 - H(P_c)",
        [](const Point& p, PointCache&) {
          return closed(classical_single_cell_info(cell_of(p), p.photons));
        });
    add("pc", "single-cell classical error probability P_c (equiprobable)",
        [](const Point& p, PointCache&) {
          return closed(classical_single_cell_error(cell_of(p), p.photons));
        });
    add("pc-helstrom", "Helstrom error of the coherent outputs (Fock engine)",
        [](const Point& p, PointCache&) {
          const OutputEnsemble ens =
              output_ensemble(cell_of(p), Transmitter::coherent(p.photons), p.cutoff);
          return QuantityValue{helstrom_error(ens), ens.entries().front().state.dim()};
        });
    add("unconstrained", "unconstrained reading capacity H(p)",
        [](const Point& p, PointCache&) { return closed(unconstrained_capacity(cell_of(p))); });

    add("chi-coh", "Holevo information of |sqrt(n)> (Fock engine)",
        chi([](const Point& p) { return Transmitter::coherent(p.photons); }));
    add("chi-epr", "Holevo information of one TMSV pair",
        chi([](const Point& p) { return Transmitter::epr(1, p.photons); }));
    add("chi-epr2", "Holevo information of two TMSV pairs with n/2 photons each",
        chi([](const Point& p) { return Transmitter::epr(2, p.photons); }));
    add("chi-epr-strict", "one TMSV pair, signal plus reference photons equal to n",
        chi([](const Point& p) { return Transmitter::epr(1, p.photons, true); }));
    add("chi-noon", "Holevo information of the NOON transmitter",
        chi([](const Point& p) { return Transmitter::noon(p.photons); }));
    add("chi-fock", "Holevo information of the number state |n>",
        chi([](const Point& p) { return Transmitter::fock_number(p.photons); }));
    add("chi-sqc", "optimised squeezed-coherent Holevo information",
        [](const Point& p, PointCache& cache) {
          if (p.photons == 0.0) return closed(0.0);
          const auto& opt = squeezed_optimum(p, cache);
          return QuantityValue{opt.chi, opt.cutoff.dim()};
        });
    add("sqc-splitting", "optimal fraction of photons spent on squeezing",
        [](const Point& p, PointCache& cache) {
          if (p.photons == 0.0) return closed(0.0);
          const auto& opt = squeezed_optimum(p, cache);
          return QuantityValue{opt.splitting, opt.cutoff.dim()};
        });
    add("gain", "information gain G = chi_epr - C_c", [](const Point& p, PointCache&) {
      const PureLossCell cell = cell_of(p);
      const ChiEvaluation e = evaluate_transmitter(cell, Transmitter::epr(1, p.photons), p.cutoff);
      return QuantityValue{e.chi - classical_reading_capacity(cell, p.photons), e.cutoff.dim()};
    });

    add("omega", "Bhattacharyya exponent omega",
        [](const Point& p, PointCache&) { return closed(bhattacharyya_omega(cell_of(p))); });
    add("bound-b", "EPR Bhattacharyya bound B = exp(-omega n)/2",
        [](const Point& p, PointCache&) {
          return closed(epr_bhattacharyya_bound(cell_of(p), p.photons));
        });
    add("nth", "threshold energy n_th", [](const Point& p, PointCache&) {
      return closed(threshold_energy(cell_of(p)));
    });
    add("nth-ideal", "threshold energy for ideal memories", [](const Point& p, PointCache&) {
      return closed(ideal_threshold_energy(cell_of(p)));
    });
    add("theta", "ideal-memory EPR error bound theta (s -> infinity)",
        [](const Point& p, PointCache&) { return closed(epr_theta_ideal(p.kappa0, p.photons)); });
    add("theta-s", "ideal-memory EPR error bound Theta with s = copies",
        [](const Point& p, PointCache&) {
          return closed(epr_theta_finite(p.kappa0, p.copies, p.photons));
        });
    add("q", "single-cell EPR rate Q = 1 - H(Theta), s = copies",
        [](const Point& p, PointCache&) { return closed(epr_q_rate(p.kappa0, p.copies, p.photons)); });
    add("q-inf", "single-cell EPR rate for infinitely many copies",
        [](const Point& p, PointCache&) { return closed(epr_q_rate_limit(p.kappa0, p.photons)); });
    return r;
  }();
  return entries;
}

const QuantityEntry& find_quantity(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.info.name == name) return e;
  }
  std::ostringstream msg;
  msg << "unknown quantity '" << name << "'";
  throw DomainError(msg.str());
}

std::string describe(const Point& p) {
  std::ostringstream out;
  out << "kappa0=" << p.kappa0 << " kappa1=" << p.kappa1 << " prior=" << p.prior
      << " photons=" << p.photons;
  return out.str();
}

// Runs fn(i) for i in [0, count) on `threads` workers. The failure with the
// lowest index is rethrown after all workers have stopped.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex guard;
  std::size_t failed_index = count;
  std::exception_ptr failure;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(guard);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  if (workers == 1 || count < 2) {
    work();
  } else {
    std::vector<std::thread> pool;
    const std::size_t n = std::min(workers, count);
    pool.reserve(n);
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<Point> grid_points(const TableSpec& table) {
  std::vector<Point> points{table.fixed};
  for (const Axis& axis : table.axes) {
    std::vector<Point> expanded;
    expanded.reserve(points.size() * axis.values().size());
    for (const Point& base : points) {
      for (double v : axis.values()) {
        Point p = base;
        set_parameter(p, axis.parameter(), v);
        expanded.push_back(p);
      }
    }
    points = std::move(expanded);
  }
  if (table.adjust) {
    for (Point& p : points) table.adjust(p);
  }
  return points;
}

}  // namespace

Parameter parse_parameter(std::string_view name) {
  if (name == "kappa0") return Parameter::kKappa0;
  if (name == "kappa1") return Parameter::kKappa1;
  if (name == "prior") return Parameter::kPrior;
  if (name == "photons") return Parameter::kPhotons;
  std::ostringstream msg;
  msg << "unknown sweep parameter '" << name << "' (expected kappa0, kappa1, prior or photons)";
  throw DomainError(msg.str());
}

std::string_view parameter_name(Parameter p) {
  switch (p) {
    case Parameter::kKappa0: return "kappa0";
    case Parameter::kKappa1: return "kappa1";
    case Parameter::kPrior: return "prior";
    case Parameter::kPhotons: return "photons";
  }
  return "?";
}

void set_parameter(Point& point, Parameter p, double value) {
  switch (p) {
    case Parameter::kKappa0: point.kappa0 = value; break;
    case Parameter::kKappa1: point.kappa1 = value; break;
    case Parameter::kPrior: point.prior = value; break;
    case Parameter::kPhotons: point.photons = value; break;
  }
}

double get_parameter(const Point& point, Parameter p) {
  switch (p) {
    case Parameter::kKappa0: return point.kappa0;
    case Parameter::kKappa1: return point.kappa1;
    case Parameter::kPrior: return point.prior;
    case Parameter::kPhotons: return point.photons;
  }
  return 0.0;
}

const std::vector<QuantityInfo>& quantity_catalog() {
  static const std::vector<QuantityInfo> catalog = [] {
    std::vector<QuantityInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return catalog;
}

bool is_known_quantity(std::string_view name) {
  return std::any_of(registry().begin(), registry().end(),
                     [&](const QuantityEntry& e) { return e.info.name == name; });
}

QuantityValue evaluate_quantity(std::string_view name, const Point& point) {
  PointCache cache;
  return find_quantity(name).evaluate(point, cache);
}

Axis Axis::linear(Parameter parameter, double start, double stop, int points) {
  if (points < 2) throw DomainError("a sweep axis needs at least 2 points");
  if (!std::isfinite(start) || !std::isfinite(stop)) throw DomainError("axis bounds must be finite");
  std::vector<double> values(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    values[i] = i == points - 1 ? stop : start + (stop - start) * i / (points - 1);
  }
  return Axis(parameter, std::move(values));
}

Axis Axis::listed(Parameter parameter, std::vector<double> values) {
  if (values.empty()) throw DomainError("axis needs at least one value");
  return Axis(parameter, std::move(values));
}

void SweepSpec::validate() const {
  if (axes.empty() || axes.size() > 2) throw DomainError("a sweep needs one or two axes");
  for (const Axis& a : axes) {
    if (a.values().size() < 2) throw DomainError("a sweep axis needs at least 2 points");
  }
  if (axes.size() == 2 && axes[0].parameter() == axes[1].parameter()) {
    throw DomainError("sweep axes must vary different parameters");
  }
  if (quantities.empty()) throw DomainError("a sweep needs at least one quantity");
  for (const auto& q : quantities) (void)find_quantity(q);
}

Report evaluate_tables(const std::vector<TableSpec>& tables, int threads) {
  Report report;
  for (const TableSpec& spec : tables) {
    for (const Column& c : spec.columns) (void)find_quantity(c.quantity);
    const std::vector<Point> points = grid_points(spec);

    ResultTable table;
    table.name = spec.name;
    for (const Axis& a : spec.axes) table.columns.emplace_back(parameter_name(a.parameter()));
    for (const Column& c : spec.columns) table.columns.push_back(c.header);
    table.rows.resize(points.size());
    std::vector<std::vector<std::optional<int>>> cutoffs(points.size());

    parallel_for(points.size(), threads, [&](std::size_t i) {
      const Point& point = points[i];
      std::vector<double> row;
      row.reserve(table.columns.size());
      for (const Axis& a : spec.axes) row.push_back(get_parameter(point, a.parameter()));
      PointCache cache;
      std::vector<std::optional<int>> used;
      for (const Column& c : spec.columns) {
        Point scaled = point;
        scaled.photons *= c.photon_scale;
        try {
          const QuantityValue v = find_quantity(c.quantity).evaluate(scaled, cache);
          row.push_back(v.value);
          used.push_back(v.cutoff);
        } catch (const std::exception& e) {
          const std::string where = spec.name + " " + c.header + " at " + describe(scaled) + ": ";
          if (dynamic_cast<const CutoffError*>(&e)) throw CutoffError(where + e.what());
          if (dynamic_cast<const std::logic_error*>(&e)) throw DomainError(where + e.what());
          throw NumericalError(where + e.what());
        }
      }
      table.rows[i] = std::move(row);
      cutoffs[i] = std::move(used);
    });

    for (std::size_t c = 0; c < spec.columns.size(); ++c) {
      std::optional<int> largest;
      for (const auto& used : cutoffs) {
        if (used[c] && (!largest || *used[c] > *largest)) largest = used[c];
      }
      report.meta.emplace_back("cutoff." + spec.name + "." + spec.columns[c].header,
                               largest ? std::to_string(*largest) : "closed-form");
    }
    report.tables.push_back(std::move(table));
  }
  return report;
}

Report run_sweep(const SweepSpec& spec, int threads) {
  spec.validate();
  TableSpec table;
  table.name = "sweep";
  table.axes = spec.axes;
  table.fixed = spec.fixed;
  for (const auto& q : spec.quantities) table.columns.push_back(Column{q, q, 1.0});
  Report report = evaluate_tables({table}, threads);
  std::vector<std::pair<std::string, std::string>> meta{
      {"tool", "qreading " + std::string(kToolVersion)}, {"command", "sweep"}};
  for (const Parameter p : {Parameter::kKappa0, Parameter::kKappa1, Parameter::kPrior,
                            Parameter::kPhotons}) {
    const bool swept = std::any_of(spec.axes.begin(), spec.axes.end(),
                                   [&](const Axis& a) { return a.parameter() == p; });
    if (!swept) meta.emplace_back(std::string(parameter_name(p)), format_number(get_parameter(spec.fixed, p)));
  }
  meta.insert(meta.end(), report.meta.begin(), report.meta.end());
  report.meta = std::move(meta);
  return report;
}

Report run_capacity(const Point& point, const std::vector<std::string>& quantities) {
  if (quantities.empty()) throw DomainError("capacity needs at least one --quantity");
  TableSpec table;
  table.name = "capacity";
  table.fixed = point;
  for (const char* echo : {"kappa0", "kappa1", "prior", "photons"}) {
    table.columns.push_back(Column{echo, echo, 1.0});
  }
  for (const auto& q : quantities) table.columns.push_back(Column{q, q, 1.0});
  Report report = evaluate_tables({table}, 1);
  std::vector<std::pair<std::string, std::string>> meta{
      {"tool", "qreading " + std::string(kToolVersion)}, {"command", "capacity"}};
  for (auto& m : report.meta) {
    const bool echo = m.first.ends_with(".kappa0") || m.first.ends_with(".kappa1") ||
                      m.first.ends_with(".prior") || m.first.ends_with(".photons");
    if (!echo) meta.push_back(std::move(m));
  }
  report.meta = std::move(meta);
  return report;
}

const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names{"fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
  return names;
}

std::vector<TableSpec> figure_tables(std::string_view name, const FigureOptions& options) {
  auto grid_1d = [&] {
    const int g = options.grid.empty() ? 101 : options.grid.front();
    if (g < 2) throw DomainError("figure grids need at least 2 points");
    return g;
  };
  auto fixed = [&](double kappa0, double kappa1, double photons) {
    Point p;
    p.kappa0 = options.kappa0.value_or(kappa0);
    p.kappa1 = options.kappa1.value_or(kappa1);
    p.photons = options.photons.value_or(photons);
    p.prior = options.prior.value_or(0.5);
    p.cutoff = options.cutoff;
    return p;
  };

  std::vector<TableSpec> tables;
  if (name == "fig4") {
    // n on (0, 50]: the grid starts one step above zero.
    const int g = grid_1d();
    TableSpec t{"fig4", {Axis::linear(Parameter::kPhotons, 50.0 / g, 50.0, g)}, fixed(0.5, 0.9, 1.0),
                nullptr, {{"cc", "cc"}, {"ic", "ic"}}};
    tables.push_back(std::move(t));
  } else if (name == "fig5") {
    int g0 = 41;
    int g1 = 41;
    if (options.grid.size() == 1) g0 = g1 = options.grid[0];
    if (options.grid.size() >= 2) {
      g0 = options.grid[0];
      g1 = options.grid[1];
    }
    if (g0 < 2 || g1 < 2) throw DomainError("figure grids need at least 2 points");
    std::vector<double> panels =
        options.photons ? std::vector<double>{*options.photons} : std::vector<double>{5.0, 1.0};
    TableSpec t{"fig5",
                {Axis::listed(Parameter::kPhotons, panels), Axis::linear(Parameter::kKappa0, 0, 1, g0),
                 Axis::linear(Parameter::kKappa1, 0, 1, g1)},
                fixed(0.0, 0.0, 5.0),
                nullptr,
                {{"gain", "gain"}}};
    tables.push_back(std::move(t));
  } else if (name == "fig6") {
    TableSpec t{"fig6", {Axis::linear(Parameter::kKappa0, 0, 1, grid_1d())}, fixed(0.0, 1.0, 1.0),
                nullptr,
                {{"cc", "cc"}, {"chi_epr", "chi-epr"}, {"chi_noon", "chi-noon"}, {"chi_fock", "chi-fock"}}};
    tables.push_back(std::move(t));
  } else if (name == "fig7") {
    constexpr double kGap = 0.01;
    TableSpec t{"fig7", {Axis::linear(Parameter::kKappa1, kGap, 1, grid_1d())},
                fixed(0.0, 1.0, 1.0),
                [](Point& p) { p.kappa0 = std::max(0.0, p.kappa1 - kGap); },
                {{"kappa0", "kappa0"},
                 {"cc", "cc"},
                 {"chi_epr", "chi-epr"},
                 {"chi_noon", "chi-noon"},
                 {"chi_fock", "chi-fock"}}};
    tables.push_back(std::move(t));
  } else if (name == "fig8") {
    const int g = grid_1d();
    TableSpec main{"fig8", {Axis::linear(Parameter::kKappa1, 0, 1, g)}, fixed(0.0, 1.0, 1.0), nullptr,
                   {{"cc", "cc"},
                    {"chi_sqc", "chi-sqc"},
                    {"sqc_splitting", "sqc-splitting"},
                    {"chi_fock", "chi-fock"}}};
    TableSpec copies{"fig8-copies", {Axis::linear(Parameter::kKappa0, 0, 1, g)}, fixed(0.0, 1.0, 1.0),
                     nullptr, {{"cc", "cc"}, {"chi_epr1", "chi-epr"}, {"chi_epr2", "chi-epr2"}}};
    tables.push_back(std::move(main));
    tables.push_back(std::move(copies));
  } else if (name == "fig9") {
    TableSpec t{"fig9", {Axis::linear(Parameter::kKappa0, 0, 1, grid_1d())}, fixed(0.0, 1.0, 5.0),
                nullptr,
                {{"cc", "cc"},
                 {"q1", "q"},
                 {"q_inf", "q-inf"},
                 {"q1_strict", "q", 0.5},
                 {"q_inf_strict", "q-inf", 0.5}}};
    tables.push_back(std::move(t));
  } else {
    std::ostringstream msg;
    msg << "unknown figure '" << name << "' (expected fig4 ... fig9)";
    throw DomainError(msg.str());
  }
  return tables;
}

Report run_figure(std::string_view name, const FigureOptions& options, int threads) {
  Report report = evaluate_tables(figure_tables(name, options), threads);
  std::vector<std::pair<std::string, std::string>> meta{
      {"tool", "qreading " + std::string(kToolVersion)}, {"figure", std::string(name)}};
  meta.insert(meta.end(), report.meta.begin(), report.meta.end());
  report.meta = std::move(meta);
  return report;
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.9g", value);
  return buffer;
}

void write_csv(std::ostream& out, const Report& report) {
  for (const auto& [key, value] : report.meta) out << "# " << key << ": " << value << '\n';
  bool first = true;
  for (const ResultTable& table : report.tables) {
    if (!first) out << '\n';
    first = false;
    out << "# table: " << table.name << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      out << (c ? "," : "") << table.columns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_number(row[c]);
      out << '\n';
    }
  }
}

}  // namespace qreading::sweep
