#pragma once

// Parameter sweeps over Werner-mixed states: configuration, a deterministic
// worker pool, verdict-flip extraction and CSV output.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "covent/correlation_io.hpp"
#include "covent/reference.hpp"

namespace covent {

enum class Experiment { WernerBell, SpinEnsemble, UncertaintySuite, Witness, FromData };

inline const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::WernerBell: return "werner-bell";
    case Experiment::SpinEnsemble: return "spin-ensemble";
    case Experiment::UncertaintySuite: return "uncertainty-suite";
    case Experiment::Witness: return "witness";
    default: return "from-data";
  }
}

/// Uniform grid with inclusive endpoints; `steps` counts points.
struct Grid {
  double min = 0.0;
  double max = 1.0;
  int steps = 101;

  void validate(const std::string& name) const {
    if (steps < 1) throw ValidationError(name + " grid: steps must be >= 1");
    if (!std::isfinite(min) || !std::isfinite(max)) throw ValidationError(name + " grid: bounds must be finite");
    if (max < min) throw ValidationError(name + " grid: max < min");
    if (steps == 1 && max != min) throw ValidationError(name + " grid: a single step needs min == max");
  }

  double at(int i) const { return steps == 1 ? min : min + (max - min) * i / (steps - 1); }

  std::vector<double> points() const {
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) out[static_cast<std::size_t>(i)] = at(i);
    return out;
  }
};

struct CriteriaSet {
  bool cm = true;
  bool ds = false;
  bool ppt = false;
  bool ew = false;

  /// Comma-separated subset of cm, ds, ppt, ew.
  static CriteriaSet parse(const std::string& text) {
    CriteriaSet out{false, false, false, false};
    std::stringstream ss(text);
    std::string item;
    bool any = false;
    while (std::getline(ss, item, ',')) {
      if (item == "cm") out.cm = true;
      else if (item == "ds") out.ds = true;
      else if (item == "ppt") out.ppt = true;
      else if (item == "ew") out.ew = true;
      else throw ValidationError("unknown criterion '" + item + "' (expected cm, ds, ppt or ew)");
      any = true;
    }
    if (!any) throw ValidationError("criteria list is empty");
    return out;
  }

  std::string str() const {
    std::string s;
    for (auto [on, name] : {std::pair{cm, "cm"}, {ds, "ds"}, {ppt, "ppt"}, {ew, "ew"}}) {
      if (on) s += (s.empty() ? "" : ",") + std::string(name);
    }
    return s;
  }
};

struct SweepConfig {
  Experiment experiment = Experiment::SpinEnsemble;
  int m = 2;
  Grid mu{0.0, 1.0, 101};
  Grid t{0.0, 0.5, 101};
  CriteriaSet criteria;
  double tolerance = kVerdictTolerance;
  std::uint64_t seed = 42;
  std::string output;
  std::optional<Rotation3> rotation;
  int witness_max_dim = 36;
  AnnealParams anneal;
  unsigned threads = 0;  // 0 selects hardware concurrency

  void validate() const {
    mu.validate("mu");
    if (mu.min < 0.0 || mu.max > 1.0) throw ValidationError("mu grid must lie within [0, 1]");
    if (!(tolerance >= 0.0)) throw ValidationError("tolerance must be >= 0");
    if (experiment == Experiment::SpinEnsemble || experiment == Experiment::Witness) {
      t.validate("t");
      if (m < 1) throw ValidationError("M must be >= 1");
      if (rotation) require_orthogonal(*rotation);
      const bool ew = criteria.ew || experiment == Experiment::Witness;
      if (ew) {
        anneal.validate();
        const long dim = static_cast<long>(m + 1) * (m + 1);
        if (dim > witness_max_dim) {
          throw ValidationError("witness search requested at M=" + std::to_string(m) + " (dimension " +
                                std::to_string(dim) + ") above the cap of " + std::to_string(witness_max_dim) +
                                ": every proposal needs repeated eigendecompositions of the full operator, "
                                "which is impractical at this size");
        }
      }
    }
  }

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["experiment"] = to_string(experiment);
    j["tolerance"] = tolerance;
    j["mu"] = {{"min", mu.min}, {"max", mu.max}, {"steps", mu.steps}};
    if (experiment != Experiment::WernerBell) {
      j["M"] = m;
      j["t"] = {{"min", t.min}, {"max", t.max}, {"steps", t.steps}};
      j["criteria"] = criteria.str();
      j["seed"] = seed;
      if (rotation) {
        std::vector<double> r;
        for (int i = 0; i < 3; ++i) {
          for (int k = 0; k < 3; ++k) r.push_back((*rotation)(i, k));
        }
        j["rotation"] = r;
      }
      if (criteria.ew || experiment == Experiment::Witness) {
        j["anneal"] = {{"t0", anneal.initial_temperature}, {"decay", anneal.decay}, {"sweeps", anneal.sweeps},
                       {"box", anneal.box_for(m)}};
      }
    }
    return j;
  }
};

/// splitmix64 of (master, index): per-point seeds independent of scheduling.
inline std::uint64_t point_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Evaluates fn(0..n-1) on a pool of threads; results keep index order and
/// the first exception is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn, unsigned threads = 0) -> std::vector<decltype(fn(std::size_t{}))> {
  using T = decltype(fn(std::size_t{}));
  std::vector<std::optional<T>> slots(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Midpoints between consecutive grid points whose verdicts differ.
inline std::vector<double> verdict_flips(const std::vector<double>& xs, const std::vector<bool>& detected) {
  if (xs.size() != detected.size()) throw DimensionError("verdict_flips: grid and verdicts differ in length");
  std::vector<double> out;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (detected[i] != detected[i - 1]) out.push_back(0.5 * (xs[i] + xs[i - 1]));
  }
  return out;
}

struct WernerBellRow {
  double mu = 0.0;
  CriterionReport report;
};

inline std::vector<WernerBellRow> run_werner_bell(const SweepConfig& config) {
  config.validate();
  const auto set = pauli_product_set();
  const auto mus = config.mu.points();
  return parallel_map(
      mus.size(),
      [&](std::size_t i) {
        const auto rho = werner_mix(bell_state(), mus[i]);
        return WernerBellRow{mus[i], detect(criterion_matrix(rho, set), config.tolerance)};
      },
      config.threads);
}

struct SpinEnsembleRow {
  double mu = 0.0;
  double t = 0.0;
  std::optional<CriterionReport> cm;
  std::optional<CriterionReport> ds;
  std::optional<double> ppt_min;
  std::optional<WitnessResult> ew;
};

/// Rows ordered mu-major: index = i_mu * t.steps + i_t.
inline std::vector<SpinEnsembleRow> run_spin_ensemble(const SweepConfig& config) {
  config.validate();
  const Rotation3 r = config.rotation.value_or(Rotation3::Identity());
  std::optional<ObservableSet> spins;
  if (config.criteria.cm) {
    spins = config.rotation ? rotate_so3(collective_spin_set(config.m), r) : collective_spin_set(config.m);
  }
  const auto mus = config.mu.points();
  const auto ts = config.t.points();
  return parallel_map(
      mus.size() * ts.size(),
      [&](std::size_t index) {
        SpinEnsembleRow row;
        row.mu = mus[index / ts.size()];
        row.t = ts[index % ts.size()];
        const auto rho = spin_ensemble_state(config.m, row.mu, row.t);
        if (spins) row.cm = detect(criterion_matrix(rho, *spins), config.tolerance);
        if (config.criteria.ds) row.ds = duan_simon_report(rho, config.m, config.tolerance, r);
        if (config.criteria.ppt) row.ppt_min = ppt_min_eigenvalue(rho);
        if (config.criteria.ew) row.ew = witness_optimize(rho, config.m, config.anneal, point_seed(config.seed, index));
        return row;
      },
      config.threads);
}

/// Single witness search at (M, mu, t) from the first grid points.
inline WitnessResult run_witness(const SweepConfig& config) {
  config.validate();
  return witness_optimize(spin_ensemble_state(config.m, config.mu.min, config.t.min), config.m, config.anneal,
                          config.seed);
}

inline CriterionReport run_from_data(const std::string& path, double tolerance = kVerdictTolerance) {
  return detect(criterion_matrix_from_data(read_correlation_file(path)), tolerance);
}

inline std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void write_header(std::ostream& out, const SweepConfig& config, const std::vector<std::string>& columns) {
  out << "# config: " << config.to_json().dump() << '\n' << "# ";
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

inline void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

inline void append_report(std::vector<std::string>& cells, const CriterionReport& r) {
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) cells.push_back(format_number(r.eigenvalues(i)));
  cells.push_back(format_number(r.determinant));
  cells.push_back(to_string(r.verdict));
}

inline void report_columns(std::vector<std::string>& cols, const std::string& prefix, int n) {
  for (int i = 1; i <= n; ++i) cols.push_back(prefix + "_eig" + std::to_string(i));
  cols.push_back(prefix + "_det");
  cols.push_back(prefix + "_verdict");
}

}  // namespace detail

inline void write_werner_bell_csv(std::ostream& out, const SweepConfig& config, const std::vector<WernerBellRow>& rows) {
  std::vector<std::string> cols{"mu"};
  detail::report_columns(cols, "cm", 3);
  detail::write_header(out, config, cols);
  for (const auto& row : rows) {
    std::vector<std::string> cells{format_number(row.mu)};
    detail::append_report(cells, row.report);
    detail::write_row(out, cells);
  }
}

inline void write_spin_ensemble_csv(std::ostream& out, const SweepConfig& config,
                                    const std::vector<SpinEnsembleRow>& rows) {
  std::vector<std::string> cols{"mu", "t"};
  if (config.criteria.cm) detail::report_columns(cols, "cm", 6);
  if (config.criteria.ds) detail::report_columns(cols, "ds", 4);
  if (config.criteria.ppt) {
    cols.push_back("ppt_min");
    cols.push_back("ppt_verdict");
  }
  if (config.criteria.ew) {
    for (const char* c : {"ew_min", "ew_seed", "ew_verdict"}) cols.push_back(c);
  }
  detail::write_header(out, config, cols);
  for (const auto& row : rows) {
    std::vector<std::string> cells{format_number(row.mu), format_number(row.t)};
    if (row.cm) detail::append_report(cells, *row.cm);
    if (row.ds) detail::append_report(cells, *row.ds);
    if (row.ppt_min) {
      cells.push_back(format_number(*row.ppt_min));
      cells.push_back(*row.ppt_min < -config.tolerance ? "ENTANGLED" : "UNDETECTED");
    }
    if (row.ew) {
      cells.push_back(format_number(row.ew->min_expectation));
      cells.push_back(std::to_string(row.ew->seed));
      cells.push_back(row.ew->detects() ? "ENTANGLED" : "UNDETECTED");
    }
    detail::write_row(out, cells);
  }
}

/// Writes to `path`, or to `fallback` when the path is empty.
inline void emit(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  body(out);
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace covent
