#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "covent/covent.hpp"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kInvalid = 2, kNumerical = 3 };

using covent::format_number;

std::ostream& summary_stream(const covent::SweepConfig& config) {
  return config.output.empty() ? std::cerr : std::cout;
}

void print_report(std::ostream& out, const covent::CriterionReport& r) {
  out << "eigenvalues:";
  for (Eigen::Index i = 0; i < r.eigenvalues.size(); ++i) out << ' ' << format_number(r.eigenvalues(i));
  out << "\ndeterminant: " << format_number(r.determinant) << "\nverdict: " << to_string(r.verdict) << '\n';
}

void print_flips(std::ostream& out, const char* label, const std::vector<double>& flips) {
  out << label << " flips:";
  if (flips.empty()) out << " none";
  for (double f : flips) out << ' ' << format_number(f);
  out << '\n';
}

int werner_bell(const covent::SweepConfig& config) {
  const auto rows = covent::run_werner_bell(config);
  covent::emit(config.output, std::cout, [&](std::ostream& out) { covent::write_werner_bell_csv(out, config, rows); });
  std::vector<double> mus;
  std::vector<bool> hits;
  for (const auto& r : rows) {
    mus.push_back(r.mu);
    hits.push_back(r.report.entangled());
  }
  print_flips(summary_stream(config), "mu", covent::verdict_flips(mus, hits));
  return kOk;
}

int spin_ensemble(const covent::SweepConfig& config) {
  const auto rows = covent::run_spin_ensemble(config);
  covent::emit(config.output, std::cout,
               [&](std::ostream& out) { covent::write_spin_ensemble_csv(out, config, rows); });
  auto& out = summary_stream(config);
  const auto ts = config.t.points();
  for (std::size_t i = 0; i < rows.size(); i += ts.size()) {
    auto flips_of = [&](auto pick) {
      std::vector<bool> hits;
      for (std::size_t k = 0; k < ts.size(); ++k) hits.push_back(pick(rows[i + k]));
      return covent::verdict_flips(ts, hits);
    };
    out << "mu=" << format_number(rows[i].mu) << '\n';
    if (config.criteria.cm) print_flips(out, "  cm t", flips_of([](const auto& r) { return r.cm->entangled(); }));
    if (config.criteria.ds) print_flips(out, "  ds t", flips_of([](const auto& r) { return r.ds->entangled(); }));
    if (config.criteria.ppt) {
      print_flips(out, "  ppt t", flips_of([&](const auto& r) { return *r.ppt_min < -config.tolerance; }));
    }
    if (config.criteria.ew) print_flips(out, "  ew t", flips_of([](const auto& r) { return r.ew->detects(); }));
  }
  return kOk;
}

int witness(const covent::SweepConfig& config) {
  const auto result = covent::run_witness(config);
  nlohmann::json j;
  j["M"] = config.m;
  j["mu"] = config.mu.min;
  j["t"] = config.t.min;
  j["seed"] = result.seed;
  j["min_expectation"] = result.min_expectation;
  j["detects"] = result.detects();
  j["feasibility_residual"] = result.feasibility_residual;
  j["proposals"] = result.iterations;
  j["accepted"] = result.accepted;
  std::vector<std::vector<double>> c(4, std::vector<double>(4));
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) c[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] = result.coefficients(r, k);
  }
  j["coefficients"] = c;
  covent::emit(config.output, std::cout, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
  return kOk;
}

int uncertainty_suite(int trials, int max_n, std::uint64_t seed) {
  const auto result = covent::run_uncertainty_battery(trials, max_n, seed);
  for (const auto& c : result.checks) {
    std::printf("%s  %-62s evaluated=%ld failures=%ld worst=%.3e tol=%.0e\n", c.passed() ? "PASS" : "FAIL",
                c.name.c_str(), c.evaluated, c.failures, c.worst, c.tolerance);
  }
  return result.passed() ? kOk : kNumerical;
}

covent::Grid single(double v) { return {v, v, 1}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement detection from covariance and commutation matrices"};
  app.require_subcommand(1);

  covent::SweepConfig config;
  std::string criteria = "cm";
  std::vector<double> rotation;
  double mu = 1.0, t = 0.0;

  auto* wb = app.add_subcommand("werner-bell", "Criterion spectrum for the Werner-Bell family");
  wb->add_option("--mu-min", config.mu.min)->capture_default_str();
  wb->add_option("--mu-max", config.mu.max)->capture_default_str();
  wb->add_option("--mu-steps", config.mu.steps, "grid points, endpoints included")->capture_default_str();
  wb->add_option("--tol", config.tolerance)->capture_default_str();
  wb->add_option("--out", config.output, "CSV path (stdout when omitted)");
  wb->add_option("--threads", config.threads);

  auto* se = app.add_subcommand("spin-ensemble", "Sweep twisted spin ensembles over (mu, t)");
  se->add_option("--m", config.m, "qubits per ensemble")->capture_default_str();
  se->add_option("--mu-min", config.mu.min)->capture_default_str();
  se->add_option("--mu-max", config.mu.max)->capture_default_str();
  se->add_option("--mu-steps", config.mu.steps)->capture_default_str();
  se->add_option("--t-min", config.t.min)->capture_default_str();
  se->add_option("--t-max", config.t.max)->capture_default_str();
  se->add_option("--t-steps", config.t.steps)->capture_default_str();
  se->add_option("--criteria", criteria, "subset of cm,ds,ppt,ew")->capture_default_str();
  se->add_option("--rotate", rotation, "row-major 3x3 rotation of the spin axes")->expected(9);
  se->add_option("--seed", config.seed)->capture_default_str();
  se->add_option("--tol", config.tolerance)->capture_default_str();
  se->add_option("--sweeps", config.anneal.sweeps)->capture_default_str();
  se->add_option("--t0", config.anneal.initial_temperature)->capture_default_str();
  se->add_option("--decay", config.anneal.decay)->capture_default_str();
  se->add_option("--box", config.anneal.box, "coefficient bound (default 10/(M+1)^2)");
  se->add_option("--witness-max-dim", config.witness_max_dim)->capture_default_str();
  se->add_option("--out", config.output, "CSV path (stdout when omitted)");
  se->add_option("--threads", config.threads);

  std::string input;
  auto* fd = app.add_subcommand("from-data", "Criterion from a measured correlation file");
  fd->add_option("--input", input, "JSON correlation document")->required();
  fd->add_option("--tol", config.tolerance)->capture_default_str();

  auto* ex = app.add_subcommand("export-data", "Write simulated correlations in the from-data format");
  ex->add_option("--m", config.m)->capture_default_str();
  ex->add_option("--mu", mu)->capture_default_str();
  ex->add_option("--t", t)->capture_default_str();
  ex->add_option("--out", config.output, "JSON path (stdout when omitted)");

  int trials = 1000, max_n = 8;
  auto* us = app.add_subcommand("uncertainty-suite", "Randomized uncertainty-relation property battery");
  us->add_option("--trials", trials)->capture_default_str();
  us->add_option("--max-n", max_n)->capture_default_str();
  us->add_option("--seed", config.seed)->capture_default_str();

  auto* wi = app.add_subcommand("witness", "Annealed decomposable-witness search at one point");
  wi->add_option("--m", config.m)->capture_default_str();
  wi->add_option("--mu", mu)->capture_default_str();
  wi->add_option("--t", t)->capture_default_str();
  wi->add_option("--seed", config.seed)->capture_default_str();
  wi->add_option("--sweeps", config.anneal.sweeps)->capture_default_str();
  wi->add_option("--t0", config.anneal.initial_temperature)->capture_default_str();
  wi->add_option("--decay", config.anneal.decay)->capture_default_str();
  wi->add_option("--box", config.anneal.box, "coefficient bound (default 10/(M+1)^2)");
  wi->add_option("--witness-max-dim", config.witness_max_dim)->capture_default_str();
  wi->add_option("--out", config.output, "JSON path (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*wb) {
      config.experiment = covent::Experiment::WernerBell;
      return werner_bell(config);
    }
    if (*se) {
      config.experiment = covent::Experiment::SpinEnsemble;
      config.criteria = covent::CriteriaSet::parse(criteria);
      if (!rotation.empty()) config.rotation = Eigen::Map<const Eigen::Matrix<double, 3, 3, Eigen::RowMajor>>(rotation.data());
      return spin_ensemble(config);
    }
    if (*fd) {
      print_report(std::cout, covent::run_from_data(input, config.tolerance));
      return kOk;
    }
    if (*ex) {
      config.experiment = covent::Experiment::FromData;
      config.mu = single(mu);
      config.validate();
      const auto data = covent::correlation_data(covent::spin_ensemble_state(config.m, mu, t),
                                                 covent::collective_spin_set(config.m));
      covent::emit(config.output, std::cout, [&](std::ostream& out) { out << covent::to_json(data).dump(2) << '\n'; });
      return kOk;
    }
    if (*us) return uncertainty_suite(trials, max_n, config.seed);
    if (*wi) {
      config.experiment = covent::Experiment::Witness;
      config.mu = single(mu);
      config.t = single(t);
      return witness(config);
    }
  } catch (const covent::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const covent::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}
