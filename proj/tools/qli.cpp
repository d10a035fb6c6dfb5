// Command-line front end: plan, run, sweep, optimize, calibrate.
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qli/calibrate.hpp"
#include "qli/errors.hpp"
#include "qli/optimize.hpp"
#include "qli/report.hpp"
#include "qli/scenario.hpp"

namespace {

enum Exit { kOk = 0, kRuntime = 1, kBadConfig = 2, kInfeasible = 3, kCalibration = 4 };

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::string out;
  bool quiet = false;
  unsigned threads = 0;
  std::string powers;
  std::string channels;
  bool published_anchors = false;
};

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw qli::Error(qli::ErrorCode::InvalidConfig, "cannot write " + o.out);
  f << text;
}

void warn(const Options& o, const std::vector<std::string>& warnings) {
  if (o.quiet) return;
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

qli::Scenario scenario(const Options& o) {
  qli::Scenario s = o.config.empty() ? qli::Scenario{} : qli::load_scenario(o.config);
  if (o.seed) s.seed = *o.seed;
  if (!o.mode.empty()) s.mode = qli::parse_run_mode(o.mode);
  s.validate();
  return s;
}

// "a:b:step" or "p1,p2,...".
std::vector<double> parse_powers(const std::string& text) {
  if (text.empty()) return qli::default_sweep_powers();
  std::vector<double> out;
  try {
    if (text.find(':') != std::string::npos) {
      std::stringstream ss(text);
      std::string a, b, step;
      std::getline(ss, a, ':');
      std::getline(ss, b, ':');
      std::getline(ss, step);
      const double lo = std::stod(a), hi = std::stod(b), dp = step.empty() ? 1.0 : std::stod(step);
      if (!(dp > 0.0) || hi < lo) throw std::invalid_argument("range");
      const auto n = static_cast<int>(std::floor((hi - lo) / dp + 1e-9));
      for (int i = 0; i <= n; ++i) out.push_back(lo + i * dp);
    } else {
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
      }
    }
  } catch (const std::exception&) {
    throw qli::Error(qli::ErrorCode::InvalidConfig, "cannot parse --powers '" + text + "'");
  }
  return out;
}

std::vector<qli::ItuChannel> parse_channels(const std::string& text, const qli::Scenario& s) {
  std::vector<qli::ItuChannel> out;
  if (text.empty()) {
    for (const auto& c : s.channels.classical) out.push_back(c.channel);
    if (out.empty()) out.emplace_back(36);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.emplace_back(std::stoi(item));
    } catch (const std::logic_error&) {
      throw qli::Error(qli::ErrorCode::InvalidConfig, "cannot parse channel '" + item + "'");
    }
  }
  return out;
}

int cmd_plan(const Options& o) {
  const auto s = scenario(o);
  const auto report = qli::plan(s);
  emit(o, qli::plan_json(s, report));
  return report.all_feasible() ? kOk : kInfeasible;
}

int cmd_run(const Options& o) {
  const auto r = qli::run_scenario(scenario(o), o.threads);
  warn(o, r.warnings);
  emit(o, qli::result_json(r));
  return kOk;
}

int cmd_sweep(const Options& o) {
  const auto s = scenario(o);
  const auto powers = parse_powers(o.powers);
  const auto channels = parse_channels(o.channels, s);
  const auto rows = qli::sweep_launch_power(s, powers, channels, o.threads);
  std::ostringstream csv;
  qli::write_sweep_csv(rows, csv);
  emit(o, csv.str());
  return kOk;
}

int cmd_optimize(const Options& o) {
  const auto s = scenario(o);
  qli::Scenario analytic = s;
  analytic.mode = qli::RunMode::Analytic;
  const auto r = qli::run_scenario(analytic, o.threads);
  warn(o, r.warnings);
  const qli::ChannelParams params{r.eta_channel, r.y_background, s.system, s.detector};
  emit(o, qli::optimize_json(qli::optimize_intensities(params, {}, o.threads)));
  return kOk;
}

int cmd_calibrate(const Options& o) {
  qli::AnchorSet anchors;
  if (o.published_anchors || o.config.empty()) {
    anchors = qli::published_anchors();
  } else {
    anchors = qli::load_anchors(o.config);
  }
  const auto result = qli::calibrate(anchors);
  emit(o, qli::calibration_json(anchors, result));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum/classical interleaving simulator"};
  app.set_version_flag("--version", std::string(qli::version()));
  app.require_subcommand(1);

  Options o;
  app.add_option("--config", o.config, "Scenario file (anchors file for calibrate)");
  app.add_option("--seed", o.seed, "Monte Carlo seed");
  app.add_option("--mode", o.mode, "analytic or mc")->check(CLI::IsMember({"analytic", "mc"}));
  app.add_option("--out", o.out, "Write output here instead of stdout");
  app.add_flag("--quiet", o.quiet, "Suppress warnings");
  app.add_option("--threads", o.threads, "Worker threads (0 = auto, capped by QLI_THREADS)");

  auto* plan = app.add_subcommand("plan", "Check channel timing feasibility");
  auto* run = app.add_subcommand("run", "Evaluate one scenario");
  auto* sweep = app.add_subcommand("sweep", "QBER and key rate versus launch power");
  sweep->add_option("--powers", o.powers, "lo:hi:step or a comma list in dBm");
  sweep->add_option("--channels", o.channels, "Comma list of classical channels");
  auto* optimize = app.add_subcommand("optimize", "Search decoy intensities and probabilities");
  auto* calibrate = app.add_subcommand("calibrate", "Fit insertion loss and Raman scale");
  calibrate->add_flag("--published", o.published_anchors, "Use the built-in published anchors");
  for (auto* sub : {plan, run, sweep, optimize, calibrate}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kBadConfig;
  }

  try {
    if (*plan) return cmd_plan(o);
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*optimize) return cmd_optimize(o);
    return cmd_calibrate(o);
  } catch (const qli::Error& e) {
    std::cerr << "qli: " << qli::to_string(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case qli::ErrorCode::InvalidConfig:
      case qli::ErrorCode::InvalidChannel:
        return kBadConfig;
      case qli::ErrorCode::InvalidPlan:
        return *plan ? kInfeasible : kBadConfig;
      case qli::ErrorCode::CalibrationFailure:
        return kCalibration;
      default:
        return kRuntime;
    }
  } catch (const std::exception& e) {
    std::cerr << "qli: " << e.what() << "\n";
    return kRuntime;
  }
}
