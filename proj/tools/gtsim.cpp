// gtsim: batch front end for sweeps, bound tables, games, key-rate bounds
// and the verification suite.
//
// Exit codes: 0 success, 1 failed invariant or verification, 2 invalid
// input, 3 truncation below the trusted floor.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gt/experiments.hpp"
#include "gt/fidelity.hpp"
#include "gt/parallel.hpp"
#include "gt/skc.hpp"
#include "gt/telegame.hpp"
#include "gt/teleport.hpp"
#include "gt/verification.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitTruncation = 3;
constexpr int kScenarioVersion = 1;

struct InvalidInput : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void log(const std::string& message) { std::cerr << "gtsim: " << message << '\n'; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput(fmt::format("cannot open '{}'", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Parses JSON, reporting syntax errors with line and column.
gt::Json parse_json(const std::string& text, const std::string& path) {
  try {
    return gt::Json::parse(text);
  } catch (const gt::Json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InvalidInput(fmt::format("{}:{}:{}: malformed JSON ({})", path, line, column, e.what()));
  }
}

/// Loads a scenario file and returns the body stored under `section`.
gt::Json load_scenario(const std::string& path, const std::string& section, std::initializer_list<std::string_view> extra) {
  const auto doc = parse_json(read_file(path), path);
  std::vector<std::string_view> allowed{"version", section};
  allowed.insert(allowed.end(), extra.begin(), extra.end());
  if (!doc.is_object()) throw InvalidInput(fmt::format("{}: scenario must be a JSON object", path));
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw InvalidInput(fmt::format("{}: unknown field '{}'", path, key));
    }
  }
  if (!doc.contains("version") || !doc["version"].is_number_integer() || doc["version"].get<int>() != kScenarioVersion) {
    throw InvalidInput(fmt::format("{}: expected \"version\": {}", path, kScenarioVersion));
  }
  if (!doc.contains(section)) throw InvalidInput(fmt::format("{}: missing '{}' section", path, section));
  return doc;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput(fmt::format("cannot write '{}'", path));
  out << content;
}

std::vector<double> parse_list(const std::string& text, const char* what, bool allow_empty = false) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidInput(fmt::format("{}: '{}' is not a number", what, item));
    }
  }
  if (out.empty() && !allow_empty) throw InvalidInput(fmt::format("{}: empty list", what));
  return out;
}

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string metadata_line(const std::string& kind, const gt::Json& config) {
  return fmt::format("# gtsim {} config_hash=fnv1a64:{:016x} command={}\n", GTSIM_VERSION, gt::fnv1a64(config.dump()), kind);
}

int cmd_sweep(const std::string& path, const std::string& out, std::optional<int> cutoff, int threads) {
  const auto doc = load_scenario(path, "sweep", {});
  auto spec = gt::sweep_spec_from_json(doc["sweep"]);
  if (cutoff) {
    spec.cutoff = *cutoff;
    gt::validate(spec);
  }
  if (!out.empty()) spec.output_path = out;
  const auto rows = gt::run_sweep(spec, threads);
  write_output(spec.output_path, gt::rows_to_csv(spec, rows));
  const auto problems = gt::check_rows(spec, rows);
  for (const auto& p : problems) log(fmt::format("invariant violated: {}", p));
  log(fmt::format("{}: {} rows", gt::to_string(spec.experiment), rows.size()));
  return problems.empty() ? 0 : kExitFailure;
}

/// Closed-form simplification of the bound where one exists.
std::optional<double> simplified_bound(const gt::ChannelDescriptor& d, double sigma) {
  // P between thermal states with n and n + shift, F = 1 / (sqrt((n+1)(m+1)) - sqrt(n m))^2.
  const auto thermal_pair = [](double n, double shift) {
    const double m = n + shift;
    const double root = std::sqrt((n + 1.0) * (m + 1.0)) - std::sqrt(n * m);
    return std::sqrt(std::max(0.0, 1.0 - 1.0 / (root * root)));
  };
  switch (d.kind) {
    case gt::ChannelKind::thermal:
      return thermal_pair(d.params[1], d.params[0] * sigma / (1.0 - d.params[0]));
    case gt::ChannelKind::amplifier:
      return thermal_pair(d.params[1], d.params[0] * sigma / (d.params[0] - 1.0));
    case gt::ChannelKind::pure_loss: {
      const double x = d.params[0] * sigma / (1.0 - d.params[0]);
      return std::sqrt(1.0 - 1.0 / (x + 1.0));
    }
    case gt::ChannelKind::pure_amplifier: {
      const double x = d.params[0] * sigma / (d.params[0] - 1.0);
      return std::sqrt(1.0 - 1.0 / (x + 1.0));
    }
    case gt::ChannelKind::additive_noise: {
      const double xi = d.params[0];
      return std::sqrt(1.0 - 4.0 * xi * (xi + sigma) / ((2.0 * xi + sigma) * (2.0 * xi + sigma)));
    }
    default: return std::nullopt;
  }
}

int cmd_bounds(const std::string& channel, const std::string& params, const std::string& sigma_grid, bool oracle,
               double probe_n_s, int cutoff, int output_cutoff, const std::string& out) {
  const auto values = parse_list(params, "--params", true);
  gt::ChannelDescriptor d;
  try {
    d.kind = gt::channel_kind_from_string(channel);
  } catch (const std::invalid_argument& e) {
    throw InvalidInput(e.what());
  }
  d.params = values;
  const auto ideal = gt::make_channel(d);
  const auto sigmas = parse_list(sigma_grid, "--sigma-grid");
  for (double s : sigmas) {
    if (!(s > 0.0)) throw InvalidInput("--sigma-grid entries must be positive");
  }
  gt::uniform_bound(d, sigmas.front());
  if (oracle && d.modes() != 1) throw InvalidInput("--oracle needs a single-mode channel");
  const int oc = output_cutoff >= 0 ? output_cutoff : cutoff;

  std::string csv = "channel,sigma_bar,bound,bound_kind,simplified";
  if (oracle) csv += ",oracle_n_s,oracle_p,oracle_leakage";
  csv += '\n';
  std::optional<gt::FockState> psi;
  std::optional<gt::PhaseInsensitiveMap> ideal_map;
  if (oracle) {
    psi = gt::make_tmsv_fock(probe_n_s, cutoff);
    ideal_map = gt::fock_map_for(d, cutoff, oc);
  }
  int status = 0;
  for (double sigma : sigmas) {
    const auto report = gt::uniform_bound(d, sigma);
    const auto simple = simplified_bound(d, sigma);
    csv += fmt::format("\"{}\",{},{},{},{}", d.label(), num(sigma), num(report.bound_value), gt::to_string(report.kind),
                       simple ? num(*simple) : "");
    if (oracle) {
      const auto sim = gt::simulate(ideal, sigma).simulated;
      const auto a = gt::apply_map(*ideal_map, *psi, 1);
      const auto b = gt::apply_map(gt::fock_map_for(*sim.descriptor(), cutoff, oc), *psi, 1);
      const double leakage = std::max(a.leakage(), b.leakage());
      if (1.0 - leakage < gt::kDefaultTruncationFloor || !psi->trusted()) {
        log(fmt::format("sigma={}: oracle lost {:.3g} of its trace (probe weight {:.17g}); raise --cutoff", sigma,
                        leakage, psi->truncation_weight()));
        status = kExitTruncation;
      }
      const double p = gt::p_distance(gt::fidelity_fock(a, b));
      csv += fmt::format(",{},{},{}", num(probe_n_s), num(p), num(leakage));
      if (p > report.bound_value + 1e-4) {
        log(fmt::format("sigma={}: oracle P {} exceeds the bound {}", sigma, num(p), num(report.bound_value)));
        status = std::max(status, kExitFailure);
      }
    }
    csv += '\n';
  }
  const gt::Json config{{"channel", gt::descriptor_to_json(d)}, {"sigma_grid", sigmas}, {"oracle", oracle},
                        {"probe_n_s", probe_n_s},             {"cutoff", cutoff},      {"output_cutoff", oc}};
  csv += metadata_line("bounds", config);
  write_output(out, csv);
  return status;
}

int cmd_game(const std::string& path, std::optional<long long> seed, std::optional<int> games, bool rounds,
             const std::string& out, const std::string& summary, int threads) {
  const auto doc = load_scenario(path, "game", {"games"});
  auto config = gt::game_config_from_json(doc["game"]);
  if (seed) {
    if (*seed < 0) throw InvalidInput("--seed must be >= 0");
    config.seed = static_cast<std::uint64_t>(*seed);
  }
  int count = games.value_or(doc.contains("games") ? doc["games"].get<int>() : 1);
  if (count < 1) throw InvalidInput("number of games must be positive");
  const auto series = gt::play_series(config, count, rounds, threads);

  gt::Json transcripts = gt::Json::array();
  for (const auto& g : series.games) transcripts.push_back(gt::transcript_to_json(g, rounds));
  const double teleporter = series.win_frequency(gt::Player::teleporter);
  const double distinguisher = series.win_frequency(gt::Player::distinguisher);
  const gt::Json result{{"version", GTSIM_VERSION},
                        {"config", gt::game_config_to_json(config)},
                        {"games", count},
                        {"win_frequency", {{"teleporter", teleporter}, {"distinguisher", distinguisher}}},
                        {"verdict", teleporter > distinguisher ? "teleporter" : "distinguisher"},
                        {"transcripts", transcripts}};
  write_output(out, result.dump(2) + "\n");

  std::string csv = "game,seed,sigma_bar,probe_n_s,success_probability,matches,match_fraction,winner\n";
  for (std::size_t i = 0; i < series.games.size(); ++i) {
    const auto& g = series.games[i];
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", i, g.seed, num(g.strategies.sigma_bar), num(g.strategies.n_s),
                       num(g.strategies.success_probability), g.matches, num(g.match_fraction), gt::to_string(g.winner));
  }
  csv += metadata_line("game", gt::game_config_to_json(config));
  if (!summary.empty()) write_output(summary, csv);
  log(fmt::format("{} games: teleporter won {:.4f}, distinguisher won {:.4f} (round probability {:.6f})", count,
                  teleporter, distinguisher, series.strategies.success_probability));
  return 0;
}

int cmd_skc(double eta, std::optional<double> uses, double eps, std::optional<double> n_b, std::optional<double> variance) {
  gt::Json out{{"eta", eta}, {"eps", eps}, {"c_epsilon", gt::c_epsilon(eps)}};
  if (uses) out["uses"] = *uses;
  if (!n_b) {
    out["pure_loss_bound"] = gt::pure_loss_bound(eta, uses, eps);
  } else {
    if (!variance) throw InvalidInput("the thermal bound needs --variance");
    if (!uses) throw InvalidInput("the thermal bound needs --uses");
    const auto t = gt::thermal_bound_terms(eta, *n_b, *uses, eps, *variance);
    out["n_b"] = *n_b;
    out["variance"] = *variance;
    out["thermal_bound"] = {{"total", t.total()},
                            {"leading", t.leading},
                            {"entropy", t.entropy},
                            {"second_order", t.second_order},
                            {"finite_size", t.finite_size}};
  }
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_verify(const std::string& level_name, const std::string& out, int threads) {
  const auto level = gt::verify_level_from_string(level_name);
  gt::VerificationReport report{level, {}};
  for (int id = 1; id <= 9; ++id) {
    report.criteria.push_back(gt::run_criterion(id, level, threads));
    std::cerr << gt::format_line(report.criteria.back()) << '\n';
  }
  write_output(out, gt::report_to_json(report).dump(2) + "\n");
  return report.all_passed() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Teleportation simulation of bosonic Gaussian channels"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware); GT_DETERMINISTIC=1 forces 1");

  auto* sweep = app.add_subcommand("sweep", "run a sweep scenario and write CSV");
  std::string sweep_path, sweep_out;
  std::optional<int> sweep_cutoff;
  sweep->add_option("scenario", sweep_path, "scenario JSON file")->required();
  sweep->add_option("--out", sweep_out, "CSV path (default: scenario output_path or stdout)");
  sweep->add_option("--cutoff", sweep_cutoff, "override the Fock cutoff");

  auto* bounds = app.add_subcommand("bounds", "tabulate uniform bounds over a sigma grid");
  std::string channel, params, sigma_grid, bounds_out;
  bool oracle = false;
  double probe_n_s = 1.0;
  int cutoff = 60, output_cutoff = -1;
  bounds->add_option("--channel", channel, "thermal, pure_loss, amplifier, pure_amplifier, additive_noise")->required();
  bounds->add_option("--params", params, "comma-separated parameters, e.g. 0.5,0")->required();
  bounds->add_option("--sigma-grid", sigma_grid, "comma-separated sigma values")->required();
  bounds->add_flag("--oracle", oracle, "add Fock-oracle distances for a TMSV probe");
  bounds->add_option("--probe-n-s", probe_n_s, "probe photon number for --oracle");
  bounds->add_option("--cutoff", cutoff, "probe Fock cutoff for --oracle");
  bounds->add_option("--output-cutoff", output_cutoff, "channel output cutoff for --oracle");
  bounds->add_option("--out", bounds_out, "CSV path (default stdout)");

  auto* game = app.add_subcommand("game", "play a seeded series of teleportation games");
  std::string game_path, game_out, game_summary;
  std::optional<long long> seed;
  std::optional<int> games;
  bool keep_rounds = false;
  game->add_option("scenario", game_path, "scenario JSON file")->required();
  game->add_option("--seed", seed, "master seed (overrides the scenario)");
  game->add_option("--games", games, "number of games (overrides the scenario)");
  game->add_flag("--rounds", keep_rounds, "include per-round records in the transcript");
  game->add_option("--out", game_out, "transcript JSON path (default stdout)");
  game->add_option("--summary", game_summary, "summary CSV path");

  auto* skc = app.add_subcommand("skc", "secret-key capacity bounds");
  double eta = 0.5, eps = 0.1;
  std::optional<double> uses, n_b, variance;
  skc->add_option("--eta", eta, "transmissivity")->required();
  skc->add_option("--uses", uses, "channel uses n (omit for the asymptotic pure-loss value)");
  skc->add_option("--eps", eps, "error parameter")->required();
  skc->add_option("--n-b", n_b, "thermal photons; selects the thermal bound");
  skc->add_option("--variance", variance, "relative-entropy variance V for the thermal bound");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  std::string level = "fast", verify_out;
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--out", verify_out, "report JSON path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  const int workers = gt::resolve_threads(threads);
  try {
    if (*sweep) return cmd_sweep(sweep_path, sweep_out, sweep_cutoff, workers);
    if (*bounds) {
      return cmd_bounds(channel, params, sigma_grid, oracle, probe_n_s, cutoff, output_cutoff, bounds_out);
    }
    if (*game) return cmd_game(game_path, seed, games, keep_rounds, game_out, game_summary, workers);
    if (*skc) return cmd_skc(eta, uses, eps, n_b, variance);
    if (*verify) return cmd_verify(level, verify_out, workers);
  } catch (const gt::TruncationError& e) {
    log(fmt::format("truncation: {}", e.what()));
    return kExitTruncation;
  } catch (const InvalidInput& e) {
    log(e.what());
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    log(fmt::format("invalid input: {}", e.what()));
    return kExitInvalid;
  } catch (const gt::Json::exception& e) {
    log(fmt::format("invalid input: {}", e.what()));
    return kExitInvalid;
  } catch (const std::exception& e) {
    log(fmt::format("error: {}", e.what()));
    return kExitFailure;
  }
  return 0;
}
