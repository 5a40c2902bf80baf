#include "gt/telegame.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "gt/fidelity.hpp"
#include "gt/fock.hpp"
#include "gt/parallel.hpp"
#include "gt/teleport.hpp"

namespace gt {

namespace {

constexpr std::array<int, 1> kProbedMode{1};

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

/// Largest x in [0, inf) with f(x) <= target for f increasing; relative
/// precision 1e-10.
double bisect_largest_below(const std::function<double(double)>& f, double target) {
  double lo = 0.0, hi = 1.0;
  while (f(hi) <= target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw std::invalid_argument("target is not reached for any sigma");
  }
  while (hi - lo > 1e-10 * hi) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) <= target ? lo : hi) = mid;
  }
  return lo;
}

std::optional<double> oracle_trace_distance(double n_s, const GameConfig& config, double sigma_bar) {
  if (config.oracle_cutoff <= 0) return std::nullopt;
  const auto psi = make_tmsv_fock(n_s, config.oracle_cutoff);
  if (!psi.trusted()) return std::nullopt;
  FockState a = psi, b = psi;
  if (config.variant == GameVariant::ideal_channel) {
    b = apply_teleport_channel_fock(psi, sigma_bar, 1);
  } else {
    const auto sim = simulate(make_channel(*config.channel), sigma_bar);
    a = apply_map(fock_map_for(*config.channel, config.oracle_cutoff, config.oracle_cutoff), psi, 1);
    b = apply_map(fock_map_for(*sim.simulated.descriptor(), config.oracle_cutoff, config.oracle_cutoff), psi, 1);
  }
  if (!a.trusted() || !b.trusted() || a.leakage() > 1e-6 || b.leakage() > 1e-6) return std::nullopt;
  return trace_distance_fock(a, b);
}

Player claimant_of(const GameConfig& config) {
  if (config.variant == GameVariant::gaussian_channel) return Player::teleporter;
  return config.reveal_order == RevealOrder::distinguisher_first ? Player::teleporter : Player::distinguisher;
}

void validate(const GameConfig& c) {
  require(c.rounds > 0, "rounds must be positive");
  require(c.threshold > 0.5 && c.threshold < 1.0, "threshold must lie in (1/2, 1)");
  require(!c.distinguisher.n_s_schedule.empty(), "distinguisher schedule must not be empty");
  for (std::size_t k = 0; k < c.distinguisher.n_s_schedule.size(); ++k) {
    require(c.distinguisher.n_s_schedule[k] >= 0.0, "probe photon numbers must be >= 0");
    if (k > 0) {
      require(c.distinguisher.n_s_schedule[k] > c.distinguisher.n_s_schedule[k - 1],
              "distinguisher schedule must be strictly increasing");
    }
  }
  if (c.variant == GameVariant::gaussian_channel) {
    require(c.channel.has_value(), "the gaussian variant needs a channel");
    require(c.channel->modes() == 1, "the gaussian variant needs a single-mode channel");
  } else {
    require(!c.channel.has_value(), "the ideal variant takes no channel");
  }
}

}  // namespace

std::string to_string(GameVariant v) { return v == GameVariant::ideal_channel ? "ideal_channel" : "gaussian_channel"; }
std::string to_string(RevealOrder r) {
  return r == RevealOrder::distinguisher_first ? "distinguisher_first" : "teleporter_first";
}
std::string to_string(Player p) { return p == Player::distinguisher ? "distinguisher" : "teleporter"; }
std::string to_string(TeleporterRule r) {
  switch (r) {
    case TeleporterRule::fixed: return "fixed";
    case TeleporterRule::match_probability: return "match_probability";
    case TeleporterRule::uniform_bound: return "uniform_bound";
  }
  return "unknown";
}

double RoundProbability::certified_for(Player claimant) const {
  if (exact) return *exact;
  return claimant == Player::teleporter ? upper : lower;
}

RoundProbability round_success_probability(double n_s, const GameConfig& config, double sigma_bar) {
  require(n_s >= 0.0, "probe photon number must be >= 0");
  RoundProbability out;
  if (sigma_bar == 0.0) {
    out.lower = out.upper = 0.5;
    out.exact = 0.5;
    out.method = "channels coincide";
    return out;
  }
  const auto probe = make_tmsv_state(n_s);
  if (config.variant == GameVariant::ideal_channel) {
    const auto output = apply_on_subsystem(make_teleport_channel(sigma_bar), probe, kProbedMode);
    out.fidelity = std::min(1.0, overlap_two_mode_zero_mean(probe.cov(), output.cov()));
    out.method = "pure-state overlap";
  } else {
    const auto channel = make_channel(*config.channel);
    const auto simulated = simulate(channel, sigma_bar).simulated;
    out.fidelity = fidelity_gaussian_zero_mean(apply_on_subsystem(channel, probe, kProbedMode),
                                               apply_on_subsystem(simulated, probe, kProbedMode))
                       .fidelity;
    out.method = "gaussian fidelity";
  }
  const auto t = fuchs_van_de_graaf_bounds(out.fidelity);
  out.lower = 0.5 * (1.0 + t.lower);
  out.upper = 0.5 * (1.0 + t.upper);
  if (const auto exact = oracle_trace_distance(n_s, config, sigma_bar)) {
    out.exact = 0.5 * (1.0 + *exact);
    out.method = "fock trace distance";
  }
  return out;
}

SigmaChoice required_sigma_for_target(const ChannelDescriptor& channel, double target_p) {
  require(target_p >= 0.0 && target_p < 1.0, fmt::format("target distance must lie in [0, 1), got {}", target_p));
  // Fails early for families without a uniform bound.
  uniform_bound(channel, 1.0);
  if (target_p == 0.0) return {0.0, false};
  const double sigma =
      bisect_largest_below([&](double s) { return s == 0.0 ? 0.0 : uniform_bound(channel, s).bound_value; }, target_p);
  return {sigma, true};
}

ResolvedStrategies resolve_strategies(const GameConfig& config) {
  validate(config);
  ResolvedStrategies r;
  r.claimant = claimant_of(config);
  const auto& schedule = config.distinguisher.n_s_schedule;
  const auto& tp = config.teleporter;
  const bool ideal = config.variant == GameVariant::ideal_channel;

  auto teleporter_sigma = [&](std::optional<double> known_probe) {
    switch (tp.rule) {
      case TeleporterRule::fixed:
        require(tp.sigma_bar > 0.0, "fixed sigma must be positive");
        return tp.sigma_bar;
      case TeleporterRule::match_probability:
        require(known_probe.has_value(), "match_probability needs the probe, so the teleporter must move second");
        require(tp.target_probability > 0.5 && tp.target_probability < 1.0, "target probability must lie in (1/2, 1)");
        return bisect_largest_below(
            [&](double s) { return round_success_probability(*known_probe, config, s).certified_for(Player::teleporter); },
            tp.target_probability);
      case TeleporterRule::uniform_bound:
        require(!ideal, "the ideal channel has no uniform bound; uniform_bound needs the gaussian variant");
        return required_sigma_for_target(*config.channel, tp.target_p).sigma_bar;
    }
    throw std::invalid_argument("unknown teleporter rule");
  };

  if (config.reveal_order == RevealOrder::distinguisher_first) {
    r.n_s = schedule.back();
    r.sigma_bar = teleporter_sigma(r.n_s);
  } else {
    r.sigma_bar = teleporter_sigma(std::nullopt);
    r.n_s = schedule.back();
    for (double n_s : schedule) {
      if (round_success_probability(n_s, config, r.sigma_bar).certified_for(Player::distinguisher) >
          config.distinguisher.target_probability) {
        r.n_s = n_s;
        break;
      }
    }
  }
  r.probability = round_success_probability(r.n_s, config, r.sigma_bar);
  r.success_probability = r.probability.certified_for(r.claimant);
  return r;
}

Player verdict(const std::vector<RoundRecord>& rounds, double threshold) {
  const auto matches = std::count_if(rounds.begin(), rounds.end(), [](const RoundRecord& r) { return r.match; });
  return static_cast<double>(matches) / static_cast<double>(rounds.size()) > threshold ? Player::distinguisher
                                                                                         : Player::teleporter;
}

std::uint64_t game_seed(std::uint64_t master, std::uint64_t index) { return derive_seed(master, index); }

GameTranscript play_rounds(const GameConfig& config, const ResolvedStrategies& strategies, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng] { return uniform01(rng); };
  GameTranscript t{config, strategies, seed, {}, 0, 0.0, Player::teleporter};
  t.rounds.reserve(config.rounds);
  for (int k = 0; k < config.rounds; ++k) {
    RoundRecord r;
    r.coin = uniform() < 0.5 ? 1 : 0;
    r.match = uniform() < strategies.success_probability;
    r.guess = r.match ? r.coin : 1 - r.coin;
    t.matches += r.match;
    t.rounds.push_back(r);
  }
  t.match_fraction = static_cast<double>(t.matches) / config.rounds;
  t.winner = verdict(t.rounds, config.threshold);
  return t;
}

GameTranscript play_game(const GameConfig& config) { return play_rounds(config, resolve_strategies(config), config.seed); }

double GameSeries::win_frequency(Player p) const {
  if (games.empty()) return 0.0;
  const auto wins = std::count_if(games.begin(), games.end(), [p](const GameTranscript& g) { return g.winner == p; });
  return static_cast<double>(wins) / static_cast<double>(games.size());
}

GameSeries play_series(const GameConfig& config, int games, bool keep_rounds, int threads) {
  require(games > 0, "number of games must be positive");
  GameSeries series{resolve_strategies(config), std::vector<GameTranscript>(games)};
  parallel_for(static_cast<std::size_t>(games), threads, [&](std::size_t i) {
    auto g = play_rounds(config, series.strategies, game_seed(config.seed, i));
    if (!keep_rounds) g.rounds.clear();
    series.games[i] = std::move(g);
  });
  return series;
}

GameConfig game_config_from_json(const Json& doc) {
  constexpr std::string_view where = "game";
  reject_unknown_fields(doc, {"variant", "channel", "reveal_order", "rounds", "seed", "distinguisher", "teleporter",
                              "threshold", "oracle_cutoff"},
                        where);
  GameConfig c;
  const auto variant = get_string(doc, "variant", where);
  if (variant == "ideal_channel") {
    c.variant = GameVariant::ideal_channel;
  } else if (variant == "gaussian_channel") {
    c.variant = GameVariant::gaussian_channel;
  } else {
    throw std::invalid_argument(fmt::format("game: unknown variant '{}'", variant));
  }
  if (doc.contains("channel")) c.channel = descriptor_from_json(doc["channel"]);
  const auto order = get_string(doc, "reveal_order", where);
  if (order == "distinguisher_first") {
    c.reveal_order = RevealOrder::distinguisher_first;
  } else if (order == "teleporter_first") {
    c.reveal_order = RevealOrder::teleporter_first;
  } else {
    throw std::invalid_argument(fmt::format("game: unknown reveal_order '{}'", order));
  }
  c.rounds = static_cast<int>(get_integer_or(doc, "rounds", c.rounds, where));
  const auto seed = get_integer_or(doc, "seed", 0, where);
  require(seed >= 0, "game: seed must be >= 0");
  c.seed = static_cast<std::uint64_t>(seed);
  c.threshold = get_number_or(doc, "threshold", c.threshold, where);
  c.oracle_cutoff = static_cast<int>(get_integer_or(doc, "oracle_cutoff", 0, where));

  if (doc.contains("distinguisher")) {
    const auto& d = doc["distinguisher"];
    reject_unknown_fields(d, {"n_s_schedule", "target_probability"}, "game.distinguisher");
    if (d.contains("n_s_schedule")) c.distinguisher.n_s_schedule = get_number_list(d, "n_s_schedule", "game.distinguisher");
    c.distinguisher.target_probability =
        get_number_or(d, "target_probability", c.distinguisher.target_probability, "game.distinguisher");
  }
  const auto& t = required_field(doc, "teleporter", where);
  reject_unknown_fields(t, {"rule", "sigma_bar", "target_probability", "target_p"}, "game.teleporter");
  const auto rule = get_string(t, "rule", "game.teleporter");
  if (rule == "fixed") {
    c.teleporter.rule = TeleporterRule::fixed;
    c.teleporter.sigma_bar = get_number(t, "sigma_bar", "game.teleporter");
  } else if (rule == "match_probability") {
    c.teleporter.rule = TeleporterRule::match_probability;
    c.teleporter.target_probability = get_number(t, "target_probability", "game.teleporter");
  } else if (rule == "uniform_bound") {
    c.teleporter.rule = TeleporterRule::uniform_bound;
    c.teleporter.target_p = get_number(t, "target_p", "game.teleporter");
  } else {
    throw std::invalid_argument(fmt::format("game.teleporter: unknown rule '{}'", rule));
  }
  validate(c);
  return c;
}

Json game_config_to_json(const GameConfig& c) {
  Json t{{"rule", to_string(c.teleporter.rule)}};
  switch (c.teleporter.rule) {
    case TeleporterRule::fixed: t["sigma_bar"] = c.teleporter.sigma_bar; break;
    case TeleporterRule::match_probability: t["target_probability"] = c.teleporter.target_probability; break;
    case TeleporterRule::uniform_bound: t["target_p"] = c.teleporter.target_p; break;
  }
  Json out{{"variant", to_string(c.variant)},
           {"reveal_order", to_string(c.reveal_order)},
           {"rounds", c.rounds},
           {"seed", c.seed},
           {"threshold", c.threshold},
           {"oracle_cutoff", c.oracle_cutoff},
           {"distinguisher",
            {{"n_s_schedule", c.distinguisher.n_s_schedule},
             {"target_probability", c.distinguisher.target_probability}}},
           {"teleporter", t}};
  if (c.channel) out["channel"] = descriptor_to_json(*c.channel);
  return out;
}

Json transcript_to_json(const GameTranscript& t, bool include_rounds) {
  const auto& s = t.strategies;
  Json probability{{"lower", s.probability.lower},
                   {"upper", s.probability.upper},
                   {"fidelity", s.probability.fidelity},
                   {"method", s.probability.method}};
  if (s.probability.exact) probability["exact"] = *s.probability.exact;
  Json out{{"config", game_config_to_json(t.config)},
           {"seed", t.seed},
           {"probe_n_s", s.n_s},
           {"sigma_bar", s.sigma_bar},
           {"claimant", to_string(s.claimant)},
           {"round_probability", probability},
           {"success_probability_used", s.success_probability},
           {"matches", t.matches},
           {"match_fraction", t.match_fraction},
           {"winner", to_string(t.winner)}};
  if (include_rounds) {
    Json rounds = Json::array();
    for (const auto& r : t.rounds) rounds.push_back({r.coin, r.guess, r.match});
    out["rounds"] = std::move(rounds);
  }
  return out;
}

}  // namespace gt
