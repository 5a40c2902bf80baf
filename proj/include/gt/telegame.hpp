#pragma once

// Monte Carlo of the teleportation game: a referee flips a coin to choose
// between a channel and its teleportation simulation, the distinguisher
// guesses, and the distinguisher wins if the fraction of correct guesses
// exceeds the threshold.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gt/channels.hpp"
#include "gt/json_fields.hpp"
#include "gt/seeding.hpp"

namespace gt {

enum class GameVariant { ideal_channel, gaussian_channel };
enum class RevealOrder { distinguisher_first, teleporter_first };
enum class Player { distinguisher, teleporter };

std::string to_string(GameVariant v);
std::string to_string(RevealOrder r);
std::string to_string(Player p);

/// Probes are TMSV(N_S); N_S = 0 is the vacuum. Moving first, the
/// distinguisher commits to the last schedule entry; moving second, to the
/// first entry whose certified round probability exceeds the target (or the
/// last entry if none does).
struct DistinguisherStrategy {
  std::vector<double> n_s_schedule{1.0, 10.0, 100.0, 1000.0};
  double target_probability = 0.85;
};

enum class TeleporterRule {
  fixed,              // commit to sigma_bar
  match_probability,  // knows the probe: largest sigma with round probability <= target
  uniform_bound,      // largest sigma whose uniform bound is <= target_p
};

std::string to_string(TeleporterRule r);

struct TeleporterStrategy {
  TeleporterRule rule = TeleporterRule::fixed;
  double sigma_bar = 0.1;
  double target_probability = 0.7;
  double target_p = 0.04;
};

struct GameConfig {
  GameVariant variant = GameVariant::ideal_channel;
  std::optional<ChannelDescriptor> channel;  // single-mode, gaussian variant only
  RevealOrder reveal_order = RevealOrder::distinguisher_first;
  int rounds = 10000;
  std::uint64_t seed = 0;
  DistinguisherStrategy distinguisher;
  TeleporterStrategy teleporter;
  double threshold = 0.75;
  int oracle_cutoff = 0;  // > 0 enables exact trace distances when trusted
};

/// Round success probability 1/2 (1 + T) with T the trace distance between
/// the two outputs on the probe.
struct RoundProbability {
  double lower = 0.5;
  double upper = 1.0;
  std::optional<double> exact;
  double fidelity = 1.0;
  std::string method;
  /// The endpoint least favourable to `claimant`, or the exact value.
  double certified_for(Player claimant) const;
};

RoundProbability round_success_probability(double n_s, const GameConfig& config, double sigma_bar);

struct SigmaChoice {
  double sigma_bar = 0.0;
  bool attained = true;  // false when only the infimum sigma = 0 meets the target
};

/// Largest sigma (to relative 1e-10) whose uniform bound does not exceed
/// target_p, found by bisection. Throws for channels without a uniform bound.
SigmaChoice required_sigma_for_target(const ChannelDescriptor& channel, double target_p);

struct ResolvedStrategies {
  double n_s = 0.0;
  double sigma_bar = 0.0;
  RoundProbability probability;
  Player claimant = Player::teleporter;
  double success_probability = 0.5;
};

/// Applies the reveal order to the strategies; throws std::invalid_argument
/// when a rule cannot be played in the configured variant or order.
ResolvedStrategies resolve_strategies(const GameConfig& config);

struct RoundRecord {
  int coin = 0;
  int guess = 0;
  bool match = false;
};

struct GameTranscript {
  GameConfig config;
  ResolvedStrategies strategies;
  std::uint64_t seed = 0;
  std::vector<RoundRecord> rounds;
  long long matches = 0;
  double match_fraction = 0.0;
  Player winner = Player::teleporter;
};

Player verdict(const std::vector<RoundRecord>& rounds, double threshold);

/// Per-game seed derived from the master seed by counter.
std::uint64_t game_seed(std::uint64_t master, std::uint64_t index);

GameTranscript play_rounds(const GameConfig& config, const ResolvedStrategies& strategies, std::uint64_t seed);
GameTranscript play_game(const GameConfig& config);

struct GameSeries {
  ResolvedStrategies strategies;
  std::vector<GameTranscript> games;  // rounds dropped unless kept
  double win_frequency(Player p) const;
};

/// `games` independent games with seeds game_seed(config.seed, i).
GameSeries play_series(const GameConfig& config, int games, bool keep_rounds = false, int threads = 1);

GameConfig game_config_from_json(const Json& doc);
Json game_config_to_json(const GameConfig& config);
Json transcript_to_json(const GameTranscript& transcript, bool include_rounds);

}  // namespace gt
