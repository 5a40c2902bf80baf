#include <gtest/gtest.h>

#include <cmath>

#include "gt/telegame.hpp"
#include "gt/teleport.hpp"

namespace gt {
namespace {

GameConfig ideal_config(RevealOrder order) {
  GameConfig c;
  c.reveal_order = order;
  if (order == RevealOrder::distinguisher_first) {
    c.teleporter = {TeleporterRule::match_probability, 0.0, 0.7, 0.0};
  } else {
    c.teleporter = {TeleporterRule::fixed, 0.1, 0.0, 0.0};
  }
  return c;
}

GameConfig gaussian_config(RevealOrder order) {
  GameConfig c;
  c.variant = GameVariant::gaussian_channel;
  c.channel = ChannelDescriptor{ChannelKind::pure_loss, {0.5}, {}};
  c.reveal_order = order;
  c.teleporter = {TeleporterRule::uniform_bound, 0.0, 0.0, 0.04};
  return c;
}

TEST(RoundProbability, TmsvIntervalAtFidelityPointFour) {
  GameConfig c;
  const auto p = round_success_probability(1.0, c, 0.5);
  EXPECT_NEAR(p.fidelity, 0.4, 1e-12);
  EXPECT_NEAR(p.lower, 0.5 * (1.0 + 0.36754446796632413), 1e-12);
  EXPECT_NEAR(p.upper, 0.5 * (1.0 + 0.77459666924148338), 1e-12);
  c.oracle_cutoff = 60;
  const auto exact = round_success_probability(1.0, c, 0.5);
  ASSERT_TRUE(exact.exact.has_value());
  EXPECT_GT(*exact.exact, p.lower);
  EXPECT_LT(*exact.exact, p.upper);
}

TEST(RoundProbability, IndistinguishableCases) {
  GameConfig c;
  EXPECT_EQ(round_success_probability(3.0, c, 0.0).certified_for(Player::distinguisher), 0.5);
  EXPECT_LT(round_success_probability(1.0, c, 1e-10).upper, 0.5 + 1e-4);
}

TEST(RequiredSigma, InvertsClosedForms) {
  const auto loss = required_sigma_for_target({ChannelKind::thermal, {0.5, 0.0}, {}}, 0.05);
  EXPECT_NEAR(loss.sigma_bar, 0.002506265664160401, 1e-12);
  EXPECT_TRUE(loss.attained);
  const auto amp = required_sigma_for_target({ChannelKind::amplifier, {2.0, 0.0}, {}}, 0.1);
  EXPECT_NEAR(amp.sigma_bar, 0.0050505050505050505, 1e-12);
  const auto zero = required_sigma_for_target({ChannelKind::pure_loss, {0.5}, {}}, 0.0);
  EXPECT_EQ(zero.sigma_bar, 0.0);
  EXPECT_FALSE(zero.attained);
  EXPECT_THROW(required_sigma_for_target({ChannelKind::identity, {}, {}}, 0.1), std::invalid_argument);
}

TEST(Game, SeededDeterminismAndVerdictRecomputation) {
  auto c = ideal_config(RevealOrder::distinguisher_first);
  c.rounds = 2000;
  c.seed = 17;
  const auto a = play_game(c);
  const auto b = play_game(c);
  EXPECT_EQ(transcript_to_json(a, true), transcript_to_json(b, true));
  EXPECT_EQ(verdict(a.rounds, c.threshold), a.winner);
  EXPECT_GE(a.strategies.success_probability, 0.5);
  EXPECT_LE(a.strategies.success_probability, 1.0);
}

TEST(Game, IdealTeleporterSecondWins) {
  const auto series = play_series(ideal_config(RevealOrder::distinguisher_first), 100);
  EXPECT_EQ(series.strategies.n_s, 1000.0);
  EXPECT_LE(series.strategies.success_probability, 0.7);
  EXPECT_GT(series.win_frequency(Player::teleporter), 0.999);
}

TEST(Game, IdealTeleporterFirstLoses) {
  const auto series = play_series(ideal_config(RevealOrder::teleporter_first), 100);
  EXPECT_GT(series.strategies.success_probability, 0.85);
  EXPECT_EQ(series.strategies.claimant, Player::distinguisher);
  EXPECT_GT(series.win_frequency(Player::distinguisher), 0.999);
}

TEST(Game, GaussianTeleporterWinsBothOrders) {
  for (auto order : {RevealOrder::distinguisher_first, RevealOrder::teleporter_first}) {
    const auto series = play_series(gaussian_config(order), 100);
    EXPECT_LT(series.strategies.success_probability, 0.52);
    EXPECT_GT(series.win_frequency(Player::teleporter), 0.999);
  }
}

TEST(Game, SeriesIndependentOfThreads) {
  auto c = ideal_config(RevealOrder::teleporter_first);
  c.rounds = 500;
  const auto one = play_series(c, 12, true, 1);
  const auto four = play_series(c, 12, true, 4);
  for (int i = 0; i < 12; ++i) EXPECT_EQ(transcript_to_json(one.games[i], true), transcript_to_json(four.games[i], true));
}

TEST(Game, StrategyVariantMismatchRejected) {
  auto c = ideal_config(RevealOrder::teleporter_first);
  c.teleporter.rule = TeleporterRule::match_probability;
  EXPECT_THROW(resolve_strategies(c), std::invalid_argument);
  c.teleporter.rule = TeleporterRule::uniform_bound;
  EXPECT_THROW(resolve_strategies(c), std::invalid_argument);
  auto g = gaussian_config(RevealOrder::teleporter_first);
  g.channel.reset();
  EXPECT_THROW(resolve_strategies(g), std::invalid_argument);
}

TEST(Game, ConfigJsonRoundTripAndStrictness) {
  const auto c = gaussian_config(RevealOrder::teleporter_first);
  const auto doc = game_config_to_json(c);
  EXPECT_EQ(game_config_to_json(game_config_from_json(doc)), doc);
  auto bad = doc;
  bad["colour"] = "red";
  EXPECT_THROW(game_config_from_json(bad), std::invalid_argument);
}

TEST(Game, SplitmixReference) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

}  // namespace
}  // namespace gt
