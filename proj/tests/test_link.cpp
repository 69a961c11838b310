#include <doctest.h>

#include <cmath>

#include "ccnsim/link.hpp"

using namespace ccnsim;

TEST_CASE("signal profile interpolates, clamps and holds flat at the ends")
{
  SignalProfile p({{0.0, 1.0}, {100.0, 0.5}, {200.0, 0.0}});
  CHECK(p.q_at(-50.0) == doctest::Approx(1.0));
  CHECK(p.q_at(0.0) == doctest::Approx(1.0));
  CHECK(p.q_at(50.0) == doctest::Approx(0.75));
  CHECK(p.q_at(100.0) == doctest::Approx(0.5));
  CHECK(p.q_at(150.0) == doctest::Approx(0.25));
  CHECK(p.q_at(500.0) == doctest::Approx(0.0));

  SignalProfile wild({{0.0, 2.0}, {10.0, -1.0}});
  for (double t = 0.0; t <= 10.0; t += 1.0) {
    CHECK(wild.q_at(t) >= 0.0);
    CHECK(wild.q_at(t) <= 1.0);
  }

  CHECK(SignalProfile().q_at(123.0) == doctest::Approx(1.0));
  CHECK(SignalProfile::constant(0.35).q_at(99.0) == doctest::Approx(0.35));
}

TEST_CASE("frame loss follows p_max * (1-q)^gamma and is monotone in q")
{
  LossModel loss;  // defaults 0.9, 2.0
  CHECK(loss.frame_loss(1.0) == doctest::Approx(0.0));
  CHECK(loss.frame_loss(0.0) == doctest::Approx(0.9));
  CHECK(loss.frame_loss(0.5) == doctest::Approx(0.9 * 0.25));
  double prev = 1.0;
  for (double q = 0.0; q <= 1.0001; q += 0.05) {
    double p = loss.frame_loss(q);
    CHECK(p <= prev + 1e-12);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    prev = p;
  }

  LossModel fixed;
  fixed.fixed = 0.25;
  CHECK(fixed.frame_loss(0.0) == doctest::Approx(0.25));
  CHECK(fixed.frame_loss(1.0) == doctest::Approx(0.25));
}

TEST_CASE("effective bandwidth applies the rate-adaptation floor")
{
  LinkModel link;
  link.bandwidth_pkts_per_ms = 30.0;
  CHECK(effective_bandwidth(link, 1.0) == doctest::Approx(30.0));
  CHECK(effective_bandwidth(link, 0.5) == doctest::Approx(15.0));
  CHECK(effective_bandwidth(link, 0.0) == doctest::Approx(3.0));   // floor 0.1
  CHECK(effective_bandwidth(link, 0.05) == doctest::Approx(3.0));
}

TEST_CASE("delivery probability closed form")
{
  LinkModel link;
  link.loss.fixed = 0.5;
  link.retry_limit = 0;
  CHECK(delivery_probability(link, 1.0) == doctest::Approx(0.5));
  link.retry_limit = 1;
  CHECK(delivery_probability(link, 1.0) == doctest::Approx(0.75));
  link.loss.fixed = 0.3;
  link.retry_limit = 7;
  CHECK(delivery_probability(link, 1.0) == doctest::Approx(1.0 - std::pow(0.3, 8)));
  CHECK(delivery_probability(link, 1.0) == doctest::Approx(0.99993439).epsilon(1e-6));
}

TEST_CASE("transmit trivial cases")
{
  Rng rng(1);
  LinkModel link;
  link.loss.fixed = 0.0;
  link.retry_limit = 7;
  auto out = transmit(link, 1.0, rng);
  CHECK(out.delivered);
  CHECK(out.attempts == 1);

  link.loss.fixed = 1.0;
  out = transmit(link, 1.0, rng);
  CHECK_FALSE(out.delivered);
  CHECK(out.attempts == 8);
}

TEST_CASE("transmit attempt bounds and retry delay accounting")
{
  Rng rng(2);
  LinkModel link;
  link.base_delay_ms = 5.0;
  link.jitter_ms = 0.0;
  link.per_retry_delay_ms = 2.0;
  link.loss.fixed = 0.5;
  link.retry_limit = 3;
  for (int i = 0; i < 5000; ++i) {
    auto out = transmit(link, 1.0, rng);
    CHECK(out.attempts >= 1);
    CHECK(out.attempts <= link.retry_limit + 1);
    if (!out.delivered) {
      CHECK(out.attempts == link.retry_limit + 1);
    }
    else {
      CHECK(out.total_delay_ms ==
            doctest::Approx(5.0 + 2.0 * (out.attempts - 1)).epsilon(1e-9));
    }
  }
}

TEST_CASE("empirical delivery rate matches the closed form within a 99% CI")
{
  const int trials = 100000;
  Rng rng(77);
  for (double p : {0.1, 0.3, 0.5}) {
    for (int R : {0, 1, 7}) {
      LinkModel link;
      link.loss.fixed = p;
      link.retry_limit = R;
      int delivered = 0;
      for (int i = 0; i < trials; ++i) {
        delivered += transmit(link, 0.7, rng).delivered ? 1 : 0;
      }
      double expected = delivery_probability(link, 0.7);
      double se = std::sqrt(expected * (1.0 - expected) / trials);
      double margin = 2.576 * se + 1e-9;
      CHECK(std::abs(double(delivered) / trials - expected) <= margin);
    }
  }
}

TEST_CASE("delivery improves monotonically with signal quality")
{
  LinkModel link;  // quality-dependent default loss
  link.retry_limit = 2;
  double prev = -1.0;
  for (double q = 0.0; q <= 1.0001; q += 0.1) {
    double d = delivery_probability(link, q);
    CHECK(d >= prev - 1e-12);
    prev = d;
  }
}

TEST_CASE("with no retries the network-layer loss equals the frame loss")
{
  LinkModel link;
  link.loss.fixed = 0.3;
  link.retry_limit = 0;
  CHECK(delivery_probability(link, 1.0) == doctest::Approx(0.7));
  Rng rng(5);
  int delivered = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    delivered += transmit(link, 1.0, rng).delivered ? 1 : 0;
  }
  CHECK(double(delivered) / trials == doctest::Approx(0.7).epsilon(0.02));
}
