#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support.hpp"
#include "swipt/baselines.hpp"
#include "swipt/cli/app.hpp"
#include "swipt/errors.hpp"
#include "swipt/experiments.hpp"
#include "swipt/rng.hpp"

using namespace swipt;
using namespace swipt::testing;

namespace {

Instance sample_channel() {
  auto in = square_instance(11);
  in.cfg.targetEnergy = 0.0;
  return in;
}

alt::SolveOptions sweep_opts() {
  alt::SolveOptions o;
  o.starts = 10;
  o.seed = 3;
  return o;
}

}  // namespace

TEST_CASE("MSE sweep: endpoints and shape") {
  const auto in = sample_channel();
  const auto curve = exp::sweep_region(in.cfg, in.ch, exp::MetricKind::Mse, 12, sweep_opts());
  REQUIRE(curve.points.size() == 13);
  auto o = sweep_opts();
  o.maxIters = 500;
  o.tol = 1e-12;
  const auto ep = baselines::region_endpoints(in.cfg, in.ch, o);
  CHECK(rel(curve.points.front().metric, ep.mMin) <= 1e-6);
  CHECK(rel(curve.points.front().targetEnergy, ep.eID) <= 1e-9);
  CHECK(rel(curve.points.back().achievedEnergy, ep.eMax) <= 1e-9);
  CHECK(rel(curve.points.back().metric, ep.mEH) <= 1e-12);
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].targetEnergy > curve.points[i - 1].targetEnergy);
    CHECK(curve.points[i].metric >= curve.points[i - 1].metric - 1e-9);
  }
  const auto& last = curve.points[curve.points.size() - 2];
  CHECK(rel(last.targetEnergy, ep.eMax * (1 - 1e-9)) <= 1e-12);
  CHECK(curve.config.weights == RVector::Ones(4));
}

TEST_CASE("rate sweep follows the convex oracle") {
  const auto in = sample_channel();
  const auto curve = exp::sweep_region(in.cfg, in.ch, exp::MetricKind::Rate, 20, sweep_opts());
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    CHECK(curve.points[i].metric <= curve.points[i - 1].metric + 1e-9);
  }
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const auto o = baselines::rate_optimal_oracle(in.cfg, in.ch.H, in.ch.G,
                                                  curve.points[i].targetEnergy);
    CHECK(curve.points[i].metric >= 0.98 * o.rateBits);
    CHECK(curve.points[i].metric <= o.rateBits * (1 + 1e-6));
  }
}

TEST_CASE("sweep rejects a single-point grid and aborts with the partial curve") {
  const auto in = sample_channel();
  CHECK_THROWS_AS(exp::sweep_region(in.cfg, in.ch, exp::MetricKind::Mse, 1, sweep_opts()), Error);
  auto bad = in;
  bad.ch.H.setZero();
  try {
    exp::sweep_region(bad.cfg, bad.ch, exp::MetricKind::Mse, 4, sweep_opts());
    FAIL("expected a sweep failure");
  } catch (const exp::SweepAborted& e) {
    CHECK(e.partial().points.size() < 4);
  } catch (const Error&) {
    // the endpoint solve itself may fail before any grid point
  }
}

TEST_CASE("convergence traces descend and more starts help") {
  const auto in = square_instance(5);
  const auto t20 = exp::convergence_trace(in.cfg, in.ch, {}, 20, 10, 1);
  CHECK(t20.rows.size() == 200);
  for (std::size_t i = 1; i < t20.rows.size(); ++i) {
    if (t20.rows[i].start == t20.rows[i - 1].start) {
      CHECK(t20.rows[i].mse <= t20.rows[i - 1].mse + 1e-10);
      CHECK(t20.rows[i].iter == t20.rows[i - 1].iter + 1);
    }
  }
  const auto best = t20.best();
  CHECK(best.size() == 10);
  const auto t1 = exp::convergence_trace(in.cfg, in.ch, {}, 1, 10, 1);
  CHECK(best.back().mse <= t1.best().back().mse);

  const auto again = exp::convergence_trace(in.cfg, in.ch, {}, 20, 10, 1);
  std::ostringstream a, b;
  cli::write_convergence_csv(a, t20.rows);
  cli::write_convergence_csv(b, again.rows);
  CHECK(a.str() == b.str());
}

TEST_CASE("convergence budget against a long reference") {
  const auto in = square_instance(6);
  const auto quick = exp::convergence_trace(in.cfg, in.ch, {}, 20, 10, 2);
  const auto ref = exp::convergence_trace(in.cfg, in.ch, {}, 100, 50, 3);
  CHECK(quick.best().back().mse <= 1.01 * ref.best().back().mse);
}

TEST_CASE("Gray 4QAM mapping") {
  const double a = std::sqrt(0.5);
  CHECK(exp::qpsk_symbol(0, 0) == Complex(a, a));
  CHECK(exp::qpsk_symbol(1, 0) == Complex(-a, a));
  CHECK(exp::qpsk_symbol(0, 1) == Complex(a, -a));
  CHECK(exp::qpsk_symbol(1, 1) == Complex(-a, -a));
  CHECK(std::norm(exp::qpsk_symbol(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("scheme names round-trip") {
  for (auto s : {exp::Scheme::WmmseIdentity, exp::Scheme::RateOracle,
                 exp::Scheme::EnergyBeamformer}) {
    CHECK(exp::parse_scheme(exp::to_string(s)) == s);
  }
  CHECK_THROWS_AS(exp::parse_scheme("zf"), Error);
}

TEST_CASE("BER vanishes in the noiseless limit") {
  const auto cfg = SystemConfig::square(4, 1.0);
  const auto r = exp::ber_montecarlo(cfg, {exp::Scheme::WmmseIdentity}, 3, 500, {80.0}, 9);
  CHECK(r.bitErrors[0][0] == 0);
  CHECK(r.bitsTotal[0][0] == 3ull * 500 * 2 * 4);
}

TEST_CASE("single-stream BER matches the Q-function") {
  SystemConfig cfg;
  cfg.nTx = cfg.nStreams = cfg.nId = cfg.nEh = 1;
  cfg.weights = RVector::Ones(1);
  const double snrDb = 6.0;
  exp::BerOptions opt;
  const std::uint64_t seed = 21;
  const int n = 200000;
  const auto r = exp::ber_montecarlo(cfg, {exp::Scheme::WmmseIdentity, exp::Scheme::RateOracle},
                                     1, n, {snrDb}, seed, opt);
  // realized channel of the single realization
  auto c = cfg;
  c.powerBudget = std::pow(10.0, snrDb / 10.0) * std::pow(opt.distId, opt.pathlossExponent);
  const auto ch = generate_channels(c, opt.distId, opt.distEh, derive_seed(seed, 0),
                                    opt.pathlossExponent);
  const double postSnr = c.powerBudget * std::norm(ch.H(0, 0));
  const double p = qfunc(std::sqrt(postSnr));
  const double sigma = std::sqrt(p * (1 - p) / (2.0 * n));
  for (std::size_t s = 0; s < 2; ++s) CHECK(std::abs(r.ber(s, 0) - p) <= 3 * sigma);
}

TEST_CASE("BER estimates are stable, bounded and reproducible") {
  const auto cfg = SystemConfig::square(4, 1.0);
  const std::vector<exp::Scheme> schemes = {exp::Scheme::WmmseIdentity,
                                            exp::Scheme::EnergyBeamformer};
  exp::BerOptions opt;
  opt.solve.starts = 4;
  const auto a = exp::ber_montecarlo(cfg, schemes, 10, 2000, {5.0, 10.0}, 4, opt);
  const auto b = exp::ber_montecarlo(cfg, schemes, 10, 4000, {5.0, 10.0}, 4, opt);
  for (std::size_t s = 0; s < schemes.size(); ++s) {
    for (std::size_t k = 0; k < 2; ++k) {
      const double pa = a.ber(s, k), pb = b.ber(s, k);
      CHECK(pa >= 0.0);
      CHECK(pa <= 0.5);
      const double sd = std::sqrt(pa * (1 - pa) / a.bitsTotal[s][k] +
                                  pb * (1 - pb) / b.bitsTotal[s][k]);
      CHECK(std::abs(pa - pb) <= 4 * sd + 1e-12);
    }
  }
  opt.workers = 3;
  const auto c = exp::ber_montecarlo(cfg, schemes, 10, 2000, {5.0, 10.0}, 4, opt);
  std::ostringstream sa, sc;
  cli::write_ber_csv(sa, a);
  cli::write_ber_csv(sc, c);
  CHECK(sa.str() == sc.str());
  CHECK(a.channelsUsed == 10);
  CHECK(a.bitsPerChannel == 2000ull * 2 * 4);
}

TEST_CASE("SNR gain by log interpolation") {
  exp::BerResult r;
  r.snrGridDb = {0, 10, 20};
  r.schemes = {exp::Scheme::WmmseIdentity, exp::Scheme::RateOracle};
  r.bitsTotal = {{1000000, 1000000, 1000000}, {1000000, 1000000, 1000000}};
  r.bitErrors = {{100000, 1000, 10}, {100000, 10000, 100}};
  // first scheme crosses 1e-3 at 10 dB, the second at 15 dB
  CHECK(exp::snr_gain_db(r, exp::Scheme::WmmseIdentity, exp::Scheme::RateOracle, 1e-3) ==
        doctest::Approx(5.0));
  CHECK(std::isnan(exp::snr_gain_db(r, exp::Scheme::WmmseIdentity, exp::Scheme::RateOracle, 1e-6)));
}
