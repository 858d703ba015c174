#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>

#include <doctest.h>

#include "ltirelay.h"

#include "core/harness.hpp"
#include "core/objective.hpp"

TEST_CASE("capi: grid lifecycle and points") {
  ltir_grid* g = nullptr;
  REQUIRE(ltir_grid_create(64, &g) == LTIR_OK);
  CHECK(ltir_grid_size(g) == 64);
  double nodes[64], weights[64];
  REQUIRE(ltir_grid_points(g, nodes, weights, 64) == LTIR_OK);
  double sum = 0;
  for (double w : weights) sum += w;
  CHECK(sum == doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(ltir_grid_points(g, nodes, weights, 10) == LTIR_ERR_INVALID_ARG);
  ltir_grid_destroy(g);

  CHECK(ltir_grid_create(0, &g) == LTIR_ERR_INVALID_ARG);
  CHECK(std::strlen(ltir_last_error()) > 0);
}

TEST_CASE("capi: channel create/generate/load round trips") {
  const double sr[2] = {1.0, 0.5}, rd[2] = {2.0, 0.0}, sd[2] = {1.0, -0.25};
  ltir_channel* ch = nullptr;
  REQUIRE(ltir_channel_create(sr, rd, sd, 2, &ch) == LTIR_OK);
  CHECK(ltir_channel_order(ch) == 2);
  double out[2];
  REQUIRE(ltir_channel_taps(ch, LTIR_CH_SD, out, 2) == LTIR_OK);
  CHECK(out[1] == -0.25);
  CHECK(ltir_channel_taps(ch, 9, out, 2) == LTIR_ERR_INVALID_ARG);

  REQUIRE(ltir_channel_save(ch, "capi_channel.txt") == LTIR_OK);
  ltir_channel* back = nullptr;
  REQUIRE(ltir_channel_load("capi_channel.txt", &back) == LTIR_OK);
  REQUIRE(ltir_channel_taps(back, LTIR_CH_SR, out, 2) == LTIR_OK);
  CHECK(out[0] == doctest::Approx(1.0));
  ltir_channel_destroy(back);
  ltir_channel_destroy(ch);
  std::remove("capi_channel.txt");

  ltir_channel* gen = nullptr;
  REQUIRE(ltir_channel_generate(42, 7, 5, 1.0, 2.0, 0.5, &gen) == LTIR_OK);
  const ltir::ChannelTriple expect = ltir::generate_channels(42, 7, 5, 1.0, 2.0, 0.5);
  double taps[5];
  REQUIRE(ltir_channel_taps(gen, LTIR_CH_RD, taps, 5) == LTIR_OK);
  for (int i = 0; i < 5; ++i) CHECK(taps[i] == expect.rd.taps[i]);
  ltir_channel_destroy(gen);
}

TEST_CASE("capi: rate and the finite-n oracle match the core") {
  const double sr[1] = {1.0}, rd[1] = {2.0}, sd[1] = {1.0};
  ltir_channel* ch = nullptr;
  REQUIRE(ltir_channel_create(sr, rd, sd, 1, &ch) == LTIR_OK);
  ltir_grid* g = nullptr;
  REQUIRE(ltir_grid_create(512, &g) == LTIR_OK);
  const double t[1] = {1.0}, h[1] = {0.5};
  double r = 0;
  REQUIRE(ltir_rate(ch, g, 1.0, t, 1, h, 1, &r) == LTIR_OK);
  CHECK(r == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-12));
  double rn = 0;
  REQUIRE(ltir_finite_n_rate(ch, 1.0, t, 1, h, 1, 32, &rn) == LTIR_OK);
  CHECK(rn == doctest::Approx(r).epsilon(1e-10));
  CHECK(ltir_finite_n_rate(ch, 1.0, t, 1, h, 1, 100000, &rn) == LTIR_ERR_INVALID_ARG);
  ltir_grid_destroy(g);
  ltir_channel_destroy(ch);
}

TEST_CASE("capi: design run, trace access, error codes") {
  const double sr[1] = {1.0}, rd[1] = {2.0}, sd[1] = {1.0};
  ltir_channel* ch = nullptr;
  REQUIRE(ltir_channel_create(sr, rd, sd, 1, &ch) == LTIR_OK);
  ltir_grid* g = nullptr;
  REQUIRE(ltir_grid_create(256, &g) == LTIR_OK);
  ltir_design_config cfg;
  ltir_design_config_init(&cfg);
  cfg.max_iters = 200;
  ltir_design_result* r = nullptr;
  REQUIRE(ltir_design_run(ch, g, {1.0, 1.0, 1.0}, 1, 1, &cfg, &r) == LTIR_OK);
  CHECK(ltir_design_rate(r) == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-3));
  CHECK(ltir_design_converged(r) == 1);
  const int len = ltir_design_trace_length(r);
  REQUIRE(len >= 1);
  CHECK(len == ltir_design_iterations(r));
  double rate0 = 0, gnorm = 0, sp = 0, rp = 0, step = 0;
  REQUIRE(ltir_design_trace_row(r, 0, &rate0, &gnorm, &sp, &rp, &step) == LTIR_OK);
  CHECK(sp <= 1.0 * (1 + 1e-9));
  CHECK(rp <= 1.0 * (1 + 1e-9));
  CHECK(ltir_design_trace_row(r, len, &rate0, nullptr, nullptr, nullptr, nullptr) ==
        LTIR_ERR_INVALID_ARG);
  double taps[1];
  REQUIRE(ltir_design_source_taps(r, taps, 1) == LTIR_OK);
  CHECK(taps[0] == doctest::Approx(1.0));
  ltir_design_result_destroy(r);

  // Degenerate channels surface as the dedicated status.
  const double z[1] = {0.0};
  ltir_channel* dead = nullptr;
  REQUIRE(ltir_channel_create(z, z, z, 1, &dead) == LTIR_OK);
  CHECK(ltir_design_run(dead, g, {1.0, 1.0, 1.0}, 1, 1, &cfg, &r) == LTIR_ERR_DEGENERATE);
  ltir_channel_destroy(dead);

  double rate = 0, gain = 0, rpow = 0;
  REQUIRE(ltir_af_baseline(ch, g, {1.0, 1.0, 1.0}, &rate, &gain, &rpow) == LTIR_OK);
  CHECK(gain == doctest::Approx(0.5).epsilon(1e-6));
  ltir_grid_destroy(g);
  ltir_channel_destroy(ch);
}

TEST_CASE("capi: flat-fading surface") {
  const ltir_budget budget{1.0, 1.0, 1.0};
  double gain = 0, rate = 0;
  REQUIRE(ltir_flat_af(1.0, 2.0, budget, &gain, &rate) == LTIR_OK);
  CHECK(gain == doctest::Approx(0.5));
  REQUIRE(ltir_flat_equalizing(1.0, 2.0, budget, &gain, &rate) == LTIR_OK);
  CHECK(gain == 0.0);
  CHECK(rate == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(ltir_flat_one_tap_delayed(1.0, 2.0, budget, 1, 512, &rate) == LTIR_OK);
  CHECK(rate <= 0.5 * std::log2(3.0) + 1e-8);
  CHECK(ltir_flat_one_tap_delayed(1.0, 2.0, budget, 0, 512, &rate) == LTIR_ERR_INVALID_ARG);

  ltir_lpf_solution lpf;
  REQUIRE(ltir_flat_lpf(1.0, 2.0, budget, M_PI, &lpf) == LTIR_OK);
  CHECK(lpf.rate_bits == doctest::Approx(0.5 * std::log2(3.0)).epsilon(1e-9));
  CHECK(ltir_flat_lpf(1.0, 2.0, budget, 9.0, &lpf) == LTIR_ERR_BAND);
  REQUIRE(ltir_flat_lpf(1.0, 2.0, budget, -1.0, &lpf) == LTIR_OK);  // optimized
  CHECK(lpf.rate_bits >= 0.5 * std::log2(3.0) - 1e-9);
  CHECK(lpf.sol_type == LTIR_LPF_T1_1);
}

TEST_CASE("capi: experiment configuration, sweep files, trace files") {
  ltir_experiment* e = nullptr;
  REQUIRE(ltir_experiment_create(&e) == LTIR_OK);
  REQUIRE(ltir_experiment_set(e, "trials", "2") == LTIR_OK);
  REQUIRE(ltir_experiment_set(e, "sweep", "0.5") == LTIR_OK);
  REQUIRE(ltir_experiment_set(e, "ls", "5") == LTIR_OK);
  REQUIRE(ltir_experiment_set(e, "lr", "4") == LTIR_OK);
  REQUIRE(ltir_experiment_set(e, "max_iters", "30") == LTIR_OK);
  REQUIRE(ltir_experiment_set(e, "deterministic", "1") == LTIR_OK);
  CHECK(ltir_experiment_set(e, "bogus", "1") == LTIR_ERR_INVALID_ARG);

  REQUIRE(ltir_sweep_run(e, "capi_sweep") == LTIR_OK);
  std::ifstream summary("capi_sweep_summary.csv");
  REQUIRE(summary.good());
  std::string header;
  std::getline(summary, header);
  CHECK(header.rfind("ps,pr,", 0) == 0);
  std::remove("capi_sweep_summary.csv");
  std::remove("capi_sweep_trials.csv");

  ltir_channel* ch = nullptr;
  REQUIRE(ltir_channel_generate(3, 0, 5, 1.0, 1.0, 1.0, &ch) == LTIR_OK);
  double dr = 0, ar = 0;
  REQUIRE(ltir_trace_run(e, ch, 1.0, 1.0, "capi_trace.csv", &dr, &ar) == LTIR_OK);
  CHECK(dr > 0);
  std::ifstream trace("capi_trace.csv");
  REQUIRE(trace.good());
  std::remove("capi_trace.csv");

  const int ns[2] = {16, 32};
  double rates[2], gaps[2];
  REQUIRE(ltir_convergence_table(e, ch, 1.0, 1.0, ns, 2, rates, gaps) == LTIR_OK);
  CHECK(rates[0] > 0);

  ltir_design_result* r = nullptr;
  REQUIRE(ltir_experiment_design(e, ch, 1.0, 1.0, &r) == LTIR_OK);
  CHECK(ltir_design_rate(r) > 0);
  ltir_design_result_destroy(r);
  ltir_channel_destroy(ch);
  ltir_experiment_destroy(e);
}

TEST_CASE("capi: status names") {
  CHECK(std::string(ltir_status_name(LTIR_OK)) == "ok");
  CHECK(std::string(ltir_status_name(LTIR_ERR_DEGENERATE)) == "degenerate channel");
  CHECK(std::string(ltir_status_name(LTIR_ERR_BAND)) == "infeasible band");
}
