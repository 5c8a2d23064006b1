#include "doctest.h"
#include "fracfp/verifier.hpp"

using namespace fracfp;

TEST_CASE("sweep construction") {
  const Sweep s;
  const auto z = s.z_values();
  CHECK(z.size() == 41u);
  CHECK(z.front() == doctest::Approx(1e-3));
  CHECK(z.back() == doctest::Approx(1e2));
  CHECK(s.doubled().z_values().size() == 81u);
}

TEST_CASE("two-sided estimate and baseline regression") {
  const StableLaw law(1.0, 1);
  const CheckRecord r = check_two_sided_estimate(law, Sweep{});
  CHECK(r.pass);
  // For the Cauchy law the ratio is exactly (1/pi) r^2 t / (t^2 + r^2) style; its range is [1/(2 pi), 1/pi].
  CHECK(r.measured["c1"].get<double>() == doctest::Approx(0.5 / M_PI).epsilon(1e-3));
  CHECK(r.measured["c2"].get<double>() == doctest::Approx(1.0 / M_PI).epsilon(1e-6));

  Baselines b;
  b.set("two_sided", "alpha=1,d=1,c1", r.measured["c1"].get<double>());
  b.set("two_sided", "alpha=1,d=1,c2", r.measured["c2"].get<double>());
  CHECK(check_two_sided_estimate(law, Sweep{}, &b).pass);
  b.set("two_sided", "alpha=1,d=1,c2", 1.05 * r.measured["c2"].get<double>());
  CHECK_FALSE(check_two_sided_estimate(law, Sweep{}, &b).pass);
}

TEST_CASE("gaussian case is reported outside the jump regime") {
  const CheckRecord r = check_two_sided_estimate(StableLaw(2.0, 1), Sweep{});
  CHECK(r.pass);
  CHECK(r.note.find("jump") != std::string::npos);
}

TEST_CASE("individual checks pass at their defaults") {
  Sweep s;
  s.times = {0.1, 1.0};
  CHECK(check_derivative_estimate(StableLaw(1.5, 1), 1, s).pass);
  CHECK(check_gradient_transform(StableLaw(1.5, 1), 2, 5).pass);
  const CheckRecord route = check_route_equivalence(StableLaw(1.0, 1), 200, 3);
  CHECK(route.pass);
  CHECK(route.measured["overflow_safe_queries"].get<int>() > 0);
  CHECK(check_characteristic_function(StableLaw(1.5, 2), 50000, 5).pass);
  MCConfig mc;
  mc.samples = 200000;
  mc.alpha = 1.0;
  CHECK(check_mc_agreement(mc).pass);
}

TEST_CASE("negative control fails") {
  const CheckRecord r = negative_control_check();
  CHECK_FALSE(r.pass);
  CHECK(r.measured["tail_mass_bound"].get<double>() > 0.05);
}

TEST_CASE("quick suite passes against the frozen baselines") {
  VerifyOptions opt;
  opt.baselines = std::filesystem::path(FRACFP_GOLDEN_DIR) / "baselines.json";
  const VerificationReport rep = run_verification(opt);
  for (const auto& c : rep.checks) {
    INFO(c.name, " ", c.parameters.dump(), " ", c.measured.dump(), " ", c.note);
    CHECK(c.pass);
  }
  const auto j = rep.to_json();
  CHECK(j["all_pass"].get<bool>());
  CHECK(j.contains("timing"));
  CHECK(j["checks"][0].contains("anchor"));
  CHECK(rep.to_text().find("ALL CHECKS PASSED") != std::string::npos);

  const Baselines frozen = Baselines::load(*opt.baselines);
  const Baselines fresh = extract_baselines(rep);
  CHECK(fresh.data.size() == frozen.data.size());

  opt.negative_control = true;
  CHECK_FALSE(run_verification(opt).all_pass());
}
