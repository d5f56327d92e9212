#include <doctest.h>

#include "spot/bench.hpp"
#include "spot/errors.hpp"

using namespace spot;

TEST_CASE("one row per algorithm with the expected communication") {
  BenchOptions opt;
  opt.runs = 2;
  auto rep = run_bench(opt);
  CHECK(rep.rows.size() == bench_algorithms().size());
  for (const auto& r : rep.rows) {
    CHECK(r.runs == 2);
    CHECK(r.consistent);
    CHECK(r.mean_ms >= 0);
  }
  CHECK(rep.find("S_Keygen")->comm == ElementCount{0, 2, 0, 0});
  CHECK(rep.find("HA_Keygen")->comm == ElementCount{0, 1, 0, 0});
  CHECK(rep.find("Set_CCM")->comm == ElementCount{0, 0, 0, 1});
  CHECK(rep.find("S_PSign")->comm == ElementCount{0, 0, 0, 1});
  CHECK(rep.find("P_Sign")->comm == ElementCount{6, 7, 0, 0});
  CHECK(rep.find("Setup_ProxyGr")->comm == ElementCount{11, 21, 0, 0});
  CHECK(rep.find("Join_ProxyGr")->comm == ElementCount{13, 9, 0, 0});
  CHECK_FALSE(rep.find("Sig_Verify")->has_comm);
  CHECK(rep.table().find("P_Sign") != std::string::npos);
  CHECK(rep.to_json()["rows"].size() == rep.rows.size());
}

TEST_CASE("variants only apply where they exist") {
  BenchOptions opt;
  opt.runs = 2;
  opt.algorithms = {"P_Sign", "Sig_Verify"};
  opt.variants = BenchVariant::all();
  auto rep = run_bench(opt);
  // P_Sign has no preprocessed form.
  CHECK(rep.rows.size() == 2 + 4);
  for (const auto& r : rep.rows) CHECK(r.consistent);
  CHECK(rep.find("P_Sign", "mt") != nullptr);
  CHECK(rep.find("P_Sign", "pre") == nullptr);
  CHECK(rep.find("Sig_Verify", "mt+pre") != nullptr);
}

TEST_CASE("bad selections") {
  BenchOptions opt;
  opt.algorithms = {"Nope"};
  CHECK_THROWS_AS(run_bench(opt), MalformedInput);
  CHECK_THROWS_AS(BenchVariant::parse("fast"), MalformedInput);
  CHECK(BenchVariant::parse("mt+pre").preprocess);
}
