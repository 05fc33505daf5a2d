#include <gtest/gtest.h>

#include <sstream>

#include "vnlab/plot.hpp"
#include "vnlab/scenario.hpp"

using namespace vnlab;

namespace {

std::string error_of(const std::string& text) {
  try {
    run_scenario(parse_config_text(text, "test"));
  } catch (const InvalidInput& e) {
    return e.what();
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

const char* kSmallCurve = R"json({"name": "small", "kind": "mc-curve",
  "models": [{"kind": "indep-er", "p": 0.5}], "schemes": [{"kind": "random"}, {"kind": "spectral", "d": 2}],
  "k_rule": {"kind": "constant", "value": 2}, "n_values": [8, 10], "trials": 150, "seed": 3,
  "bayes_ref": "indep-er"})json";

}  // namespace

TEST(ScenarioConfig, UnknownKeysNameTheField) {
  const auto top = error_of(R"({"name": "t", "kind": "mc-curve", "models": [{"kind": "indep-er", "p": 0.5}],
    "schemes": [{"kind": "random"}], "k_rule": {"kind": "constant", "value": 1}, "n_values": [8], "trails": 9})");
  EXPECT_NE(top.find("'trails': unknown key"), std::string::npos) << top;
  const auto nested = error_of(R"({"name": "t", "kind": "mc-curve", "models": [{"kind": "indep-er", "p": 0.5, "q": 1}],
    "schemes": [{"kind": "random"}], "k_rule": {"kind": "constant", "value": 1}, "n_values": [8]})");
  EXPECT_NE(nested.find("models[0].q"), std::string::npos) << nested;
  EXPECT_NE(error_of(R"({"name": "t", "kind": "mc-curve", "models": [{"kind": "indep-er", "p": 1.5}],
    "schemes": [{"kind": "random"}], "k_rule": {"kind": "constant", "value": 1}, "n_values": [8]})").find("p"),
            std::string::npos);
  EXPECT_NE(error_of(R"({"name": "t", "kind": "nope"})").find("kind"), std::string::npos);
  EXPECT_NE(error_of(R"({"kind": "mc-curve"})").find("name"), std::string::npos);
  EXPECT_FALSE(error_of("{ not json").empty());
}

TEST(ScenarioConfig, ResolvedConfigEchoesDefaults) {
  const auto res = run_scenario(parse_config_text(kSmallCurve, "test"), {});
  EXPECT_EQ(res.resolved["trials"], 150);
  EXPECT_EQ(res.resolved["schemes"][1]["align"], "density");
  EXPECT_TRUE(res.resolved.contains("confidence"));
}

TEST(Scenario, DeterministicAcrossJobs) {
  const auto cfg = parse_config_text(kSmallCurve, "test");
  RunOptions a;
  a.jobs = 1;
  RunOptions b;
  b.jobs = 5;
  const auto x = run_scenario(cfg, a).csv(true);
  EXPECT_EQ(x, run_scenario(cfg, b).csv(true));
  EXPECT_EQ(x.find("# generated"), std::string::npos);
  EXPECT_NE(run_scenario(cfg, a).csv(false).find("# generated"), std::string::npos);
  RunOptions c = a;
  c.seed = 99;
  EXPECT_NE(x, run_scenario(cfg, c).csv(true));
}

TEST(Scenario, IndepErRowsSitAtChance) {
  RunOptions opt;
  opt.trials_override = 200;
  const auto res = run_scenario(parse_config_text(kSmallCurve, "test"), opt);
  ASSERT_EQ(res.rows.size(), 4u);
  for (const auto& r : res.rows) {
    EXPECT_EQ(r.trials, 200u);
    ASSERT_TRUE(r.bayes_ref.has_value());
    EXPECT_DOUBLE_EQ(*r.bayes_ref, 1.0 - 2.0 / static_cast<double>(r.n));
    EXPECT_LE(r.ci_low, r.loss);
    EXPECT_LE(r.loss, r.ci_high);
  }
}

TEST(Scenario, FailedAssertionIsReported) {
  const auto res = run_scenario(parse_config_text(
      R"json({"name": "t", "kind": "adversarial", "n": 6, "schemes": [{"kind": "random"}],
          "assert": [{"scheme": "random(0)", "max_loss": 0.5}, {"scheme": "absent", "max_loss": 1}]})json", "test"));
  EXPECT_FALSE(res.ok());
  EXPECT_EQ(res.failures.size(), 6u);
}

TEST(Scenario, BuiltinsAreListedAndParse) {
  std::set<std::string> names;
  for (const auto& b : builtin_scenarios()) {
    names.insert(b.name);
    EXPECT_NO_THROW(parse_config_text(b.config, b.name)) << b.name;
  }
  for (const char* want : {"indep-er-chance", "sbm-iid", "correlated-er-curve", "adversarial-demo",
                           "universal-inconsistency", "bayes-oracle-check", "gm-recovery", "behavior-flip"})
    EXPECT_TRUE(names.count(want)) << want;
  EXPECT_THROW(load_config("no-such-scenario-or-file"), InvalidInput);
}

TEST(Plot, SingleRowRendersValidSvg) {
  std::istringstream in(
      "# scenario: x\n"
      "scenario,model,scheme,n,m,c,k,trials,seed,loss,ci_low,ci_high,bayes_ref\n"
      "x,er,random(0),8,8,8,2,100,1,0.75,0.66,0.82,0.75\n");
  const auto series = read_result_csv(in);
  ASSERT_EQ(series.size(), 1u);
  const auto svg = render_plot_svg(series);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("<circle"), std::string::npos);
}

TEST(Plot, BayesRefColumnIsOptional) {
  std::istringstream in(
      "scenario,model,scheme,n,m,c,k,trials,seed,loss,ci_low,ci_high\n"
      "x,er,\"spectral(2,density)\",20,20,20,5,100,1,0.7,0.6,0.8\n"
      "x,er,\"spectral(2,density)\",10,10,10,2,100,1,0.8,0.7,0.9\n");
  const auto series = read_result_csv(in);
  ASSERT_EQ(series.size(), 1u);
  EXPECT_EQ(series[0].label, "er / spectral(2,density)");
  EXPECT_EQ(series[0].points.front().n, 10);
  EXPECT_FALSE(series[0].points.front().ref.has_value());
  EXPECT_EQ(render_plot_svg(series).find("dashed"), std::string::npos);
}

TEST(Plot, SchemaMismatchIsAnError) {
  std::istringstream bad_header("scenario,model,loss\nx,y,0.5\n");
  EXPECT_THROW(read_result_csv(bad_header), ParseError);
  std::istringstream short_row(
      "scenario,model,scheme,n,m,c,k,trials,seed,loss,ci_low,ci_high\n"
      "x,er,random,20\n");
  EXPECT_THROW(read_result_csv(short_row), ParseError);
  std::istringstream bad_number(
      "scenario,model,scheme,n,m,c,k,trials,seed,loss,ci_low,ci_high\n"
      "x,er,random,20,20,20,5,100,1,abc,0.6,0.8\n");
  EXPECT_THROW(read_result_csv(bad_number), ParseError);
}

TEST(Plot, RoundTripsScenarioOutput) {
  RunOptions opt;
  opt.trials_override = 40;
  std::istringstream in(run_scenario(parse_config_text(kSmallCurve, "test"), opt).csv(true));
  const auto series = read_result_csv(in);
  ASSERT_EQ(series.size(), 2u);
  EXPECT_EQ(series[0].points.size(), 2u);
  EXPECT_TRUE(series[0].points[0].ref.has_value());
}

TEST(Scenario, TrendAssertion) {
  auto cfg = parse_config_text(kSmallCurve, "test");
  cfg["assert"] = Json::parse(R"json([{"scheme": "random(0)", "trend": "decreasing"}])json");
  cfg["trials"] = 400;
  const auto res = run_scenario(cfg);
  ASSERT_EQ(res.failures.size(), 1u);
  EXPECT_NE(res.failures[0].find("is not decreasing"), std::string::npos);
  cfg["assert"] = Json::parse(R"json([{"scheme": "random(0)", "trend": "sideways"}])json");
  EXPECT_THROW(run_scenario(cfg), InvalidInput);
}
