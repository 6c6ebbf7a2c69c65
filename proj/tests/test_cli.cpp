#include <haarsys/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using namespace haarsys;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = run_command(args, out, err);
  return {status, out.str(), err.str()};
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  const Outcome unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.status, exit_input_error);
  EXPECT_TRUE(contains(unknown.err, "validate"));
  EXPECT_EQ(run({}).status, exit_input_error);
  EXPECT_EQ(run({"haar"}).status, exit_input_error);
  EXPECT_EQ(run({"validate"}).status, exit_input_error);
  EXPECT_EQ(run({"validate", "/no/such/file.json"}).status, exit_input_error);
  EXPECT_EQ(run({"haar", "verify", "--example", "pair3"}).status, exit_input_error);
  EXPECT_EQ(run({"--help"}).status, exit_pass);
}

TEST(Cli, Validate) {
  EXPECT_EQ(run({"validate", "--example", "pair3"}).status, exit_pass);
  const Outcome broken = run({"validate", "--example", "broken"});
  EXPECT_EQ(broken.status, exit_violation);
  EXPECT_TRUE(contains(broken.out, "inverse-right"));
  EXPECT_EQ(run({"validate", "--example", "z4-not-closed-bundle"}).status, exit_violation);
  EXPECT_EQ(run({"validate", "--example", "drop-bundle"}).status, exit_pass);
}

TEST(Cli, SynthesisWritesAVerifiableSystem) {
  const auto path = std::filesystem::temp_directory_path() / "haarsys_cli_synth.json";
  const Outcome synth = run({"haar", "synth", "--example", "pair2xZ2", "--nu", "uniform:1", "--lambda", "const:1", "-o", path.string()});
  EXPECT_EQ(synth.status, exit_pass) << synth.err;
  EXPECT_TRUE(contains(synth.out, "result: pass"));
  EXPECT_EQ(run({"haar", "verify", "example:pair2xZ2", path.string()}).status, exit_pass);
  EXPECT_EQ(run({"conv", "test", "example:pair2xZ2", path.string(), "--trials", "5"}).status, exit_pass);
  std::filesystem::remove(path);

  EXPECT_EQ(run({"haar", "synth", "--example", "pair2xZ2", "--lambda", "const:0"}).status, exit_input_error);
  EXPECT_EQ(run({"haar", "synth", "--example", "pair2xZ2", "--nu", "uniform:2/4"}).status, exit_input_error);
}

TEST(Cli, VerifyAndEnumerate) {
  const Outcome skewed = run({"haar", "verify", "example:pair2", "example:pair2-skewed"});
  EXPECT_EQ(skewed.status, exit_violation);
  EXPECT_EQ(run({"haar", "verify", "example:pair3", "example:pair3-counting"}).status, exit_pass);
  EXPECT_EQ(run({"haar", "verify", "example:pair2", "example:pair3-counting"}).status, exit_input_error);
  const Outcome enumerate = run({"haar", "enumerate", "--example", "pair3", "--json"});
  EXPECT_EQ(enumerate.status, exit_pass);
  EXPECT_EQ(json::parse(enumerate.out)["dimension"], 3);
}

TEST(Cli, BundleCommands) {
  const Outcome drop = run({"bundle", "check", "--example", "drop-bundle"});
  EXPECT_EQ(drop.status, exit_violation);
  EXPECT_TRUE(contains(drop.out, "not open; no coherent system; witness at 1/2"));
  EXPECT_EQ(run({"bundle", "check", "--example", "isolated-drop-bundle"}).status, exit_pass);
  EXPECT_EQ(run({"bundle", "eval", "example:isolated-drop-bundle", "example:unit-scale", "example:notch-at-half"}).status, exit_pass);
  EXPECT_EQ(run({"bundle", "eval", "example:isolated-drop-bundle", "example:unit-scale", "example:vee-at-half"}).status,
            exit_input_error);
  EXPECT_EQ(run({"bundle", "eval", "example:drop-bundle", "example:unit-scale", "example:tent-at-half"}).status, exit_violation);
}

TEST(Cli, ConvolutionDetectsNonInvariance) {
  EXPECT_EQ(run({"conv", "test", "example:pair3", "example:pair3-counting"}).status, exit_pass);
  EXPECT_EQ(run({"conv", "test", "example:pair2", "example:pair2-skewed"}).status, exit_violation);
}

TEST(Cli, ReportsAreDeterministic) {
  const std::vector<std::string> args{"conv", "test", "example:pair3", "example:pair3-counting", "--seed", "7", "--json"};
  EXPECT_EQ(run(args).out, run(args).out);
  EXPECT_EQ(run({"decompose", "--example", "z4-sign-action"}).out, run({"decompose", "--example", "z4-sign-action"}).out);
}

TEST(Cli, VerbosityLiftsTheListCap) {
  ::unsetenv("HAARSYS_VERBOSE");
  const Outcome terse = run({"decompose", "--example", "pair5"});
  EXPECT_TRUE(contains(terse.out, "more (HAARSYS_VERBOSE=1 lists all)"));
  ::setenv("HAARSYS_VERBOSE", "1", 1);
  const Outcome full = run({"decompose", "--example", "pair5"});
  ::unsetenv("HAARSYS_VERBOSE");
  EXPECT_FALSE(contains(full.out, "more (HAARSYS_VERBOSE"));
  EXPECT_GT(full.out.size(), terse.out.size());
}
