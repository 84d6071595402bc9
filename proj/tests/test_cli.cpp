#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dnev/cli.hpp"
#include "support.hpp"

using namespace dnev;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int code = run_cli(std::move(args), o, e);
  return {code, o.str(), e.str()};
}

const char* kBench = "w(z+1)*w(z-1)+w(z+1)*w+w*w(z-1) = (a2*w^2+a1*w+a0)/(w^2+b1*w+b0)";
const char* kTooBig = "w(z+1)*w(z-1)+w(z+1)*w+w*w(z-1) = (w^5+2)/(w+1)";

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

// Walks "a.b.0.c" through the parsed document.
const nlohmann::ordered_json* lookup(const nlohmann::ordered_json& j, const std::string& path) {
  const nlohmann::ordered_json* cur = &j;
  std::istringstream in(path);
  for (std::string part; std::getline(in, part, '.');) {
    if (cur->is_array()) {
      std::size_t i = std::stoul(part);
      if (i >= cur->size()) return nullptr;
      cur = &(*cur)[i];
    } else if (cur->is_object() && cur->contains(part)) {
      cur = &(*cur)[part];
    } else {
      return nullptr;
    }
  }
  return cur;
}

void expect_text_matches_json(const std::string& text, const std::string& json) {
  auto j = nlohmann::ordered_json::parse(json);
  auto ls = lines(text);
  ASSERT_FALSE(ls.empty());
  std::size_t leaves = 0;
  std::function<void(const nlohmann::ordered_json&)> count = [&](const nlohmann::ordered_json& v) {
    if ((v.is_object() || v.is_array()) && !v.empty())
      for (const auto& x : v) count(x);
    else
      ++leaves;
  };
  count(j);
  EXPECT_EQ(ls.size(), leaves);
  for (const auto& l : ls) {
    auto p = l.find(": ");
    ASSERT_NE(p, std::string::npos) << l;
    std::string key = l.substr(0, p), val = l.substr(p + 2);
    const auto* leaf = lookup(j, key);
    ASSERT_NE(leaf, nullptr) << key;
    if (leaf->is_string()) {
      EXPECT_EQ(val, leaf->get<std::string>()) << key;
    } else if (leaf->is_boolean()) {
      EXPECT_EQ(val, leaf->get<bool>() ? "true" : "false") << key;
    } else if (leaf->is_number()) {
      EXPECT_NEAR(std::stod(val), leaf->get<double>(), 1e-11 * std::abs(leaf->get<double>())) << key;
    } else {
      EXPECT_EQ(val, leaf->dump()) << key;
    }
  }
}

std::string temp_path(const std::string& name) { return ::testing::TempDir() + name; }

}  // namespace

TEST(Classify, ExitCodes) {
  EXPECT_EQ(run({"classify", kBench}).code, 0);
  EXPECT_EQ(run({"classify", kTooBig}).code, 2);
  EXPECT_EQ(run({"classify", "w(z+1) + w = 1"}).code, 2);
}

TEST(Classify, MalformedInputIsPositionedError) {
  auto r = run({"classify", "w(z+1) = w + #"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("SyntaxError at 13"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Classify, TextAndJsonAgree) {
  for (const char* eq : {kBench, kTooBig, "w(z+1)*w = (w+1)/(w^2)", "w(z+1) + w = 1"}) {
    auto t = run({"classify", eq});
    auto j = run({"classify", eq, "--json"});
    EXPECT_EQ(t.code, j.code);
    expect_text_matches_json(t.out, j.out);
  }
}

TEST(Classify, BenchmarkProfileFields) {
  auto j = nlohmann::ordered_json::parse(run({"classify", kBench, "--json"}).out);
  EXPECT_TRUE(j["verdict"]["admissible"].get<bool>());
  EXPECT_EQ(j["coprimality"], "Asserted");
  EXPECT_EQ(j["admissibility"]["kappa_hat"], 2);
}

TEST(Families, GoldenBytes) {
  EXPECT_EQ(run({"enumerate"}).out, testing_support::slurp(testing_support::data_path("families14.golden")));
  EXPECT_EQ(run({"reduce"}).out, testing_support::slurp(testing_support::data_path("families9.golden")));
  EXPECT_EQ(run({"reduce"}).out, run({"reduce"}).out);
}

TEST(Families, NonBenchmarkReductionRefused) {
  const std::string other = "w(z+1)*w(z-1) + w(z+1)*w";
  auto e = run({"enumerate", "--poly", other});
  EXPECT_EQ(e.code, 0);
  EXPECT_FALSE(e.out.empty());
  auto r = run({"reduce", "--poly", other});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("WrongBenchmark"), std::string::npos) << r.err;
}

TEST(Families, JsonLists) {
  auto j = nlohmann::ordered_json::parse(run({"reduce", "--json"}).out);
  EXPECT_EQ(j["families"].size(), 9u);
  EXPECT_EQ(j["removed"].size(), 5u);
}

TEST(DryRun, EverySubcommand) {
  std::vector<std::vector<std::string>> cmds{{"classify", kBench},
                                             {"enumerate"},
                                             {"reduce"},
                                             {"characteristic", "--model", "expexp"},
                                             {"shift-check", "--model", "rational:{1}/{z-1}"},
                                             {"logdiff-check", "--model", "exp:z"},
                                             {"growth-scan"},
                                             {"product-example"},
                                             {"polechain"}};
  for (auto c : cmds) {
    c.push_back("--dry-run");
    auto r = run(c);
    EXPECT_EQ(r.code, 0) << c[0] << r.err;
    EXPECT_EQ(r.out.rfind("subcommand = " + c[0] + "\n", 0), 0u) << r.out;
  }
  auto s = run({"shift-check", "--model", "rational:{1}/{z-1}", "--dry-run"});
  EXPECT_NE(s.out.find("r_min = 20\n"), std::string::npos) << s.out;
  EXPECT_NE(s.out.find("ratio = 1.05\n"), std::string::npos) << s.out;
  auto p = run({"product-example", "--dry-run"});
  EXPECT_NE(p.out.find("c = 3\n"), std::string::npos) << p.out;
  auto p1 = run({"product-example", "--c", "1", "--dry-run"});
  EXPECT_NE(p1.out.find("c = 1\n"), std::string::npos) << p1.out;
}

TEST(Config, FlagsOverrideFile) {
  std::string path = temp_path("dnev_cli_config.txt");
  {
    std::ofstream f(path);
    f << "# layered run\nk0 = 4\nsteps = 3\nr_min = 50\n";
  }
  auto r = run({"polechain", "--config", path, "--steps", "5", "--dry-run"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("k0 = 4\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("steps = 5\n"), std::string::npos) << r.out;
  auto chain = run({"polechain", "--config", path, "--steps", "2"});
  EXPECT_EQ(lines(chain.out).size(), 4u);
  EXPECT_EQ(lines(chain.out)[1].rfind("0,4,4,", 0), 0u) << chain.out;
  std::remove(path.c_str());
  EXPECT_EQ(run({"polechain", "--config", temp_path("missing.cfg")}).code, 1);
}

TEST(Models, UnknownSpecGivesUsage) {
  auto r = run({"shift-check", "--model", "sine:z"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("usage:"), std::string::npos) << r.err;
}

TEST(Drivers, ShiftCheckSimplePole) {
  auto r = run({"shift-check", "--model", "rational:{1}/{z-1}", "--c", "1", "--r-max", "200"});
  EXPECT_EQ(r.code, 0) << r.err;
  for (const auto& l : lines(r.out))
    if (l.rfind("r,", 0) != 0) { EXPECT_EQ(l.substr(l.rfind(',') + 1), "true") << l; }
}

TEST(Drivers, LogDiffExp) {
  auto r = run({"logdiff-check", "--model", "exp:z", "--json"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::ordered_json::parse(r.out);
  EXPECT_EQ(j["summary"]["log_measure"], 0.0);
}

TEST(Drivers, GrowthScanVerdicts) {
  EXPECT_EQ(run({"growth-scan", "--growth", "power:2"}).code, 0);
  EXPECT_EQ(run({"growth-scan", "--growth", "exp"}).code, 2);
  EXPECT_EQ(run({"growth-scan", "--r-min", "2"}).code, 1);
}

TEST(Drivers, PolechainPrefix) {
  auto r = run({"polechain", "--steps", "7"});
  EXPECT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 9u);
  std::vector<std::string> ceil{"1", "2", "3", "5", "8", "12", "18", "27"};
  for (std::size_t n = 0; n < ceil.size(); ++n) {
    std::istringstream row(ls[n + 1]);
    std::string idx, bound, c;
    std::getline(row, idx, ',');
    std::getline(row, bound, ',');
    std::getline(row, c, ',');
    EXPECT_EQ(c, ceil[n]);
  }
  EXPECT_EQ(lines(run({"polechain", "--steps", "3"}).out)[4].substr(0, 7), "3,27/8,");
  EXPECT_EQ(run({"polechain", "--k0", "0"}).code, 1);
}

TEST(Drivers, ProductExampleTable) {
  auto r = run({"product-example", "--levels", "2", "--format", "text"});
  EXPECT_EQ(r.code, 0) << r.err;
  auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 12u);
  EXPECT_EQ(ls[0], "r T_f T_fc m_ratio ratio_m ratio_T err");
  EXPECT_EQ(ls[1].rfind("15.5 ", 0), 0u);
  EXPECT_EQ(ls[11], "# levels: 8^1 16^492");
}

TEST(Reports, ByteIdenticalAcrossRuns) {
  for (std::vector<std::string> c : {std::vector<std::string>{"characteristic", "--model", "random:5", "--seed", "11"},
                                     std::vector<std::string>{"product-example", "--levels", "2", "--json"},
                                     std::vector<std::string>{"classify", kBench, "--json"}}) {
    auto a = run(c), b = run(c);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
  EXPECT_NE(run({"characteristic", "--model", "random:5", "--seed", "11"}).out,
            run({"characteristic", "--model", "random:5", "--seed", "12"}).out);
}

TEST(Reports, OutFile) {
  std::string path = temp_path("dnev_cli_out.csv");
  auto r = run({"polechain", "--steps", "2", "--out", path});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(testing_support::slurp(path), run({"polechain", "--steps", "2"}).out);
  std::remove(path.c_str());
}

TEST(Arguments, Rejected) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"characteristic", "--model", "exp:z", "--ratio", "1"}).code, 1);
  EXPECT_EQ(run({"enumerate", "--format", "xml"}).code, 1);
}
