#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("vizrec_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + VIZREC_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("usage errors exit with 1") {
  CHECK(run("--help") == 0);
  CHECK(run("") == 1);
  CHECK(run("frobnicate") == 1);
  CHECK(run("cv --folds notanumber") == 1);
  CHECK(run("cv --corpus x --model svm --out /tmp/vizrec_cli_nowhere") == 1);
  CHECK(run("importances") == 1);
}

TEST_CASE("data errors exit with 2") {
  const auto empty = scratch("empty");
  const auto out = scratch("empty_out");
  CHECK(run("features --corpus " + q(empty) + " --out " + q(out)) == 2);
  CHECK(run("features --corpus " + q(empty / "missing") + " --out " + q(out)) == 2);
  const auto bad = scratch("bad_model");
  std::ofstream(bad / "model.json") << "{\"format\": \"something else\"}";
  CHECK(run("importances --model-file " + q(bad / "model.json")) == 2);
}

TEST_CASE("synth, train, importances and recommend round trip") {
  const auto dir = scratch("round");
  REQUIRE(run("--seed 5 synth --datasets 150 --out " + q(dir / "synth")) == 0);
  CHECK(fs::exists(dir / "synth" / "labels.csv"));
  CHECK(fs::exists(dir / "synth" / "config.resolved.json"));

  REQUIRE(run("--seed 5 train --corpus " + q(dir / "synth" / "records") +
              " --task vt2 --features D+T --model rf --hyper '{\"trees\": 20}' --no-cv --out " + q(dir / "rf")) == 0);
  CHECK(fs::exists(dir / "rf" / "model.json"));
  CHECK(fs::exists(dir / "rf" / "split_manifest.csv"));
  const auto report = Json::parse(slurp(dir / "rf" / "train_report.json"));
  CHECK(report.contains("holdout"));

  REQUIRE(run("importances --model-file " + q(dir / "rf" / "model.json") + " --top 5 --out " + q(dir / "imp")) == 0);
  const auto imp = Json::parse(slurp(dir / "imp" / "importances.json"));
  CHECK(imp.dump().find("specific_type_is_string") != std::string::npos);

  std::ofstream(dir / "table.csv") << "city,population\nOslo,700000\nBergen,285000\nTrondheim,210000\n";
  REQUIRE(run("recommend --dataset " + q(dir / "table.csv") + " --model-file " + q(dir / "rf" / "model.json") +
              " --top 2 --out " + q(dir / "rec")) == 0);
  const auto rec = Json::parse(slurp(dir / "rec" / "recommendations.json"));
  REQUIRE(rec["recommendations"].size() == 2);
  CHECK(rec["recommendations"][0]["visualization_type"] == "bar");
  CHECK(rec["recommendations"][0]["specification"]["traces"].is_array());

  // importances of a non-forest model is a usage error
  REQUIRE(run("--seed 5 train --corpus " + q(dir / "synth" / "records") +
              " --task vt2 --features D+T --model nb --no-cv --out " + q(dir / "nb")) == 0);
  CHECK(run("importances --model-file " + q(dir / "nb" / "model.json")) == 1);
}

TEST_CASE("reruns are byte identical at any thread count") {
  const auto dir = scratch("determinism");
  REQUIRE(run("--seed 9 synth --datasets 80 --out " + q(dir / "s")) == 0);
  const auto corpus = q(dir / "s" / "records");
  REQUIRE(run("--threads 1 features --corpus " + corpus + " --out " + q(dir / "f1")) == 0);
  REQUIRE(run("--threads 4 features --corpus " + corpus + " --out " + q(dir / "f4")) == 0);
  for (const char* f : {"dataset_features.csv", "column_features.csv", "pairwise_features.csv"})
    CHECK(slurp(dir / "f1" / f) == slurp(dir / "f4" / f));
  REQUIRE(run("--seed 2 --threads 1 cv --corpus " + corpus + " --model lr --features D+T --out " + q(dir / "c1")) == 0);
  REQUIRE(run("--seed 2 --threads 3 cv --corpus " + corpus + " --model lr --features D+T --out " + q(dir / "c3")) == 0);
  CHECK(slurp(dir / "c1" / "cv_report.json") == slurp(dir / "c3" / "cv_report.json"));
}

TEST_CASE("benchmark scores predictions against votes") {
  const auto dir = scratch("bench");
  std::ofstream(dir / "votes.csv") << "dataset_id,worker_id,choice\na,w1,bar\na,w2,bar\na,w3,line\nb,w1,line\n";
  std::ofstream(dir / "model.csv") << "dataset_id,choice\na,bar\nb,line\n";
  std::ofstream(dir / "partial.csv") << "dataset_id,choice\na,bar\n";
  REQUIRE(run("benchmark --votes " + q(dir / "votes.csv") + " --predictions model=" + q(dir / "model.csv") +
              " --replicates 500 --out " + q(dir / "out")) == 0);
  const auto r = Json::parse(slurp(dir / "out" / "benchmark_report.json"));
  CHECK(r.dump().find("\"cars\":100.0") != std::string::npos);
  CHECK(run("benchmark --votes " + q(dir / "votes.csv") + " --predictions p=" + q(dir / "partial.csv") + " --out " +
            q(dir / "out2")) == 2);
}

TEST_CASE("config file with flag precedence") {
  const auto dir = scratch("config");
  std::ofstream(dir / "cfg.json") << R"({"seed": 11, "task": "vt3"})";
  REQUIRE(run("--config " + q(dir / "cfg.json") + " --seed 12 synth --datasets 10 --out " + q(dir / "s")) == 0);
  const auto snap = Json::parse(slurp(dir / "s" / "config.resolved.json"));
  CHECK(snap.dump().find("\"seed\":12") != std::string::npos);
  CHECK(snap.dump().find("\"task\":\"vt3\"") != std::string::npos);
  std::ofstream(dir / "broken.json") << "{nope";
  CHECK(run("--config " + q(dir / "broken.json") + " synth --out " + q(dir / "t")) == 1);
}

TEST_CASE("ingest from a local plots endpoint") {
  httplib::Server server;
  server.Get("/plots", [](const httplib::Request& req, httplib::Response& res) {
    const std::string page = req.get_param_value("page");
    if (page != "0") {
      res.set_content(R"({"records": [], "next_page": null})", "application/json");
      return;
    }
    res.set_content(R"([{"fid": "r1", "user_id": "u", "data": {"k": ["a", "b"], "v": [1, 2]},
                         "specification": [{"type": "bar", "x": "k", "y": "v"}], "layout": {}},
                        {"fid": "r2", "user_id": "u", "specification": [], "layout": {}}])",
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const auto dir = scratch("rest");
  const int code = run("ingest --url http://127.0.0.1:" + std::to_string(port) +
                       " --max-pages 3 --rate-limit 0 --dedup none --out " + q(dir));
  server.stop();
  t.join();
  REQUIRE(code == 0);
  CHECK(fs::exists(dir / "records" / "r1.json"));
  const auto report = Json::parse(slurp(dir / "ingest_report.json"));
  CHECK(report.dump().find("r2") != std::string::npos);
}
