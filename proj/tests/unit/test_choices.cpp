#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "vizrec/choices/chart_spec.hpp"
#include "vizrec/choices/emit.hpp"
#include "vizrec/choices/extract.hpp"
#include "vizrec/choices/tasks.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/rng.hpp"
#include "vizrec/ingest/corpus.hpp"

using namespace vizrec;
using namespace vizrec::choices;
using ingest::Column;
using ingest::Dataset;

namespace {

ingest::CorpusRecord dual_axis() {
  std::ifstream in(std::filesystem::path(VIZREC_FIXTURES) / "dual_axis_record.json");
  std::stringstream ss;
  ss << in.rdbuf();
  return ingest::parse_record_text(ss.str());
}

Dataset abc() {
  return Dataset("abc", {Column("a", {"1", "2", "3"}), Column("b", {"4", "5", "6"}), Column("c", {"x", "y", "z"})});
}

const EncodingChoice* find(const DesignChoices& c, std::size_t col, Axis axis) {
  for (const auto& e : c.encodings)
    if (e.column == col && e.axis == axis) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("dual-axis scatter record") {
  const auto rec = dual_axis();
  const auto traces = parse_chart_spec(rec.specification, rec.data);
  REQUIRE(traces.size() == 2);
  CHECK(traces[0].trace_type == "scatter");
  CHECK(traces[0].x->column == traces[1].x->column);

  const auto c = extract_record_choices(rec);
  CHECK(c.visualization.visualization_type == std::optional<std::string>("scatter"));
  CHECK(c.visualization.has_shared_axis);
  CHECK(c.visualization.is_homogeneous);
  const std::size_t hp = rec.data.find_column("Hp"), mpg = rec.data.find_column("MPG"), wgt = rec.data.find_column("Wgt");
  REQUIRE(find(c, hp, Axis::x));
  CHECK(find(c, hp, Axis::x)->is_single_axis);
  CHECK(find(c, hp, Axis::x)->mark_type == "scatter");
  REQUIRE(find(c, mpg, Axis::y));
  CHECK(!find(c, mpg, Axis::y)->is_single_axis);
  CHECK(!find(c, wgt, Axis::y)->is_single_axis);
  CHECK(c.encodings.size() == 3);

  // emit re-extracts to the same choices
  const auto doc = emit_chart_spec(rec.data, c);
  CHECK(doc["traces"].size() == 2);
  CHECK(equivalent(extract_design_choices(parse_chart_spec(doc, rec.data)), c));

  // layout and trace order do not matter
  ingest::CorpusRecord flipped = rec;
  flipped.specification = Json::array({rec.specification[1], rec.specification[0]});
  flipped.layout = Json::object({{"title", "changed"}});
  CHECK(extract_record_choices(flipped) == c);
}

TEST_CASE("visualization-level extraction") {
  const Dataset d = abc();
  const auto bar = extract_visualization_choices(parse_chart_spec(Json::parse(R"([{"type":"bar","x":"c","y":"a"}])"), d));
  CHECK(bar.visualization_type == std::optional<std::string>("bar"));
  CHECK(!bar.has_shared_axis);
  const auto mixed = extract_visualization_choices(
      parse_chart_spec(Json::parse(R"([{"type":"line","x":"a","y":"b"},{"type":"bar","x":"c","y":"b"}])"), d));
  CHECK(!mixed.is_homogeneous);
  CHECK(!mixed.visualization_type);
  const auto lines = parse_chart_spec(Json::parse(R"({"traces":[{"type":"scatter","mode":"lines","x":"a","y":"b"}]})"), d);
  CHECK(lines[0].trace_type == "line");
}

TEST_CASE("encoding-level extraction") {
  const Dataset d = abc();
  const auto single = extract_design_choices(parse_chart_spec(Json::parse(R"([{"type":"scatter","x":"a","y":"b"}])"), d));
  CHECK(find(single, 0, Axis::x));
  CHECK(find(single, 1, Axis::y));
  const auto hist = extract_design_choices(parse_chart_spec(Json::parse(R"([{"type":"histogram","x":"a"}])"), d));
  REQUIRE(hist.encodings.size() == 1);
  CHECK(hist.encodings[0].mark_type == "histogram");
  CHECK(hist.encodings[0].axis == Axis::x);
  CHECK(hist.encodings[0].single_slot);
  // a column on both axes gives two instances
  const auto both = extract_design_choices(parse_chart_spec(Json::parse(R"([{"type":"scatter","x":"a","y":"a"}])"), d));
  CHECK(both.encodings.size() == 2);
  // positional fallback
  const auto pos = parse_chart_spec(Json::parse(R"([{"type":"bar","x":2,"y":0}])"), d);
  CHECK(pos[0].x->column == 2);
}

TEST_CASE("chart spec errors") {
  const Dataset d = abc();
  CHECK_THROWS_AS(parse_chart_spec(Json::array(), d), EmptyInputError);
  CHECK_THROWS_AS(parse_chart_spec(Json::parse(R"([{"type":"bar"}])"), d), ValidationError);
  CHECK_THROWS_AS(parse_chart_spec(Json::parse(R"([{"type":"bar","x":"nope"}])"), d), ValidationError);
  const auto odd = parse_chart_spec(Json::parse(R"([{"type":"sankey","x":"a","foo":1}])"), d);
  CHECK(!odd[0].supported);
  CHECK(odd[0].trace_type == "sankey");
  CHECK(odd[0].extra["foo"] == 1);

  DesignChoices bad = choices_from_axes("scatter", {0, 1}, {2});
  for (auto& e : bad.encodings)
    if (e.axis == Axis::x) e.is_single_axis = true;  // two columns both claim sole ownership of X
  CHECK_THROWS_AS(emit_chart_spec(d, bad), ValidationError);
  DesignChoices hetero = choices_from_axes("bar", {0}, {1});
  hetero.encodings[1].mark_type = "line";
  CHECK_THROWS_AS(emit_chart_spec(d, hetero), ValidationError);
}

TEST_CASE("default axis heuristic puts the categorical column on x") {
  const Dataset d("cq", {Column("v", {"1", "2", "3"}), Column("k", {"a", "b", "c"})});
  const auto c = default_choices(d, "bar");
  const auto traces = build_traces(d, c);
  REQUIRE(traces.size() == 1);
  CHECK(traces[0].x->column == 1);
  CHECK(traces[0].y->column == 0);
  CHECK(equivalent(extract_design_choices(parse_chart_spec(emit_chart_spec(d, c), d)), c));
  const Dataset t("t", {Column("v", {"1", "2"}), Column("k", {"a", "b"}), Column("when", {"2020-01-01", "2020-02-01"})});
  CHECK(find(default_choices(t, "line"), 2, Axis::x));
}

TEST_CASE("random choice sets round-trip through emitted specs") {
  Rng rng(2024);
  const std::vector<std::string> types{"scatter", "line", "bar", "box", "histogram", "heatmap", "pie"};
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t ncols = 1 + rng.index(6);
    std::vector<Column> cols;
    for (std::size_t c = 0; c < ncols; ++c) {
      // occasional duplicate names exercise positional references
      const std::string name = rng.bernoulli(0.2) ? "dup" : "col" + std::to_string(c);
      cols.emplace_back(name, std::vector<std::string>{"1", "2", "3"});
    }
    const Dataset d("rt", std::move(cols));
    std::vector<std::size_t> xs, ys;
    for (std::size_t c = 0; c < ncols; ++c) {
      if (rng.bernoulli(0.35)) xs.push_back(c);
      if (rng.bernoulli(0.5)) ys.push_back(c);
    }
    if (xs.empty() && ys.empty()) xs.push_back(rng.index(ncols));
    const auto choices = choices_from_axes(types[rng.index(types.size())], xs, ys);
    const auto doc = emit_chart_spec(d, choices);
    const auto back = extract_design_choices(parse_chart_spec(std::string_view(doc.dump()), d));
    CHECK(equivalent(back, choices));
    CHECK(back.visualization == choices.visualization);
    for (const auto& e : back.encodings) CHECK(e.mark_type == *back.visualization.visualization_type);
    ++checked;
  }
  CHECK(checked == 500);
}

TEST_CASE("task vocabularies and labels") {
  CHECK(vocabulary(Task::vt2) == std::vector<std::string>{"line", "bar"});
  CHECK(vocabulary(Task::vt3) == std::vector<std::string>{"scatter", "line", "bar"});
  CHECK(vocabulary(Task::vt6) == std::vector<std::string>{"scatter", "line", "bar", "box", "histogram", "pie"});
  CHECK(vocabulary(Task::mt6) == std::vector<std::string>{"scatter", "line", "bar", "box", "histogram", "heatmap"});
  CHECK(parse_task("MT3") == Task::mt3);
  CHECK_THROWS_AS(parse_task("vt7"), UsageError);
  for (Task t : kAllTasks) CHECK(parse_task(to_string(t)) == t);

  const auto rec = dual_axis();
  const auto c = extract_record_choices(rec);
  CHECK(visualization_label(Task::vt3, c) == class_index(Task::vt3, "scatter"));
  CHECK(!visualization_label(Task::vt2, c).has_value());
  CHECK(visualization_label(Task::hsa, c) == class_index(Task::hsa, "true"));
  for (const auto& e : c.encodings) {
    CHECK(encoding_label(Task::mt3, e) == class_index(Task::mt3, "scatter"));
    CHECK(encoding_label(Task::xy, e) == class_index(Task::xy, e.axis == Axis::x ? "x" : "y"));
    CHECK(encoding_label(Task::isa, e) == class_index(Task::isa, e.is_single_axis ? "true" : "false"));
  }
  // pie is outside the mark-type vocabulary
  const EncodingChoice pie{0, Axis::x, "pie", true, true};
  CHECK(!encoding_label(Task::mt6, pie).has_value());
  CHECK(is_visualization_level(Task::vt6));
  CHECK(!is_visualization_level(Task::xy));
}
