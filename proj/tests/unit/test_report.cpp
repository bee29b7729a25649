#include <gtest/gtest.h>

#include <clocale>
#include <sstream>

#include "fixtures.hpp"
#include "tunegraph/report.hpp"

using namespace tunegraph;

TEST(FormatNumber, ShortestRoundTrip) {
  EXPECT_EQ(report::format_number(0.5), "0.5");
  EXPECT_EQ(report::format_number(0.1), "0.1");
  EXPECT_EQ(std::stod(report::format_number(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(report::format_cell(std::nullopt), "");
}

TEST(Csv, JointMatrixLayout) {
  const auto h = joint_degree_histogram(fixtures::path(3), 3);
  const auto text = report::to_csv_string(h);
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0].rfind("bucket_lower,1,", 0), 0u);
  for (const auto& l : lines) EXPECT_EQ(std::count(l.begin(), l.end(), ','), 3);
}

TEST(Csv, UndefinedCellsAreEmpty) {
  const auto m = conditional_change_heatmap(joint_degree_histogram(fixtures::star(40)));
  const auto text = report::to_csv_string(m);
  EXPECT_NE(text.find(",,"), std::string::npos);
  EXPECT_EQ(text.find("nan"), std::string::npos);
}

TEST(Json, NullsForUndefined) {
  const auto j = report::to_json(assortativity_report(fixtures::cycle(5)));
  EXPECT_TRUE(j["pearson"].is_null());
  EXPECT_TRUE(j["kendall"].is_null());
  EXPECT_EQ(j["schema_version"], report::kSchemaVersion);
  const auto c = report::to_json(conditional_change_heatmap(joint_degree_histogram(fixtures::star(40))));
  EXPECT_TRUE(c["change"][10][10].is_null());
}

TEST(Output, ByteIdenticalAcrossRuns) {
  const auto g = fixtures::skewed_graph(300, 4);
  const auto a = report::to_json(degree_ccdf_curves(g)).dump();
  const auto b = report::to_json(degree_ccdf_curves(g)).dump();
  EXPECT_EQ(a, b);
  EXPECT_EQ(report::to_csv_string(degree_ccdf_curves(g)), report::to_csv_string(degree_ccdf_curves(g)));
}

TEST(Svg, ContainsOneRectPerCell) {
  std::ostringstream out;
  report::write_svg(out, joint_degree_histogram(fixtures::skewed_graph(300, 2)));
  const auto s = out.str();
  std::size_t rects = 0;
  for (std::size_t pos = s.find("<rect"); pos != std::string::npos; pos = s.find("<rect", pos + 1)) ++rects;
  EXPECT_EQ(rects, 21u * 21u);
  EXPECT_EQ(s.rfind("</svg>\n"), s.size() - 7);
}

TEST(Svg, DivergingColors) {
  ConditionalHeatmap m;
  m.scheme = BucketScheme(3, 2);
  m.change = Matrix<std::optional<double>>(2, std::nullopt);
  m.samples = Matrix<std::uint64_t>(2, 0);
  m.change(0, 0) = 1.0;
  m.change(1, 1) = -1.0;
  std::ostringstream out;
  report::write_svg(out, m);
  EXPECT_NE(out.str().find("#b2182b"), std::string::npos);  // full increase
  EXPECT_NE(out.str().find("#2166ac"), std::string::npos);  // full decrease
  EXPECT_NE(out.str().find("#e0e0e0"), std::string::npos);  // undefined
}
