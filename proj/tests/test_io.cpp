#include "skewmix/em.hpp"
#include "skewmix/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace skewmix;

namespace {

Dataset parse(const std::string& text, const CsvOptions& opt = {}) {
  std::istringstream in(text);
  return read_csv(in, opt);
}

Index error_line(const std::string& text, const CsvOptions& opt = {}) {
  try {
    parse(text, opt);
  } catch (const CsvError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(ReadCsv, SmallNumericFile) {
  const Dataset ds = parse("a,b\n1,2\n3,4.5\n-1e3,0.1\n");
  EXPECT_EQ(ds.rows(), 3);
  EXPECT_EQ(ds.cols(), 2);
  EXPECT_EQ(ds.column_names, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(ds.matrix(2, 0), -1000.0);
  EXPECT_EQ(ds.matrix(2, 1), 0.1);
  EXPECT_FALSE(ds.labels);
}

TEST(ReadCsv, FullPrecisionNumbers) {
  const Dataset ds = parse("x\n0.1000000000000000055511151231257827\n1.7976931348623157e308\n");
  EXPECT_EQ(ds.matrix(0, 0), 0.1);
  EXPECT_EQ(ds.matrix(1, 0), 1.7976931348623157e308);
}

TEST(ReadCsv, LabelColumnWithMissingTokens) {
  std::string text = "x,y,species\n";
  for (int r = 1; r <= 8; ++r) {
    text += std::to_string(r) + "," + std::to_string(2 * r) + "," +
            (r >= 4 && r <= 7 ? "?" : (r % 2 ? "setosa" : "virginica")) + "\n";
  }
  CsvOptions opt;
  opt.label_column = "species";
  const Dataset ds = parse(text, opt);
  ASSERT_TRUE(ds.labels);
  EXPECT_EQ(ds.cols(), 2);
  EXPECT_EQ(std::count(ds.labels->begin(), ds.labels->end(), kUnknownLabel), 4);
  EXPECT_EQ(ds.label_names, (std::vector<std::string>{"setosa", "virginica"}));
  EXPECT_EQ((*ds.labels)[0], 1);
  EXPECT_EQ((*ds.labels)[1], 2);

  opt.label_column = "3";
  EXPECT_EQ(parse(text, opt).labels, ds.labels);
  opt.label_column = "genus";
  EXPECT_THROW(parse(text, opt), InputError);
}

TEST(ReadCsv, QuotingDelimitersAndLineEndings) {
  const Dataset ds =
      parse("\"a,1\";\"b \"\"q\"\"\"\r\n1;2\r\n\r\n\"3\";4\r\n", {.delimiter = ';'});
  EXPECT_EQ(ds.column_names[0], "a,1");
  EXPECT_EQ(ds.column_names[1], "b \"q\"");
  EXPECT_EQ(ds.rows(), 2);
  EXPECT_EQ(ds.matrix(1, 0), 3.0);

  const Dataset multiline = parse("\"two\nlines\",b\n1,2\n");
  EXPECT_EQ(multiline.column_names[0], "two\nlines");

  const Dataset headless = parse("1,2\n3,4\n", {.header = false});
  EXPECT_EQ(headless.rows(), 2);
  EXPECT_EQ(headless.column_names, (std::vector<std::string>{"V1", "V2"}));
}

TEST(ReadCsv, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("a,b\n1,2\n3\n"), 3);
  EXPECT_EQ(error_line("a,b\n1,2\n\n3,x\n"), 4);
  EXPECT_EQ(error_line("a,b\n1,nan\n"), 2);
  EXPECT_EQ(error_line("a,b\n1,2,3\n"), 2);
  EXPECT_THROW(parse(""), CsvError);
  EXPECT_THROW(parse("a,b\n"), CsvError);
  EXPECT_THROW(parse("a,b\n\"1,2\n"), CsvError);
}

TEST(ScaleColumns, HandExample) {
  Dataset ds = parse("a,b\n1,10\n2,10.5\n3,14\n");
  const Dataset s = scale_columns(ds);
  EXPECT_TRUE(s.scaled);
  EXPECT_NEAR(s.matrix(0, 0), -1.0, 1e-15);
  EXPECT_NEAR(s.matrix(1, 0), 0.0, 1e-15);
  EXPECT_NEAR(s.matrix(2, 0), 1.0, 1e-15);
  for (Index c = 0; c < 2; ++c) {
    const Vector col = s.matrix.col(c);
    EXPECT_NEAR(col.mean(), 0.0, 1e-10);
    EXPECT_NEAR((col.array() - col.mean()).matrix().squaredNorm() / 2.0, 1.0, 1e-10);
  }
}

TEST(ScaleColumns, ShiftInvarianceAndRoundTrip) {
  Dataset ds = parse("a,b,c\n1.5,2,-3\n2.25,7,1\n9,-1,0.5\n4,4,4\n");
  Dataset shifted = ds;
  shifted.matrix.rowwise() += (RowVector(3) << 100, -50, 3.25).finished();
  const Dataset a = scale_columns(ds);
  const Dataset b = scale_columns(shifted);
  EXPECT_TRUE(a.matrix.isApprox(b.matrix, 1e-12));
  const Dataset back = unscale(a);
  EXPECT_LE((back.matrix - ds.matrix).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_FALSE(back.scaled);
}

TEST(ScaleColumns, ZeroVarianceNamesColumn) {
  const Dataset ds = parse("a,flat\n1,5\n2,5\n3,5\n");
  try {
    scale_columns(ds);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos);
  }
}

TEST(ScaleColumns, ParametersMapBack) {
  const Dataset ds = parse("a,b\n1,10\n2,12\n4,11\n7,20\n");
  const Dataset s = scale_columns(ds);
  const ComponentParams fitted = ComponentParams::skew_t(
      (Vector(2) << 0.5, -0.2).finished(),
      (Matrix(2, 2) << 1.0, 0.3, 0.3, 0.8).finished(),
      (Vector(2) << 0.4, 0.1).finished(), 7.0);
  const ComponentParams back = unscale_params(fitted, s);
  const Vector sd = s.spread;
  // A point on the scaled scale maps through the same affine transform.
  const Vector y_scaled = (Vector(2) << 0.3, 0.9).finished();
  const Vector y = s.center + sd.cwiseProduct(y_scaled);
  EXPECT_NEAR(log_density(y, back),
              log_density(y_scaled, fitted) - sd.array().log().sum(), 1e-12);
  EXPECT_EQ(*back.dof, 7.0);
}

TEST(Ingest, BundledIris) {
  CsvOptions opt;
  opt.label_column = "species";
  const Dataset ds = ingest_csv(SKEWMIX_DATA_DIR "/iris.csv", opt);
  EXPECT_EQ(ds.rows(), 150);
  EXPECT_EQ(ds.cols(), 4);
  EXPECT_EQ(ds.label_count(), 3);
  EXPECT_THROW(ingest_csv(SKEWMIX_DATA_DIR "/missing.csv"), InputError);
}

TEST(WriteLabels, HeaderAndRows) {
  const auto path = std::filesystem::temp_directory_path() / "skewmix_labels_test.csv";
  write_labels_csv(path, {2, 1, 3});
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), "row,label\n1,2\n2,1\n3,3\n");
  std::filesystem::remove(path);
}
