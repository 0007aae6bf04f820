#include <gtest/gtest.h>

#include <fstream>
#include <string>

#include "rdrho/errors.hpp"
#include "rdrho/table_io.hpp"

using namespace rdrho;

namespace {

const char* kOme =
    "# comment\n"
    "labels: Cefaclor Amoxicillin\n"
    "m0: 9 7\n"
    "m1: 7 5\n"
    "m2: 23 13\n"
    "n0: 20 19\n"
    "n1: 34 36\n";

template <class F>
ParseError parse_error(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError";
  return ParseError("none");
}

}  // namespace

TEST(TableText, ParsesKeyedRows) {
  const InputTable in = parse_table_text(kOme);
  EXPECT_EQ(in.labels[0], "Cefaclor");
  EXPECT_EQ(in.labels[1], "Amoxicillin");
  EXPECT_EQ(in.table.bilateral[0][2], 23);
  EXPECT_EQ(in.table.bilateral[1][0], 7);
  EXPECT_EQ(in.table.unilateral[1][1], 36);
  EXPECT_EQ(in.table.subjects(0), 93);
}

TEST(TableText, RoundTrip) {
  const InputTable in = parse_table_text(kOme);
  const InputTable again = parse_table_text(format_table_text(in));
  EXPECT_EQ(again.table, in.table);
  EXPECT_EQ(again.labels, in.labels);
}

TEST(TableText, Errors) {
  EXPECT_EQ(parse_error([] { parse_table_text("m0: 1 2\nm1: 1 x\n"); }).line(), 2u);
  EXPECT_EQ(parse_error([] { parse_table_text("m0: 1 2\nm1: 1 x\n"); }).field(), "m1");
  EXPECT_EQ(parse_error([] { parse_table_text("m0: 1 -2\n"); }).field(), "m0");
  parse_error([] { parse_table_text("m0: 1 2\nm0: 1 2\n"); });
  parse_error([] { parse_table_text("q0: 1 2\n"); });
  parse_error([] { parse_table_text("m0: 1 2\n"); });
  parse_error([] { parse_table_text("m0: 1.5 2\n"); });
  parse_error([] { parse_table_text("m0: 1 2 3\n"); });
  parse_error([] { parse_table_text(""); });
  parse_error([] { parse_table_text("   \n# only comments\n"); });
}

TEST(TableJson, ParsesAndMatchesText) {
  const InputTable a = parse_table_json(
      R"({"labels":["Cefaclor","Amoxicillin"],"m0":[9,7],"m1":[7,5],"m2":[23,13],"n0":[20,19],"n1":[34,36]})");
  const InputTable b = parse_table_text(kOme);
  EXPECT_EQ(a.table, b.table);
  EXPECT_EQ(a.labels, b.labels);
  EXPECT_EQ(parse_table(" \n{\"m0\":[9,7],\"m1\":[7,5],\"m2\":[23,13],\"n0\":[20,19],\"n1\":[34,36]}").table, b.table);
}

TEST(TableJson, Errors) {
  parse_error([] { parse_table_json("{"); });
  parse_error([] { parse_table_json(R"({"m0":[1,2]})"); });
  EXPECT_EQ(parse_error([] {
              parse_table_json(R"({"m0":[1.5,2],"m1":[1,1],"m2":[1,1],"n0":[1,1],"n1":[1,1]})");
            }).field(),
            "m0[0]");
  parse_error([] { parse_table_json(R"({"m0":[-1,2],"m1":[1,1],"m2":[1,1],"n0":[1,1],"n1":[1,1]})"); });
  parse_error([] { parse_table_json(R"({"m0":[1,2,3],"m1":[1,1],"m2":[1,1],"n0":[1,1],"n1":[1,1]})"); });
  parse_error([] { parse_table_json(R"({"x":[1,2],"m0":[1,2],"m1":[1,1],"m2":[1,1],"n0":[1,1],"n1":[1,1]})"); });
  parse_error([] { parse_table_json("[1,2]"); });
}

TEST(TableFile, LoadsAndReportsMissingFile) {
  const std::string path = testing::TempDir() + "rdrho_table.tbl";
  {
    std::ofstream out(path);
    out << kOme;
  }
  EXPECT_EQ(load_table(path).table, parse_table_text(kOme).table);
  EXPECT_THROW(load_table(testing::TempDir() + "does_not_exist.tbl"), ParseError);
}
