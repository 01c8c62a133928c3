#include <catch2/catch_amalgamated.hpp>

#include "censreg/csv.hpp"
#include "censreg/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

using namespace censreg;

namespace {

const char* kTwoRowFile =
    "time,event,mrd.low,mrd.up,tmt\n"
    "1.25,1,-1.5124,-1.5124,0\n"
    "2.5,0,NA,-3.9673,1\n";

std::vector<ColumnSpec> reference_schema() {
  return {{"time", ColumnType::PositiveNumeric},
          {"event", ColumnType::Binary},
          {"mrd.low", ColumnType::NumericOrNA},
          {"mrd.up", ColumnType::NumericOrNA},
          {"tmt", ColumnType::Numeric}};
}

}  // namespace

TEST_CASE("interval2 columns assemble into censored values", "[csv]") {
  const Dataset data = ingest_csv_text(kTwoRowFile, reference_schema());
  REQUIRE(data.n_rows() == 2);
  const auto values = assemble_interval2(data, "mrd.low", "mrd.up");
  REQUIRE(values.size() == 2);
  CHECK(values[0].kind() == CensoredValue::Kind::Exact);
  CHECK(values[0].value() == Catch::Approx(-1.5124).margin(1e-15));
  CHECK(values[1].kind() == CensoredValue::Kind::Left);
  CHECK(*values[1].high() == Catch::Approx(-3.9673).margin(1e-15));
}

TEST_CASE("missing declared column is an error naming the column", "[csv]") {
  try {
    ingest_csv_text(kTwoRowFile, {{"nonexistent", ColumnType::Numeric}});
    FAIL("expected an exception");
  } catch (const std::runtime_error& err) {
    CHECK(std::string(err.what()).find("nonexistent") != std::string::npos);
  }
}

TEST_CASE("cell-level failures carry line numbers", "[csv]") {
  SECTION("non-binary event") {
    const std::string text = "time,event\n1.0,1\n2.0,2\n";
    try {
      ingest_csv_text(text, {{"time", ColumnType::PositiveNumeric},
                             {"event", ColumnType::Binary}});
      FAIL("expected an exception");
    } catch (const std::runtime_error& err) {
      const std::string what = err.what();
      CHECK(what.find("line 3") != std::string::npos);
      CHECK(what.find("event") != std::string::npos);
    }
  }
  SECTION("non-positive time") {
    const std::string text = "time,event\n0.0,1\n";
    CHECK_THROWS_AS(ingest_csv_text(text, {{"time", ColumnType::PositiveNumeric},
                                           {"event", ColumnType::Binary}}),
                    std::runtime_error);
  }
  SECTION("missing value in a required column") {
    const std::string text = "time,event\nNA,1\n";
    CHECK_THROWS_AS(ingest_csv_text(text, {{"time", ColumnType::PositiveNumeric},
                                           {"event", ColumnType::Binary}}),
                    std::runtime_error);
  }
  SECTION("uninformative interval2 row is reported with its row number") {
    const std::string text = "l,u\n1.0,2.0\nNA,NA\n";
    const Dataset data = ingest_csv_text(
        text, {{"l", ColumnType::NumericOrNA}, {"u", ColumnType::NumericOrNA}});
    try {
      assemble_interval2(data, "l", "u");
      FAIL("expected an exception");
    } catch (const std::runtime_error& err) {
      CHECK(std::string(err.what()).find("row 2") != std::string::npos);
    }
  }
}

TEST_CASE("ingest then re-serialize is lossless", "[csv]") {
  const Dataset data = ingest_csv_text(kTwoRowFile, reference_schema());
  const std::string csv = data.to_csv();
  const Dataset again = ingest_csv_text(csv, reference_schema());
  REQUIRE(again.n_rows() == data.n_rows());
  for (const std::string name : {"time", "event", "mrd.low", "mrd.up", "tmt"}) {
    const auto& a = data.column(name);
    const auto& b = again.column(name);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (std::isnan(a[i]))
        CHECK(std::isnan(b[i]));
      else
        CHECK(a[i] == b[i]);
    }
  }
}

TEST_CASE("number formatting follows the report conventions", "[report]") {
  CHECK(format_number(0.745951234) == "0.74595");
  CHECK(format_number(2.98008123) == "2.9801");
  CHECK(format_number(std::nan("")) == "NA");
  CHECK(format_p_value(1e-17) == "<2e-16");
  CHECK(format_p_value(0.4031) == "0.403");
  CHECK(format_p_value(std::nan("")) == "NA");
}

TEST_CASE("coefficient table aligns and carries the rounded JSON values", "[report]") {
  std::vector<CoefRow> rows = {
      {"lambda", 0.74595, 0.08455, 0.58024, 0.91166, std::nan("")},
      {"mrd", 0.67344, 0.06010, 0.55565, 0.79122, 1e-20},
  };
  const std::string table = format_coef_table(rows);
  CHECK(table.find("Estimate") != std::string::npos);
  CHECK(table.find("lambda") != std::string::npos);
  CHECK(table.find("0.74595") != std::string::npos);
  CHECK(table.find("<2e-16") != std::string::npos);
  CHECK(table.find("NA") != std::string::npos);
}

TEST_CASE("envelope JSON round-trips losslessly", "[report]") {
  ReportEnvelope envelope;
  envelope.command = "censreg onesample --data x.csv";
  envelope.input_digest = fnv1a_digest("abc");
  envelope.warnings = {"something mild"};
  envelope.payload = {{"value", 0.1234567890123456789}, {"n", 42}};
  const std::string dumped = envelope_json(envelope).dump();
  const auto parsed = nlohmann::ordered_json::parse(dumped);
  CHECK(parsed["fit"]["value"].get<double>() == envelope.payload["value"].get<double>());
  CHECK(parsed["fit"]["n"].get<int>() == 42);
  CHECK(parsed["command"].get<std::string>() == envelope.command);
  CHECK(parsed["version"].get<std::string>() == std::string(kVersion));
}

TEST_CASE("digest is stable", "[report]") {
  CHECK(fnv1a_digest("") == "cbf29ce484222325");
  CHECK(fnv1a_digest("a") != fnv1a_digest("b"));
}
