#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "t1cp/report.hpp"

using namespace t1cp;

TEST_SUITE("report") {
  TEST_CASE("csv rendering") {
    Table t;
    t.columns = {"name", "ok", "n", "x", "gap"};
    t.add({std::string("a,b"), true, std::int64_t{3}, 0.1, std::monostate{}});
    t.add({std::string("say \"hi\""), false, std::int64_t{-1}, 1.0 / 3.0, 2.5});
    std::ostringstream out;
    write_csv(out, t);
    CHECK(out.str() ==
          "name,ok,n,x,gap\n"
          "\"a,b\",true,3,0.1,\n"
          "\"say \"\"hi\"\"\",false,-1,0.333333333333,2.5\n");
  }

  TEST_CASE("json rendering keeps column order") {
    Table t;
    t.columns = {"z", "a"};
    t.add({std::monostate{}, 2.0});
    std::ostringstream out;
    write_json(out, t);
    const auto j = nlohmann::ordered_json::parse(out.str());
    REQUIRE(j.is_array());
    CHECK(j[0].begin().key() == "z");
    CHECK(j[0]["z"].is_null());
    CHECK(j[0]["a"] == 2.0);
  }

  TEST_CASE("format names and row width") {
    CHECK(parse_format("csv") == Format::csv);
    CHECK(parse_format("json") == Format::json);
    CHECK_THROWS(parse_format("xml"));
    Table t;
    t.columns = {"a"};
    CHECK_THROWS(t.add({1.0, 2.0}));
    CHECK(format_real(0.5) == "0.5");
  }
}
