#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "tauberian/common.hpp"
#include "tauberian/report.hpp"

using namespace tauberian;

TEST_CASE("csv serialisation is byte exact") {
    ValueReport rep("demo", {"x", "y"});
    rep.add_meta("seed", 7.0);
    rep.add_meta("note", "hand built");
    rep.add_row("a", {1.0, 0.5}, true);
    rep.add_row("b", {0.1, -2.0}, false);
    rep.add_row("c", {3.0, 4.0});  // record only, no flag

    std::ostringstream os;
    rep.write_csv(os);
    CHECK(os.str() ==
          "# report,demo\n"
          "# seed,7\n"
          "# note,hand built\n"
          "label,x,y,pass\n"
          "a,1,0.5,1\n"
          "b,0.1,-2,0\n"
          "c,3,4,\n");
}

TEST_CASE("pass accounting ignores unflagged rows") {
    ValueReport rep("t", {"v"});
    rep.add_row("r0", {0.0});
    CHECK(rep.all_pass());
    CHECK(rep.flagged_failures() == 0);

    rep.add_row("r1", {1.0}, true);
    CHECK(rep.all_pass());

    rep.add_row("r2", {2.0}, false);
    rep.add_row("r3", {3.0}, false);
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.flagged_failures() == 2);
}

TEST_CASE("row width is enforced") {
    ValueReport rep("t", {"a", "b"});
    CHECK_THROWS_AS(rep.add_row("bad", {1.0}), domain_error);
    CHECK_THROWS_AS(rep.add_row("bad", {1.0, 2.0, 3.0}), domain_error);
    rep.add_row("ok", {1.0, 2.0});
    CHECK(rep.rows().size() == 1);
}

TEST_CASE("title can be adjusted after construction") {
    ValueReport rep("before", {"v"});
    rep.set_title("after");
    CHECK(rep.title() == "after");
    std::ostringstream os;
    rep.write_csv(os);
    CHECK(os.str().rfind("# report,after\n", 0) == 0);
}

TEST_CASE("numbers render in shortest round-trip form") {
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-3.25) == "-3.25");
    CHECK(format_double(1e300) == "1e+300");
    const double third = 1.0 / 3.0;
    CHECK(std::stod(format_double(third)) == third);
}
