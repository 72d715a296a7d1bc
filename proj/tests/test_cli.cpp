#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace {

struct RunOut {
    int code = -1;
    std::string text;
};

// Runs the installed binary with the given arguments and captures stdout.
// stderr goes to /dev/null unless merge is set.
RunOut run_cli(const std::string& args, bool merge = false) {
    const std::string cmd = std::string(ENDSPACE_CLI_PATH) + " " + args +
                            (merge ? " 2>&1" : " 2>/dev/null");
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    RunOut out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.text.append(buf, n);
    const int st = pclose(p);
    out.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

nlohmann::json parse_json(const std::string& text) {
    nlohmann::json doc;
    REQUIRE_NOTHROW(doc = nlohmann::json::parse(text));
    return doc;
}

} // namespace

TEST_CASE("pinned outputs") {
    SUBCASE("unbalanced cut report") {
        const RunOut r = run_cli(
            "check-euler --source builtin:zchain --depth 20 --format json");
        CHECK(r.code == 0);
        CHECK(r.text ==
              "{\"verdict\":\"witness\",\"witness\":{\"type\":\"unbalanced_cut\","
              "\"forward\":1,\"backward\":0},\"certainty\":\"exact\"}\n");
    }
    SUBCASE("end counts") {
        const RunOut r =
            run_cli("ends --source builtin:twin-rays --depth 10 --format json");
        CHECK(r.code == 0);
        CHECK(r.text.rfind("{\"ends\":2,\"limit_edges\":1,", 0) == 0);
    }
    SUBCASE("degree report stays textual") {
        const RunOut r =
            run_cli("check-euler --source builtin:outstar --depth 6");
        CHECK(r.code == 0);
        CHECK(r.text.find("infinite degree at z") != std::string::npos);
    }
}

TEST_CASE("exit codes") {
    CHECK(run_cli("ends --source builtin:outstar --depth 6").code == 3);
    CHECK(run_cli("ends --source builtin:nonesuch").code == 2);
    CHECK(run_cli("basic-open --source builtin:twin-rays --depth 4 --end 0 "
                  "--level 99")
              .code == 3);
    CHECK(run_cli("ends").code == 2);             // missing --source
    CHECK(run_cli("frobnicate --source x").code == 2);
    CHECK(run_cli("ends --source /no/such/file.dg").code == 2);
    CHECK(run_cli("span-walk --source builtin:twin-rays --depth 6").code == 2);
    CHECK(run_cli("euler-tour --source builtin:symmetric-ray --anchor C9 "
                  "--depth 4")
              .code == 2);
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("ends --help").code == 0);
}

TEST_CASE("errors name the failure") {
    const RunOut r = run_cli("ends --source builtin:outstar --depth 6", true);
    CHECK(r.text.rfind("error:", 0) == 0);
    CHECK(r.text.find("not solid") != std::string::npos);
    const RunOut sw =
        run_cli("span-walk --source builtin:twin-rays --depth 6", true);
    CHECK(sw.text.find("not strongly connected") != std::string::npos);
    CHECK(sw.text.find("b0") != std::string::npos);
    CHECK(sw.text.find("a0") != std::string::npos);
}

TEST_CASE("every subcommand emits json with a certainty") {
    const std::vector<std::string> cmds = {
        "info --source builtin:dominated-ray --depth 4",
        "quotients --source builtin:necklace --depth 4",
        "ends --source builtin:symmetric-ray --depth 6",
        "limit-edges --source builtin:dominated-ray --depth 6",
        "basic-open --source builtin:twin-rays --depth 4 --end 0 --level 2",
        "necklace --source builtin:necklace --beads 3 --depth 24",
        "rank --source builtin:ray --r-max 3 --depth 8",
        "check-euler --source builtin:symmetric-ray --depth 8",
        "euler-tour --source builtin:necklace --depth 4",
        "span-walk --source builtin:symmetric-ray --depth 4",
        "verify --source builtin:twin-rays --depth 6",
    };
    for (const std::string& c : cmds) {
        CAPTURE(c);
        const RunOut r = run_cli(c + " --format json");
        CHECK(r.code == 0);
        const nlohmann::json doc = parse_json(r.text);
        CHECK(doc.is_object());
        CHECK(doc.contains("certainty"));
        CHECK((doc["certainty"] == "exact" || doc["certainty"] == "provisional"));
    }
    // The empty search result is the one certainty-free document.
    const RunOut miss =
        run_cli("necklace --source builtin:ray --beads 3 --depth 12 "
                "--format json");
    CHECK(miss.code == 0);
    CHECK(parse_json(miss.text) == nlohmann::json{{"found", false}});
}

TEST_CASE("repeated runs are byte-identical") {
    const std::vector<std::string> cmds = {
        "quotients --source builtin:twin-rays --depth 8 --format json",
        "ends --source builtin:dominated-ray --depth 10 --format json",
        "necklace --source builtin:necklace --beads 5 --depth 48 --format json",
        "rank --source builtin:outstar --r-max 3 --depth 8 --format json",
        "euler-tour --source builtin:symmetric-ray --depth 10 --format json",
        "span-walk --source builtin:necklace --depth 8 --format json",
        "ends --source builtin:twin-rays --depth 10",
        "limit-edges --source builtin:twin-rays --depth 10",
    };
    for (const std::string& c : cmds) {
        CAPTURE(c);
        const RunOut a = run_cli(c);
        const RunOut b = run_cli(c);
        CHECK(a.code == 0);
        CHECK(a.code == b.code);
        CHECK(a.text == b.text);
    }
}

TEST_CASE("parallel mode changes nothing but the schedule") {
    const std::vector<std::string> cmds = {
        "quotients --source builtin:necklace --depth 10 --format json",
        "quotients --source builtin:twin-rays --depth 12",
        "verify --source builtin:dominated-ray --depth 10 --format json",
    };
    for (const std::string& c : cmds) {
        CAPTURE(c);
        const RunOut serial = run_cli(c);
        const RunOut par = run_cli(c + " --parallel");
        CHECK(serial.code == 0);
        CHECK(par.code == serial.code);
        CHECK(par.text == serial.text);
    }
    const RunOut serial =
        run_cli("ends --source builtin:outstar --depth 6 --parallel", true);
    CHECK(serial.code == 3);
    CHECK(serial.text.find("not solid") != std::string::npos);
}

TEST_CASE("dot export writes one file per level") {
    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / "endspace_cli_dot_test";
    fs::remove_all(dir);
    const RunOut r = run_cli("quotients --source builtin:twin-rays --depth 3 "
                             "--dot " +
                             dir.string());
    CHECK(r.code == 0);
    CHECK(r.text.find("wrote 4 dot files") != std::string::npos);
    for (int n = 0; n <= 3; ++n) {
        const fs::path f = dir / ("level" + std::to_string(n) + ".dot");
        CAPTURE(f.string());
        REQUIRE(fs::exists(f));
        std::ifstream in(f);
        std::string first;
        std::getline(in, first);
        CHECK(first.rfind("digraph", 0) == 0);
    }
    CHECK_FALSE(fs::exists(dir / "level4.dot"));
    fs::remove_all(dir);
}

TEST_CASE("text output spot checks") {
    const RunOut rank = run_cli("rank --source builtin:ray --r-max 3 --depth 8");
    CHECK(rank.code == 0);
    CHECK(rank.text.find("rank: 1 (r_max 3)") != std::string::npos);
    CHECK(rank.text.find("X={v0}") != std::string::npos);

    const RunOut none =
        run_cli("rank --source builtin:symmetric-ray --r-max 3 --depth 12");
    CHECK(none.code == 0);
    CHECK(none.text.find("rank: none up to 3") != std::string::npos);

    const RunOut le =
        run_cli("limit-edges --source builtin:dominated-ray --depth 7");
    CHECK(le.code == 0);
    CHECK(le.text.find("vertex w -> end 0") != std::string::npos);

    const RunOut neck = run_cli(
        "necklace --source builtin:necklace --beads 3 --depth 24");
    CHECK(neck.code == 0);
    CHECK(neck.text.find("found: 3 beads") != std::string::npos);

    const RunOut ce = run_cli("check-euler --source builtin:zchain --depth 12");
    CHECK(ce.code == 0);
    CHECK(ce.text.find("unbalanced cut forward 1 backward 0") !=
          std::string::npos);

    const RunOut q = run_cli("quotients --source builtin:twin-rays --depth 2");
    CHECK(q.code == 0);
    CHECK(q.text.find("level 0: 2 classes, 1 edge") != std::string::npos);
}

TEST_CASE("file sources reach the cli") {
    namespace fs = std::filesystem;
    const fs::path f = fs::temp_directory_path() / "endspace_cli_tri.dg";
    {
        std::ofstream out(f);
        out << "source finite\nedge a b\nedge b c\nedge c a\n";
    }
    const RunOut info = run_cli("info --source " + f.string() + " --format json");
    CHECK(info.code == 0);
    const nlohmann::json doc = parse_json(info.text);
    CHECK(doc["vertex_count"] == 3);
    const RunOut tour =
        run_cli("euler-tour --source " + f.string() + " --depth 6");
    CHECK(tour.code == 0);
    CHECK(tour.text.find("complete: yes") != std::string::npos);
    fs::remove(f);
}
