#include <catch2/catch_amalgamated.hpp>

#include <figint/cli.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

using namespace figint;

namespace {

std::vector<ConfigEntry> entries_of(const std::string& text, Command active) {
    std::istringstream in(text);
    return parse_config_file(in, active, "mem");
}

} // namespace

TEST_CASE("levels and domain flags parse strictly", "[cli]") {
    CHECK(parse_levels("4..9") == std::pair{4, 9});
    CHECK(parse_levels("7..7") == std::pair{7, 7});
    CHECK_THROWS_AS(parse_levels("9..4"), ConfigError);
    CHECK_THROWS_AS(parse_levels("4-9"), ConfigError);
    CHECK_THROWS_AS(parse_levels("a..b"), ConfigError);
    CHECK_THROWS_AS(parse_levels("4..9x"), ConfigError);

    CHECK(parse_domain("-2,2,-2,2") == std::vector<double>{-2, 2, -2, 2});
    CHECK(parse_domain("0,1,0,1,0,1").size() == 6);
    CHECK_THROWS_AS(parse_domain("1,2,3"), ConfigError);
    CHECK_THROWS_AS(parse_domain("1,2,3,4,5"), ConfigError);
    CHECK_THROWS_AS(parse_domain("a,b,c,d"), ConfigError);

    CHECK(parse_command("jordan") == Command::Jordan);
    CHECK(parse_command("green") == Command::Green);
    CHECK(parse_command("gauss") == Command::Gauss);
    CHECK(parse_command("additivity") == Command::Additivity);
    CHECK_THROWS_AS(parse_command("stokes"), ConfigError);
}

TEST_CASE("config files mix global and sectioned keys", "[cli]") {
    const std::string text =
        "# shared\n"
        "threads = 4\n"
        "[green]\n"
        "field = rot\n"
        "levels = 3..6\n"
        "[gauss]\n"
        "field = radial\n";

    const auto green = entries_of(text, Command::Green);
    REQUIRE(green.size() == 3);
    CHECK(green[0].key == "threads");
    CHECK(green[1].key == "field");
    CHECK(green[1].value == "rot");
    CHECK(green[2].key == "levels");
    CHECK(green[1].line == 4);

    const auto gauss = entries_of(text, Command::Gauss);
    REQUIRE(gauss.size() == 2);
    CHECK(gauss[1].value == "radial");

    const auto jordan = entries_of(text, Command::Jordan);
    REQUIRE(jordan.size() == 1); // only the global key
}

TEST_CASE("config file errors carry line numbers", "[cli]") {
    auto message = [](const std::string& text) {
        try {
            (void)entries_of(text, Command::Jordan);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string{};
    };
    CHECK(message("threads = 1\nnonsense\n").find("mem:2:") != std::string::npos);
    CHECK(message("[qux]\n").find("unknown section") != std::string::npos);
    CHECK(message("[green\n").find("unterminated") != std::string::npos);
    CHECK(message("= 3\n").find("empty key") != std::string::npos);
}

TEST_CASE("config keys apply onto the run configuration", "[cli]") {
    RunConfig cfg;
    apply_config_key(cfg, "region", "disk:512");
    apply_config_key(cfg, "field", "weier:K=12");
    apply_config_key(cfg, "levels", "3..5");
    apply_config_key(cfg, "tol-line", "1e-3");
    apply_config_key(cfg, "order", "12");
    apply_config_key(cfg, "hq", "0.125");
    apply_config_key(cfg, "max-seg", "1e-3");
    apply_config_key(cfg, "flux-depth", "3");
    apply_config_key(cfg, "domain", "-2,2,-2,2");
    apply_config_key(cfg, "out", "report.csv");
    apply_config_key(cfg, "threads", "8");
    apply_config_key(cfg, "samples", "250");
    apply_config_key(cfg, "seed", "42");
    CHECK(cfg.region == "disk:512");
    CHECK(cfg.field == "weier:K=12");
    CHECK(cfg.levels == std::pair{3, 5});
    CHECK(cfg.tol_line == 1e-3);
    CHECK(cfg.order == 12);
    CHECK(cfg.hq == 0.125);
    CHECK(cfg.max_seg == 1e-3);
    CHECK(cfg.flux_depth == 3);
    REQUIRE(cfg.domain.has_value());
    CHECK(cfg.domain->size() == 4);
    CHECK(cfg.out == "report.csv");
    CHECK(cfg.threads == 8);
    CHECK(cfg.samples == 250);
    CHECK(cfg.seed == 42);

    CHECK_THROWS_AS(apply_config_key(cfg, "colour", "red"), ConfigError);
    CHECK_THROWS_AS(apply_config_key(cfg, "order", "eight"), ConfigError);
    CHECK_THROWS_AS(apply_config_key(cfg, "tol-line", "1e"), ConfigError);
}

TEST_CASE("region specs resolve to shapes", "[cli]") {
    CHECK(make_region2("square").signed_area() == 1.0);
    CHECK(make_region2("lshape").signed_area() == 3.0);
    CHECK(make_region2("disk:64").segment_count() == 64);
    CHECK_THROWS_AS(make_region2("disk"), ConfigError);
    CHECK_THROWS_AS(make_region2("disk:two"), ConfigError);
    CHECK_THROWS_AS(make_region2("/nonexistent/c.curve"), std::runtime_error);

    CHECK(mesh_checks(make_region3("cube")).closed);
    CHECK(make_region3("icosphere:1").triangles.size() == 80);
    CHECK_THROWS_AS(make_region3("icosphere"), ConfigError);
    CHECK_THROWS_AS(make_region3("/nonexistent/m.obj"), std::runtime_error);
}

TEST_CASE("run validates ranges through ConfigError", "[cli]") {
    RunConfig cfg;
    cfg.command = Command::Jordan;
    cfg.region = "square";
    std::ostringstream sink;

    cfg.levels = {0, 3};
    CHECK_THROWS_AS(run(cfg, sink), ConfigError);
    cfg.levels = {3, 15};
    CHECK_THROWS_AS(run(cfg, sink), ConfigError);
    cfg.levels = {3, 6};
    cfg.order = 0;
    CHECK_THROWS_AS(run(cfg, sink), ConfigError);
    cfg.order = 8;
    cfg.threads = 0;
    CHECK_THROWS_AS(run(cfg, sink), ConfigError);
    cfg.threads = 1;
    cfg.tol_figure = -2.0;
    CHECK_THROWS_AS(run(cfg, sink), ConfigError);
    cfg.tol_figure = {};
    cfg.domain = std::vector<double>{2, -2, 2, -2};
    CHECK_THROWS_AS(run(cfg, sink), ConfigError);

    RunConfig green;
    green.command = Command::Green;
    green.region = "square";
    CHECK_THROWS_AS(run(green, sink), ConfigError); // field missing
    green.field = "vortex";
    CHECK_THROWS_AS(run(green, sink), ConfigError); // unknown field
    set_thread_count(1);
}

TEST_CASE("jordan run emits CSV and a summary verdict", "[cli]") {
    RunConfig cfg;
    cfg.command = Command::Jordan;
    cfg.region = "square";
    cfg.levels = {3, 6};
    cfg.domain = std::vector<double>{-1, 3, -1, 3};
    std::ostringstream out;
    const int rc = run(cfg, out);
    CHECK(rc == 0);
    const std::string text = out.str();
    CHECK(text.rfind("# schema=1\n", 0) == 0);
    CHECK(text.find(kLevelCsvHeader) != std::string::npos);
    CHECK(text.find("jordan PASS") != std::string::npos);

    // an unreachable tolerance flips the verdict and the exit status
    cfg.tol_figure = 1e-12;
    std::ostringstream out2;
    CHECK(run(cfg, out2) == 1);
    CHECK(out2.str().find("jordan FAIL") != std::string::npos);
    set_thread_count(1);
}

TEST_CASE("green run verdict on a quick study", "[cli]") {
    RunConfig cfg;
    cfg.command = Command::Green;
    cfg.region = "disk:128";
    cfg.field = "rot";
    cfg.levels = {3, 6};
    cfg.domain = std::vector<double>{-2, 2, -2, 2};
    cfg.max_seg = 1e-3;
    std::ostringstream out;
    CHECK(run(cfg, out) == 0);
    CHECK(out.str().find("green PASS") != std::string::npos);
    CHECK(out.str().find(kGreenCsvHeader) != std::string::npos);
    set_thread_count(1);
}

TEST_CASE("gauss run verdict on a quick study", "[cli]") {
    RunConfig cfg;
    cfg.command = Command::Gauss;
    cfg.region = "cube";
    cfg.field = "radial";
    cfg.levels = {3, 4};
    cfg.domain = std::vector<double>{-1, 3, -1, 3, -1, 3};
    std::ostringstream out;
    CHECK(run(cfg, out) == 0);
    CHECK(out.str().find("gauss PASS") != std::string::npos);
    set_thread_count(1);

    cfg.domain = std::vector<double>{-1, 3, -1, 3};
    std::ostringstream out2;
    CHECK_THROWS_AS(run(cfg, out2), ConfigError); // 3D domain needs 6 coords
    set_thread_count(1);
}

TEST_CASE("additivity run covers the whole catalog by default", "[cli]") {
    RunConfig cfg;
    cfg.command = Command::Additivity;
    cfg.samples = 64;
    std::ostringstream out;
    CHECK(run(cfg, out) == 0);
    const std::string text = out.str();
    CHECK(text.find("function,samples,max_defect,tol,pass") != std::string::npos);
    CHECK(text.find("area,64,0,") != std::string::npos); // exactly zero, printed as 0
    CHECK(text.find("circulation[rot]") != std::string::npos);
    CHECK(text.find("circulation[weier]") != std::string::npos);
    CHECK(text.find("additivity PASS") != std::string::npos);
    set_thread_count(1);
}

TEST_CASE("additivity study is reproducible by seed", "[cli]") {
    RunConfig cfg;
    cfg.command = Command::Additivity;
    cfg.samples = 32;
    cfg.field = "weier:K=8";
    cfg.seed = 7;
    std::ostringstream a, b;
    CHECK(run(cfg, a) == 0);
    CHECK(run(cfg, b) == 0);
    CHECK(a.str() == b.str());

    cfg.seed = 8;
    std::ostringstream c;
    CHECK(run(cfg, c) == 0);
    CHECK(c.str() != a.str()); // different draws move the max defect
    set_thread_count(1);
}

TEST_CASE("runs are byte-identical across thread counts", "[cli]") {
    RunConfig cfg;
    cfg.command = Command::Green;
    cfg.region = "disk:128";
    cfg.field = "weier:K=10";
    cfg.levels = {3, 5};
    cfg.domain = std::vector<double>{-2, 2, -2, 2};
    cfg.max_seg = 1e-2;

    cfg.threads = 1;
    std::ostringstream a;
    (void)run(cfg, a);
    cfg.threads = 8;
    std::ostringstream b;
    (void)run(cfg, b);
    set_thread_count(1);
    CHECK(a.str() == b.str());
}

TEST_CASE("out flag writes the CSV to a file and keeps the summary on the console",
          "[cli]") {
    const std::string path = "cli_out_test.csv";
    RunConfig cfg;
    cfg.command = Command::Jordan;
    cfg.region = "square";
    cfg.levels = {3, 5};
    cfg.domain = std::vector<double>{-1, 3, -1, 3};
    cfg.out = path;
    std::ostringstream out;
    CHECK(run(cfg, out) == 0);
    CHECK(out.str().find("# schema=1") == std::string::npos); // CSV went to the file
    CHECK(out.str().find("jordan PASS") != std::string::npos);

    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::string content(std::istreambuf_iterator<char>(f), {});
    CHECK(content.rfind("# schema=1\n", 0) == 0);
    f.close();
    std::remove(path.c_str());
    set_thread_count(1);
}
