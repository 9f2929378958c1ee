#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "gl3lab/cli_report.hpp"
#include "gl3lab/errors.hpp"
#include "json.hpp"

using namespace gl3lab;

namespace {

RunConfig with_data(RunConfig c) {
    c.data_paths = {GL3LAB_DATA_DIR};
    return c;
}

// every object in the document lists its keys in sorted order
bool keys_sorted(const std::string& text) {
    bool ok = true;
    nlohmann::ordered_json doc = nlohmann::ordered_json::parse(text);
    auto walk = [&](auto&& self, const nlohmann::ordered_json& j) -> void {
        if (j.is_object()) {
            std::string prev;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first && it.key() < prev) ok = false;
                prev = it.key();
                first = false;
                self(self, it.value());
            }
        } else if (j.is_array()) {
            for (const auto& x : j) self(self, x);
        }
    };
    walk(walk, doc);
    return ok;
}

}  // namespace

TEST_CASE("config parsing and validation") {
    RunConfig c = parse_config(
        "# comment\n"
        "suites = kloosterman, sieve\n"
        "epsilon=0.2\n"
        "seed = 42\n"
        "\n"
        "sieve.trials = 10\n"
        "kloosterman.weil_tol = 1e-12\n");
    CHECK(c.suites == std::vector<std::string>{"kloosterman", "sieve"});
    CHECK(c.epsilon == 0.2);
    CHECK(c.seed == 42);
    CHECK(c.param("sieve.trials", 100L) == 10);
    CHECK(c.param("sieve.missing", 7.5) == 7.5);
    CHECK_NOTHROW(c.validate());

    CHECK_THROWS_AS(parse_config("no equals sign\n"), ParseError);
    CHECK_THROWS_AS(parse_config("unknown.key = 1\n"), ParseError);
    CHECK_THROWS_AS(parse_config("bare = 1\n"), ParseError);
    try {
        parse_config("seed = 1\nsuites = sieve\noops\n");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
    }

    RunConfig bad = parse_config("kloosterman.weil_tol = -1\n");
    CHECK_THROWS_AS(bad.validate(), UsageError);
    CHECK_THROWS_AS(parse_config("voronoi.identity_tol = abc\n").validate(), UsageError);
    CHECK_THROWS_AS(parse_config("epsilon = 0.5\n").validate(), UsageError);
    CHECK_THROWS_AS(parse_config("suites = everything\n").validate(), UsageError);
    CHECK(parse_config("suites =\n").suites.empty());
}

TEST_CASE("precision mode from the environment") {
    ::unsetenv("GL3LAB_PRECISION");
    CHECK(precision_from_env() == PrecisionMode::binary64);
    ::setenv("GL3LAB_PRECISION", "extended", 1);
    CHECK(precision_from_env() == PrecisionMode::extended);
    ::setenv("GL3LAB_PRECISION", "quad", 1);
    CHECK_THROWS_AS(precision_from_env(), UsageError);
    ::unsetenv("GL3LAB_PRECISION");
}

TEST_CASE("empty suite list") {
    VerificationReport rep = run_suites(RunConfig{}, GoldenStore{});
    CHECK(rep.checks.empty());
    CHECK(rep.exit_code() == 0);
    std::string human = emit_report(rep, ReportFormat::human);
    CHECK(std::count(human.begin(), human.end(), '\n') == 2);  // title and column header
    CHECK(human.find("check") != std::string::npos);
}

TEST_CASE("machine report round trip, sorted keys, no runtimes by default") {
    VerificationReport rep;
    rep.suite = "sieve";
    rep.environment.seed = 9;
    Check a;
    a.name = "sieve.x";
    a.lhs = 0.1 + 0.2;
    a.rhs = 1.0 / 3.0;
    a.err = std::numeric_limits<double>::infinity();
    a.tolerance = 1e-10;
    a.tolerance_source = "default";
    a.fitted_constants = {{"z", 2.5}, {"a", -1e-300}};
    a.status = CheckStatus::warn;
    a.note = "quoted \"note\"";
    Check b = a;
    b.name = "sieve.y";
    b.status = CheckStatus::fail;
    b.err = std::numeric_limits<double>::quiet_NaN();
    rep.checks = {a, b};

    std::string j = emit_report(rep, ReportFormat::machine);
    CHECK(keys_sorted(j));
    CHECK(j.find("runtime") == std::string::npos);
    VerificationReport back = parse_machine_report(j);
    CHECK(back.suite == rep.suite);
    CHECK(back.environment == rep.environment);
    REQUIRE(back.checks.size() == 2);
    CHECK(back.checks[0] == rep.checks[0]);
    CHECK(std::isnan(back.checks[1].err));
    CHECK(back.checks[1].status == CheckStatus::fail);
    CHECK(emit_report(back, ReportFormat::machine) == j);
    CHECK(rep.exit_code() == 1);

    rep.checks[0].runtime_s = 1.5;
    CHECK(emit_report(rep, ReportFormat::machine, true).find("runtime") != std::string::npos);
    CHECK_THROWS_AS(parse_machine_report("{\"suite\": 3}"), ParseError);
}

TEST_CASE("golden store") {
    auto path = std::filesystem::temp_directory_path() / "gl3lab_goldens_test.json";
    std::filesystem::remove(path);
    GoldenStore g = GoldenStore::load(path);
    CHECK(g.size() == 0);
    g.set("sieve.gallagher_multiplicative.max_ratio", 1.25, "note");
    g.save(path);
    GoldenStore h = GoldenStore::load(path);
    CHECK(h.get("sieve.gallagher_multiplicative.max_ratio") == 1.25);
    CHECK(!h.get("absent").has_value());
    std::filesystem::remove(path);
}

TEST_CASE("kloosterman suite passes with defaults and is deterministic") {
    RunConfig c = with_data({});
    c.suites = {"kloosterman"};
    VerificationReport a = run_suites(c, GoldenStore{});
    REQUIRE(!a.checks.empty());
    for (const auto& ch : a.checks) {
        INFO(ch.name << " err=" << ch.err << " " << ch.note);
        CHECK(ch.status == CheckStatus::pass);
        CHECK(ch.name.rfind("kloosterman.", 0) == 0);
        CHECK(!ch.tolerance_source.empty());
    }
    CHECK(a.exit_code() == 0);
    VerificationReport b = run_suites(c, GoldenStore{});
    CHECK(emit_report(a, ReportFormat::machine) == emit_report(b, ReportFormat::machine));

    // a configured tolerance is used and named as the source
    c.params["kloosterman.lemma_9_2_tol"] = "1e-30";
    VerificationReport t = run_suites(c, GoldenStore{});
    bool seen = false;
    for (const auto& ch : t.checks)
        if (ch.name == "kloosterman.lemma_9_2") {
            seen = true;
            CHECK(ch.tolerance == 1e-30);
            CHECK(ch.tolerance_source == "config:kloosterman.lemma_9_2_tol");
        }
    CHECK(seen);
}

TEST_CASE("fitted constants are compared against goldens and recorded") {
    RunConfig c = with_data({});
    c.suites = {"families"};
    GoldenStore rec;
    VerificationReport first = run_suites(c, GoldenStore{}, &rec);
    CHECK(rec.size() > 0);
    CHECK(first.exit_code() == 0);
    VerificationReport again = run_suites(c, rec);
    CHECK(again.exit_code() == 0);
    for (const auto& ch : again.checks) CHECK(ch.status == CheckStatus::pass);

    // a golden 20% below the current value flags a regression
    GoldenStore low = rec;
    bool lowered = false;
    for (const auto& ch : first.checks)
        for (const auto& [k, v] : ch.fitted_constants)
            if (!lowered && v > 0) {
                low.set(ch.name + "." + k, v / 1.2, "lowered");
                lowered = true;
            }
    REQUIRE(lowered);
    CHECK(run_suites(c, low).exit_code() == 1);
}
