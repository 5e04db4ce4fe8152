#include "golden.hpp"

#include "rlam/cli.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <sstream>

using namespace rlam;
using nlohmann::json;

namespace {

const std::string corpus = RLAM_CORPUS_DIR;

golden::Outcome run_args(std::vector<std::string> args)
{
    for (auto& a : args)
        if (a.rfind("corpus/", 0) == 0)
            a = corpus + a.substr(6);
    std::ostringstream out, err;
    int code = rlam::run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("golden outputs")
    {
        auto cases = golden::load(corpus);
        REQUIRE(cases.size() >= 30);
        for (const auto& c : cases) {
            INFO(c.name);
            auto got = golden::run(c);
            CHECK(got.exit_code == c.exit_code);
            CHECK(got.out == golden::expected(corpus, c));
        }
    }

    TEST_CASE("manifest tokenizer")
    {
        auto w = golden::split_args("probe f.rlam --domain 'a >= 0 /\\ b >= 0' \"\" x");
        REQUIRE(w.size() == 6);
        CHECK(w[3] == "a >= 0 /\\ b >= 0");
        CHECK(w[4].empty());
        CHECK_THROWS(golden::split_args("a 'b"));
    }

    TEST_CASE("errors go to stderr with exit 2")
    {
        auto r = run_args({"check", "corpus/parse_error.rlam"});
        CHECK(r.exit_code == exit_error);
        CHECK(r.out.empty());
        CHECK(r.err.find("parse_error.rlam:2:1:") != std::string::npos);

        CHECK(run_args({"eval", "corpus/mul.rlam", "--args", "1"}).exit_code == exit_error);
        CHECK(run_args({"eval", "corpus/mul.rlam", "--args", "1,2,3"}).exit_code == exit_error);
        CHECK(run_args({"grad", "corpus/mul.rlam", "--at", "x"}).exit_code == exit_error);
        CHECK(run_args({"nonsense"}).exit_code == exit_error);
        CHECK(run_args({"check", "corpus/missing.rlam"}).exit_code == exit_error);
        CHECK(run_args({"--seed", "abc", "probe", "corpus/jump_if.rlam"}).exit_code == exit_error);
        CHECK(run_args({"probe", "corpus/jump_if.rlam", "--domain", "q >= 0"}).exit_code == exit_error);
    }

    TEST_CASE("help exits 0")
    {
        auto r = run_args({"--help"});
        CHECK(r.exit_code == exit_ok);
        CHECK(r.out.find("check") != std::string::npos);
    }

    TEST_CASE("json envelope")
    {
        auto ok = run_args({"--json", "typecheck", "corpus/twice.rlam"});
        CHECK(ok.exit_code == exit_ok);
        json a = json::parse(ok.out);
        CHECK(a.at("status") == "ok");
        CHECK(a.at("diagnostics").empty());

        auto neg = run_args({"--json", "check", "corpus/jump_if.rlam"});
        json b = json::parse(neg.out);
        CHECK(b.at("status") == "negative");
        CHECK(b.at("result").at("witness").at("a") == "0");

        auto bad = run_args({"--json", "check", "corpus/parse_error.rlam"});
        CHECK(bad.exit_code == exit_error);
        json c = json::parse(bad.out);
        CHECK(c.at("status") == "error");
        CHECK_FALSE(c.at("diagnostics").empty());
    }

    TEST_CASE("seed flag and environment agree")
    {
        auto a = run_args({"--seed", "9", "--json", "probe", "corpus/glued_if.rlam"});
        setenv("RLAM_SEED", "9", 1);
        auto b = run_args({"--json", "probe", "corpus/glued_if.rlam"});
        unsetenv("RLAM_SEED");
        CHECK(a.exit_code == exit_ok);
        CHECK(a.out == b.out);
    }

    TEST_CASE("grad agrees with finite differences on the corpus")
    {
        auto r = run_args({"--json", "grad", "corpus/sin_cos.rlam", "--at", "0.3,-1.2", "--check-fd"});
        REQUIRE(r.exit_code == exit_ok);
        json j = json::parse(r.out);
        auto g = j.at("result").at("gradient");
        CHECK(g[0].get<double>() == doctest::Approx(std::cos(0.3)));
        CHECK(g[1].get<double>() == doctest::Approx(-std::sin(-1.2)));
    }
}
