#include "support.hpp"

#include <tbm/error.hpp>
#include <tbm/fit.hpp>
#include <tbm/full_bm.hpp>
#include <tbm/model_io.hpp>
#include <tbm/rbm.hpp>

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace tbm;
namespace fs = std::filesystem;

namespace {

struct Scratch
{
    fs::path dir;
    Scratch()
    {
        dir = fs::temp_directory_path() / ("tbm_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string path(const std::string& name) const { return (dir / name).string(); }
    std::string write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path(name), std::ios::binary) << text;
        return path(name);
    }
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run(const std::string& args, const std::string& out, const std::string& err)
{
    const std::string cmd = std::string(TBM_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* kWorked = "\n\n1\n1\n1\n2\n1 2\n1 2\n1 2\n1 2\n";

} // namespace

TEST_CASE("model JSON round trip")
{
    const auto d = testing::worked_example();
    const auto t = fit(d, ParameterDomain({Pattern{1}, Pattern{2}}));
    const auto back = model_from_json(model_to_json(t.model, &t.report));
    REQUIRE(back.tbm);
    CHECK(back.kind == "tbm");
    for (const auto& x : t.model.space().outcomes())
        CHECK(back.energy(x) == doctest::Approx(t.model.energy(x)).epsilon(1e-15));
    CHECK(back.tbm->log_partition() == doctest::Approx(t.model.log_partition()));

    const auto bm = fit_full_bm(d, ParameterDomain({Pattern{1}, Pattern{1, 2}}));
    const auto bm_back = model_from_json(model_to_json(bm.model, &bm.report));
    REQUIRE(bm_back.bm);
    CHECK(bm_back.energy(Pattern{1, 2}) == doctest::Approx(bm.model.energy(Pattern{1, 2})));

    RBMModel r(3, 2);
    r.weights << 0.1, 0.2, 0.3, 0.4, 0.5, 0.6;
    r.visible_bias << 1, 2, 3;
    const auto r_back = model_from_json(model_to_json(r));
    REQUIRE(r_back.rbm);
    CHECK(r_back.rbm->weights == r.weights);
    CHECK(r_back.energy(Pattern{0, 2}) == doctest::Approx(rbm_free_energy(r, Pattern{0, 2})));

    auto broken = model_to_json(r);
    broken["schema"] = 2;
    CHECK_THROWS_AS(model_from_json(broken), DataError);
    CHECK_THROWS_AS(model_from_json(nlohmann::json{{"schema", 1}}), DataError);
}

TEST_CASE("cli help, usage errors and version")
{
    Scratch s;
    const auto out = s.path("out");
    const auto err = s.path("err");
    CHECK(run("--help", out, err) == 0);
    const auto help = slurp(out);
    for (const char* sub : {"mine", "fit-tbm", "fit-bm", "fit-rbm", "eval", "synth", "biasvar", "compare"})
        CHECK(help.find(sub) != std::string::npos);
    CHECK(run("--version", out, err) == 0);
    CHECK(run("mine --input x --no-such-flag", out, err) == 2);
    CHECK_FALSE(slurp(err).empty());
    CHECK(run("", out, err) == 2);
}

TEST_CASE("cli mine and exit codes")
{
    Scratch s;
    const auto out = s.path("out");
    const auto err = s.path("err");
    const auto data = s.write("worked.dat", kWorked);
    CHECK(run("mine --keep-empty --sigma 0.45 --k 2 --out - -i " + data, out, err) == 0);
    CHECK(slurp(out) == "{\"B\":2,\"N\":10,\"k\":2,\"n\":3,\"sigma\":0.45}\n1\n2\n");

    const auto bad = s.write("bad.dat", "1 x\n");
    CHECK(run("mine -i " + bad, out, err) == 3);
    CHECK(slurp(err).find("line 1") != std::string::npos);

    const auto constant = s.write("constant.dat", "0\n0\n0\n");
    CHECK(run("fit-tbm --sigma 0.5 --k 1 -o - -i " + constant, out, err) == 4);
}

TEST_CASE("cli fit and eval")
{
    Scratch s;
    const auto out = s.path("out");
    const auto err = s.path("err");
    const auto data = s.write("worked.dat", kWorked);
    const auto model = s.path("model.json");
    REQUIRE(run("fit-tbm --keep-empty --sigma 0.45 -i " + data + " -o " + model, out, err) == 0);
    REQUIRE(run("eval --keep-empty -m " + model + " -i " + data + " -o -", out, err) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    CHECK(j["kl"].get<double>() == doctest::Approx(0.02416).epsilon(1e-3));
    CHECK(j["proxy_error"].get<double>() == doctest::Approx(j["kl"].get<double>()));

    REQUIRE(run("fit-rbm --match-params 2 --updates 50 -i " + data + " -o " + model, out, err) == 0);
    REQUIRE(run("eval --keep-empty -m " + model + " -i " + data, out, err) == 0);
    CHECK(nlohmann::json::parse(slurp(out))["kl"].is_null());
}

TEST_CASE("cli outputs are deterministic")
{
    Scratch s;
    const auto err = s.path("err");
    for (const std::string& args :
         {std::string("synth --n-vars 10 --support-size 30 --n 500 --seed 4"),
          std::string("biasvar --space-size 40 --n-vars 8 --n 500 --trials 3 --min-params 4 --max-params 12 --seed 2")})
    {
        const auto a = s.path("a");
        const auto b = s.path("b");
        REQUIRE(run(args + " -o -", a, err) == 0);
        REQUIRE(run(args + " -o -", b, err) == 0);
        CHECK_FALSE(slurp(a).empty());
        CHECK(slurp(a) == slurp(b));
    }
}

TEST_CASE("cli compare marks the BM infeasible on wide data")
{
    Scratch s;
    const auto out = s.path("out");
    const auto err = s.path("err");
    const auto data = s.write("wide.dat", "0 1\n0\n30\n0 1\n");
    REQUIRE(run("compare --sigma 0.25 --updates 20 -o - -i " + data, out, err) == 0);
    const auto j = nlohmann::json::parse(slurp(out));
    REQUIRE(j["methods"].size() == 3);
    CHECK(j["methods"][0]["method"] == "tbm");
    CHECK(j["methods"][1]["feasible"] == false);
    CHECK(j["methods"][1]["proxy_error"].is_null());
    CHECK(j["methods"][2]["feasible"] == true);
}
