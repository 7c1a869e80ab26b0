#include "doctest.h"
#include "support.hpp"

#include "volwin/cli.hpp"
#include "volwin/ingest.hpp"
#include "volwin/sim.hpp"

#include "json.hpp"

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

using namespace volwin;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

int run_binary(const std::string& args) {
    const int status = std::system((std::string(VOLWIN_BINARY) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string vendor_csv(const std::vector<std::string>& closes) {
    std::string text = "Date,Open,High,Low,Close,Adj Close,Volume\n";
    Date d(2020, 1, 6);
    for (const auto& c : closes) {
        text += d.iso() + ",1,1,1," + c + "," + (c.empty() ? std::string() : c + "0") + ",0\n";
        d = d.next_weekday();
    }
    return text;
}

void write_sim(const fs::path& dir, const std::string& market, const std::string& model, const std::string& params,
               std::uint64_t seed, std::size_t n = 3000) {
    const auto r = run({"simulate", "--model", model, "--params", params, "--law", "t", "--n", std::to_string(n),
                        "--seed", std::to_string(seed), "--market", market, "--out", dir.string()});
    REQUIRE(r.code == 0);
}

}  // namespace

TEST_CASE("usage errors exit 1") {
    CHECK(run({}).code == cli::kUsage);
    CHECK(run({"frobnicate"}).code == cli::kUsage);
    CHECK(run({"fit"}).code == cli::kUsage);
    CHECK(run({"--help"}).code == cli::kOk);
    const auto dir = testing::scratch_dir("cli_usage");
    write_sim(dir, "s", "garch", "omega=1e-6,alpha=0.08,beta=0.9,nu=6", 1, 300);
    const auto bad = run({"fit", (dir / "s.returns.csv").string(), "--model", "figarch"});
    CHECK(bad.code == cli::kUsage);
    CHECK(bad.err.find("figarch") != std::string::npos);
    CHECK(run({"fit", (dir / "s.returns.csv").string(), "--law", "cauchy"}).code == cli::kUsage);
    CHECK(run({"simulate", "--params", "alpha=x"}).code == cli::kUsage);
    CHECK(run({"simulate", "--params", "delta=1"}).code == cli::kUsage);
    CHECK(run({"simulate", "--model", "garch", "--params", "omega=1e-6,alpha=0.2,beta=0.9", "--out", dir.string()})
              .code == cli::kUsage);
    fs::remove_all(dir);
}

TEST_CASE("ingest command") {
    const auto dir = testing::scratch_dir("cli_ingest");
    testing::write_text(dir / "IDN.csv", vendor_csv({"100", "", "104", "105", "null", "null", "111"}));
    const auto ok = run({"ingest", (dir / "IDN.csv").string(), "--out", (dir / "out").string()});
    REQUIRE(ok.code == cli::kOk);
    CHECK(ok.out.find("3 gaps repaired (longest run 2)") != std::string::npos);
    REQUIRE(fs::exists(dir / "out/IDN.prices.csv"));
    REQUIRE(fs::exists(dir / "out/IDN.returns.csv"));
    const auto returns = ingest::read_returns_csv((dir / "out/IDN.returns.csv").string());
    CHECK(returns.size() == 6);
    CHECK(returns[0] == doctest::Approx(std::log(102.0 / 100.0)).epsilon(1e-14));

    const auto adj = run({"ingest", (dir / "IDN.csv").string(), "--column", "adjclose", "--market", "ADJ", "--out",
                          (dir / "out").string()});
    REQUIRE(adj.code == cli::kOk);
    const auto adj_returns = ingest::read_returns_csv((dir / "out/ADJ.returns.csv").string());
    CHECK(adj_returns[0] == doctest::Approx(std::log(1020.0 / 1000.0)).epsilon(1e-14));

    testing::write_text(dir / "LEAD.csv", vendor_csv({"", "100", "101"}));
    const auto lead = run({"ingest", (dir / "LEAD.csv").string(), "--out", (dir / "out").string()});
    CHECK(lead.code == cli::kDataError);
    CHECK(lead.err.find("2020-01-06") != std::string::npos);
    CHECK(run({"ingest", (dir / "missing.csv").string()}).code == cli::kDataError);

    const auto before = testing::read_text(dir / "IDN.csv");
    run({"ingest", (dir / "IDN.csv").string(), "--out", dir.string()});
    CHECK(testing::read_text(dir / "IDN.csv") == before);
    fs::remove_all(dir);
}

TEST_CASE("adf command") {
    const auto dir = testing::scratch_dir("cli_adf");
    write_sim(dir, "stat", "garch", "omega=1e-6,alpha=0.08,beta=0.9,nu=6", 2, 1500);
    const auto stat = run({"adf", (dir / "stat.returns.csv").string()});
    REQUIRE(stat.code == cli::kOk);
    CHECK(stat.out.find("country,statistic,lag,p_value,conclusion") != std::string::npos);
    CHECK(stat.out.find(",15,<0.01,Stationary") != std::string::npos);

    const auto sim = ingest::read_returns_csv((dir / "stat.returns.csv").string());
    std::vector<double> walk(sim.values().begin(), sim.values().end());
    for (std::size_t i = 1; i < walk.size(); ++i) walk[i] += walk[i - 1];
    ingest::write_returns_csv((dir / "walk.returns.csv").string(), ReturnSeries("walk", sim.dates(), walk), {});
    const auto rw = run({"adf", (dir / "walk.returns.csv").string(), "--lags", "10", "--out", (dir / "rw.csv").string()});
    REQUIRE(rw.code == cli::kOk);
    CHECK(testing::read_text(dir / "rw.csv").find(",10,") != std::string::npos);
    CHECK(testing::read_text(dir / "rw.csv").find("NonStationary") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("fit and diagnose commands") {
    const auto dir = testing::scratch_dir("cli_fit");
    write_sim(dir, "tg", "tgarch", "omega=2e-6,alpha=0.03,beta=0.88,gamma=0.12,nu=6", 3);
    const auto returns = (dir / "tg.returns.csv").string();
    const auto a = run({"fit", returns, "--model", "tgarch", "--law", "t", "--seed", "4", "--starts", "2", "--out",
                        (dir / "a.json").string()});
    REQUIRE(a.code == cli::kOk);
    const auto b = run({"fit", returns, "--model", "tgarch", "--law", "t", "--seed", "4", "--starts", "2", "--out",
                        (dir / "b.json").string()});
    REQUIRE(b.code == cli::kOk);
    const auto text = testing::read_text(dir / "a.json");
    CHECK(text == testing::read_text(dir / "b.json"));
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc["model"] == "tgarch");
    CHECK(doc["converged"] == true);
    CHECK(doc["params"].contains("nu"));
    CHECK(doc["params"]["gamma"].get<double>() > 0.0);
    CHECK(std::isfinite(doc["log_likelihood"].get<double>()));

    const auto d = run({"diagnose", returns, (dir / "a.json").string(), "--out", (dir / "diag").string()});
    REQUIRE(d.code == cli::kOk);
    for (const char* f : {"diagnostics.csv", "var_backtest.csv", "tg.std_residuals.csv", "tg.acf.csv", "tg.qq.csv",
                          "tg.volatility_track.csv", "tg.var_hits.csv"}) {
        CAPTURE(f);
        CHECK(fs::exists(dir / "diag" / f));
    }
    CHECK(testing::read_text(dir / "diag/diagnostics.csv").find("country,ljung_box_p,arch_lm_p,interpretation\ntg,") !=
          std::string::npos);
    CHECK(testing::read_text(dir / "diag/var_backtest.csv").find("tg,0.99,3000,") != std::string::npos);

    const auto capped = run({"fit", returns, "--model", "garch", "--starts", "1", "--max-iterations", "100",
                             "--tolerance", "1e-300", "--out", (dir / "c.json").string()});
    CHECK(capped.code == cli::kNumericalFailure);
    CHECK(nlohmann::json::parse(testing::read_text(dir / "c.json"))["converged"] == false);

    testing::write_text(dir / "broken.json", "{}");
    CHECK(run({"diagnose", returns, (dir / "broken.json").string(), "--out", dir.string()}).code == cli::kDataError);
    fs::remove_all(dir);
}

TEST_CASE("simulate command") {
    const auto dir = testing::scratch_dir("cli_sim");
    const std::vector<std::string> args{"simulate", "--model", "egarch", "--params",
                                        "omega=-0.3,alpha=0.15,beta=0.96,gamma=-0.08,nu=6", "--n", "400", "--seed",
                                        "9"};
    auto first = args;
    first.insert(first.end(), {"--out", (dir / "one").string()});
    auto second = args;
    second.insert(second.end(), {"--out", (dir / "two").string()});
    REQUIRE(run(first).code == cli::kOk);
    REQUIRE(run(second).code == cli::kOk);
    for (const char* f : {"sim.returns.csv", "sim.truth.json"}) {
        CHECK(testing::read_text(dir / "one" / f) == testing::read_text(dir / "two" / f));
    }
    const auto truth = nlohmann::json::parse(testing::read_text(dir / "one/sim.truth.json"));
    CHECK(truth["params"]["beta"] == 0.96);
    CHECK(truth["sigma2"].size() == 400);
    CHECK(testing::read_text(dir / "one/sim.returns.csv").find("\ndate,return\n2010-01-04,") != std::string::npos);

    testing::write_text(dir / "regimes.yaml", R"(model: tgarch
segments:
  - {length: 300, params: {omega: 2e-6, alpha: 0.05, gamma: 0.03, beta: 0.9, nu: 10}}
  - {length: 200, params: {omega: 4e-6, alpha: 0.03, gamma: 0.2, beta: 0.86, nu: 5}}
)");
    REQUIRE(run({"simulate", "--regimes", (dir / "regimes.yaml").string(), "--seed", "1", "--market", "reg",
                 "--vendor-prices", "--out", dir.string()})
                .code == cli::kOk);
    const auto reg = nlohmann::json::parse(testing::read_text(dir / "reg.truth.json"));
    CHECK(reg["boundaries"] == nlohmann::json::array({0, 300}));
    CHECK(reg["segments"][1]["params"]["gamma"] == 0.2);
    CHECK(fs::exists(dir / "reg.vendor.csv"));
    CHECK(ingest::load_price_csv((dir / "reg.vendor.csv").string()).size() == 501);
    CHECK(run({"simulate", "--regimes", (dir / "nope.yaml").string()}).code == cli::kDataError);
    fs::remove_all(dir);
}

TEST_CASE("study command on a small panel") {
    const auto dir = testing::scratch_dir("cli_study");
    write_sim(dir, "AAA", "garch", "omega=2e-6,alpha=0.08,beta=0.9,nu=8", 10, 1900);
    testing::write_text(dir / "study.yaml", R"(seed: 3
families: [garch]
fit: {starts: 1}
markets:
  - {id: AAA, returns: AAA.returns.csv}
windows:
  - {name: early, start: 2010-01-01, end: 2013-12-31, crisis: false}
  - {name: late, start: 2014-01-01, end: 2016-12-31, crisis: true}
)");
    const auto one = run({"study", (dir / "study.yaml").string(), "--out", (dir / "one").string()});
    REQUIRE(one.code == cli::kOk);
    const auto two = run({"study", (dir / "study.yaml").string(), "--out", (dir / "two").string(), "--threads", "2"});
    REQUIRE(two.code == cli::kOk);
    for (const auto& entry : fs::recursive_directory_iterator(dir / "one")) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), dir / "one");
        CAPTURE(rel.string());
        CHECK(testing::read_text(entry.path()) == testing::read_text(dir / "two" / rel));
    }
    CHECK(testing::read_text(dir / "one/study.csv").find("country,window,model,alpha,beta,gamma,nu,persistence,status") !=
          std::string::npos);
    CHECK(run({"study", (dir / "absent.yaml").string()}).code == cli::kDataError);
    fs::remove_all(dir);
}

TEST_CASE("binary exit codes and output directory environment") {
    const auto dir = testing::scratch_dir("cli_bin");
    CHECK(run_binary("--version") == 0);
    CHECK(run_binary("fit x --model nope") == 1);
    CHECK(run_binary("adf " + (dir / "missing.csv").string()) == 2);
    const std::string env = "VOLWIN_OUT_DIR=" + (dir / "envout").string() + " ";
    const int status = std::system((env + VOLWIN_BINARY +
                                    " simulate --model garch --params omega=1e-6,alpha=0.08,beta=0.9 --law normal"
                                    " --n 200 > /dev/null 2>&1")
                                       .c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(dir / "envout/sim.returns.csv"));
    fs::remove_all(dir);
}
