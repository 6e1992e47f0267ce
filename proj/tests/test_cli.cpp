#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "primepairs/arith.hpp"
#include "primepairs/cli.hpp"
#include "primepairs/common.hpp"
#include "primepairs/sieve.hpp"
#include "primepairs/sums.hpp"

using namespace primepairs;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::dispatch(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("primepairs_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

const PrimeTable& table() {
    static const PrimeTable t = build_prime_table(1'000'002);
    return t;
}

}  // namespace

TEST_CASE("sum and eval print the library values") {
    auto r = run({"sum", "pair-weighted", "--x", "10", "--m", "1", "--k", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == format_g12(pair_weighted_sum(table(), 10, LinearForm::make(1, 2)).value) + "\n");
    CHECK(std::stod(r.out) == doctest::Approx(1.429180).epsilon(1e-6));

    r = run({"sum", "pair-weighted", "--x", "1e5", "--k", "-2"});
    CHECK(r.out == format_g12(pair_weighted_sum(table(), 100000, LinearForm::make(1, -2)).value) + "\n");

    r = run({"sum", "pair-count", "--x", "1e6"});
    CHECK(r.out == "8169\n");
    r = run({"sum", "pi", "--x", "1e6"});
    CHECK(r.out == "78498\n");

    r = run({"sum", "inversion", "--x", "1000", "--k", "4", "--restricted"});
    CHECK(r.out == format_g12(inversion_decomposition(table(), 1000, LinearForm::make(1, 4), {.restricted = true}).value) +
                       "\n");

    r = run({"sum", "mertens-ap", "--x", "1e4", "--q", "4", "--a", "3", "--weight", "log"});
    CHECK(r.out == format_g12(mertens_ap(table(), 10000, APClass::make(3, 4), PrimeWeight::LogOverP).value) + "\n");

    r = run({"sum", "twisted-mobius", "--x", "1e4", "--s", "2", "--filter", "coprime:6"});
    CHECK(r.out == format_g12(twisted_mobius_sum(10000, 2, 1, MobiusFilter::coprime_to(6)).value) + "\n");

    r = run({"sum", "lambda-pair", "--x", "100", "--k", "3"});
    CHECK(r.code == 0);
    CHECK(r.err.find("warning:") == 0);

    r = run({"eval", "--n", "30"});
    CHECK(r.out == "mu=-1 lambda=0 phi=8\n");
    r = run({"eval", "--n", "49"});
    CHECK(r.out == "mu=0 lambda=" + format_g12(evaluate(49).lambda) + " phi=42\n");

    r = run({"sieve", "--limit", "1e6", "--x", "1e3"});
    CHECK(r.out.find("primes=78498") != std::string::npos);
    CHECK(r.out.find("pi(1000)=168") != std::string::npos);
}

TEST_CASE("usage errors exit 2 and name the flag") {
    auto r = run({"sum", "pair-weighted", "--x", "ten"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--x") != std::string::npos);
    r = run({"sum", "pair-weighted", "--x", "10", "--m", "2", "--k", "4"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--m/--k") != std::string::npos);
    r = run({"sum", "mertens-ap", "--x", "10", "--q", "4", "--a", "2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--q/--a") != std::string::npos);
    r = run({"sum", "frobnicate", "--x", "10"});
    CHECK(r.code == 2);
    r = run({"scan", "psi", "--grid", "10:5:2"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--grid") != std::string::npos);
    r = run({"audit", "--format", "xml"});
    CHECK(r.code == 2);
    CHECK(r.err.find("--format") != std::string::npos);
    r = run({"audit", "--only", "C-99"});
    CHECK(r.code == 2);
    r = run({"--workers", "0", "eval", "--n", "3"});
    CHECK(r.code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"eval"}).code == 2);
    CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("scan output matches the trace and round-trips through fit") {
    const auto csv = scratch() / "twin.csv";
    auto r = run({"scan", "pair-weighted", "--grid", "1e3:1e6:3.16227766", "--out", csv.string()});
    REQUIRE(r.code == 0);
    const auto grid = parse_grid("1e3:1e6:3.16227766");
    std::ostringstream expect;
    write_trace_csv(expect, pair_weighted_trace(table(), grid, LinearForm::make(1, 2)));
    CHECK(slurp(csv) == expect.str());

    // re-serializing the parsed trace gives the same bytes
    std::ifstream in(csv);
    const auto back = read_trace_csv(in);
    std::ostringstream again;
    write_trace_csv(again, back);
    CHECK(again.str() == expect.str());

    const auto out = scratch() / "twin_fit.txt";
    r = run({"fit", "--trace", csv.string(), "--model", "loglog", "--out", out.string(), "--plot"});
    REQUIRE(r.code == 0);
    const auto f = fit(back, FitModel::LogLog);
    CHECK(slurp(out).find("c=" + format_g12(f.c) + " ") != std::string::npos);
    const auto plot = scratch() / "twin_fit.plot";
    REQUIRE(fs::exists(plot));
    const auto script = slurp(plot);
    CHECK(script.find("set logscale x") != std::string::npos);
    CHECK(script.find("$data") != std::string::npos);

    // scan of an op without a trace form evaluates each checkpoint
    r = run({"scan", "psi", "--grid", "10:1000:10"});
    CHECK(r.out == "x,value,main,residual\n10," + format_g12(psi(table(), 10)) + ",,\n100," +
                       format_g12(psi(table(), 100)) + ",,\n1000," + format_g12(psi(table(), 1000)) + ",,\n");
}

TEST_CASE("plot scripts") {
    const auto empty = scratch() / "empty.csv";
    std::ofstream(empty) << "x,value,main,residual\n";
    CHECK_THROWS_AS(cli::emit_plot_script(empty.string(), FitModel::LogLog, (scratch() / "e.plot").string()),
                    UsageError);
    const auto counts = scratch() / "count.csv";
    REQUIRE(run({"scan", "pair-count", "--grid", "1e3:1e6:3.16227766", "--out", counts.string()}).code == 0);
    const auto script = scratch() / "count.plot";
    const auto r = cli::emit_plot_script(counts.string(), FitModel::XOverLogSquared, script.string());
    CHECK(r.c > 1);
    const auto text = slurp(script);
    CHECK(text.find("x/log2x") != std::string::npos);
    CHECK(run({"fit", "--trace", empty.string()}).code == 2);
}

TEST_CASE("audit output is independent of the worker count") {
    const auto a = scratch() / "a.json", b = scratch() / "b.json";
    const std::vector<std::string> common = {"audit", "--limit", "1e5", "--grid-lo", "1e3", "--q-max", "20",
                                             "--forms", "1,2 1,4", "--set", "C-06.q_max=50",
                                             "--set", "C-04.x_max=1000"};
    auto args = common;
    args.insert(args.end(), {"--workers", "1", "--out", a.string()});
    auto r = run(args);
    CHECK(r.code == 0);
    args = common;
    args.insert(args.end(), {"--workers", "3", "--out", b.string()});
    CHECK(run(args).code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("\"counterexample\"") != std::string::npos);

    r = run({"audit", "--limit", "1e5", "--grid-lo", "1e3", "--only", "C-05L", "--format", "markdown"});
    CHECK(r.code == 0);
    CHECK(r.out.find("**Witness:** d = 2;") != std::string::npos);
}
