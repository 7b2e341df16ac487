#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch()
{
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("bovdyn_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Runs a shell command line; args are already quoted by the caller.
Run sh(const std::string& cmdline)
{
    const fs::path err = scratch() / "stderr.txt";
    const std::string full = cmdline + " 2>" + err.string();
    Run r;
    FILE* p = ::popen(full.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    const int status = ::pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err);
    return r;
}

Run cli(const std::string& args) { return sh(std::string("'") + BOVDYN_CLI_PATH + "' " + args); }

// The resolved command line printed on stderr, with the binary path substituted.
std::string run_line(const Run& r)
{
    const auto at = r.err.find("run: bovdyn ");
    REQUIRE(at != std::string::npos);
    const auto end = r.err.find('\n', at);
    const std::string rest = r.err.substr(at + 12, end - at - 12);
    return std::string("'") + BOVDYN_CLI_PATH + "' " + rest;
}

} // namespace

TEST_CASE("help and version exit cleanly")
{
    CHECK(cli("--help").code == 0);
    CHECK(cli("--version").code == 0);
}

TEST_CASE("usage errors exit with 2")
{
    CHECK(cli("").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("orbit").code == 2);                                   // --map is required
    CHECK(cli("orbit --map 'z^1.5'").code == 2);                     // non-integer exponent
    CHECK(cli("orbit --map 'sin(z)'").code == 2);                    // unknown function
    CHECK(cli("orbit --map 'lambda*z'").code == 2);                  // unbound parameter
    CHECK(cli("orbit --map z --param lambda").code == 2);            // malformed binding
    CHECK(cli("render --map z --window 1,2,3 --out /dev/null").code == 2);
    CHECK(cli("render --map z --res 9000 --out /dev/null").code == 2);
    CHECK(cli("check nonsense").code == 2);
    CHECK(cli("repro ex99").code == 2);
    const Run r = cli("orbit --map 'z^1.5'");
    CHECK(r.err.find("offset") != std::string::npos);
}

TEST_CASE("orbit prints CSV")
{
    const Run r = cli("orbit --map 'lambda/(exp(z)+z)' --param lambda=0.04 --seed 0.2 --prefix 3");
    CHECK(r.code == 0);
    CHECK(r.out.rfind("kind,n,re,im,note\norbit,0,0.2,0,\n", 0) == 0);
    CHECK(r.out.find("cycle,0,0.0372054") != std::string::npos);
    CHECK(r.out.find("converged period 1") != std::string::npos);

    const Run pole = cli("orbit --map 'z/0' --seed 1");
    CHECK(pole.code == 0);
    CHECK(pole.out.find("pole index 0") != std::string::npos);
}

TEST_CASE("complex parameters in re,im form")
{
    const Run a = cli("orbit --map 'lambda*z' --param lambda=0.5,0.5 --seed 1 --prefix 2");
    const Run b = cli("orbit --map 'lambda*z' --param 'lambda=0.5+0.5i' --seed 1 --prefix 2");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("orbit,1,0.5,0.5,") != std::string::npos);
}

TEST_CASE("analyze reports fixed points as JSON")
{
    const Run r = cli("analyze --map '1/(exp(z)+z)' --interval -2,1");
    CHECK(r.code == 0);
    CHECK(r.out.find("\"fixed_points\"") != std::string::npos);
    CHECK(r.out.find("0.478172") != std::string::npos);
    CHECK(r.out.find("-1.167585") != std::string::npos);
}

TEST_CASE("verify exit codes follow the verdict")
{
    CHECK(cli("verify --map 'exp(z)*(1-z)/(exp(z)+z)^2' --interval 1.5,10 --expect negative").code == 0);
    CHECK(cli("verify --map 'exp(z)*(1-z)/(exp(z)+z)^2' --interval 1.5,10 --expect positive").code == 1);
    CHECK(cli("verify --map z --interval -1,1 --max-depth 5").code == 1);
    const Run c = cli("verify --map '90*z^8+71.28*z^7+2*exp(z)' --interval -0.792,-0.72 --order 8");
    CHECK(c.code == 0);
    CHECK(c.out.find("\"cascade_trace\"") != std::string::npos);
    CHECK(cli("verify --map '1/z' --interval -1,1 --max-depth 3").code == 3);  // division cannot be isolated
}

TEST_CASE("check exit codes and replay")
{
    const fs::path bundle = scratch() / "disk.bundle.json";
    CHECK(cli("check disk-self-map --lambda 0.04 --out '" + bundle.string() + "'").code == 0);
    CHECK(cli("check disk-self-map --lambda 0.3").code == 1);
    CHECK(cli("check critical-values-in-disk --lambda 2").code == 1);
    CHECK(cli("check bov-attracting-recipe --g z --b 0").code == 1);
    CHECK(cli("check f3-basin-chain").code == 0);
    CHECK(cli("check f3-basin-chain --map '0.1/(z^9+exp(z))-0.9'").code == 1);
    const Run rep = cli("check --replay '" + bundle.string() + "'");
    CHECK(rep.code == 0);
    CHECK(rep.out.find("reproduced") != std::string::npos);
    CHECK(cli("check --replay /nonexistent.bundle.json").code == 3);
}

TEST_CASE("render writes PPM and stats; the run line reproduces it")
{
    const fs::path ppm = scratch() / "r.ppm", csv = scratch() / "r.csv";
    const Run r = cli("render --map '0.1/(z^9+exp(z))-0.99' --window -0.9,0,3,3 --res 24 --out '" + ppm.string() +
                      "' --stats '" + csv.string() + "'");
    CHECK(r.code == 0);
    const std::string first = slurp(ppm);
    CHECK(first.rfind("P6\n24 24\n255\n", 0) == 0);
    CHECK(first.size() == 13 + 24 * 24 * 3);
    CHECK(slurp(csv).rfind("code,fraction\n", 0) == 0);
    CHECK(r.out == slurp(csv));

    fs::remove(ppm);
    const Run again = sh(run_line(r));
    CHECK(again.code == 0);
    CHECK(slurp(ppm) == first);
    CHECK(again.out == r.out);
}

TEST_CASE("every subcommand's run line reproduces its output")
{
    const std::string cases[] = {
        "analyze --map 'lambda/(exp(z)+z)' --param lambda=4 --interval 0,1 --two-cycle",
        "orbit --map 'lambda/(exp(z)+z)' --param lambda=4 --seed 0.5 --prefix 4",
        "verify --map 'exp(z)*(1-z)/(exp(z)+z)^2' --interval 0,0.99",
        "check critical-values-in-disk",
        "probe --map 'lambda/(exp(z)+z)' --param lambda=4 --window 0,0,6,6 --res 16 --rungs 2",
    };
    for (const std::string& c : cases) {
        INFO(c);
        const Run a = cli(c);
        CHECK(a.code == 0);
        const Run b = sh(run_line(a));
        CHECK(b.code == a.code);
        CHECK(b.out == a.out);
        CHECK(b.err == a.err);
    }
}

TEST_CASE("repro without rendering")
{
    const fs::path bundle = scratch() / "par.bundle.json";
    const Run r = cli("repro ex44-parabolic --no-render --out '" + bundle.string() + "'");
    CHECK(r.code == 0);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(slurp(bundle).find("\"parabolic\"") != std::string::npos);
}
