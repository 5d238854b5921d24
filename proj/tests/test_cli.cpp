#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <catch_amalgamated.hpp>
#include <nlohmann/json.hpp>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with `args`; stderr is discarded.
Run cli(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" RADIX_APPROX_CLI "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string tmp(const std::string& name) { return std::string(RADIX_APPROX_TEST_TMP) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

using nlohmann::ordered_json;

TEST_CASE("search report in JSON") {
    const Run r = cli("search --base 3 --limit 1000000 --gamma 355/113 --method pigeonhole --format json");
    REQUIRE(r.code == 0);
    const auto j = ordered_json::parse(r.out);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"tool", "version", "subcommand", "config", "input", "result", "wall_time_s"});
    CHECK(j["subcommand"] == "search");
    CHECK(j["result"]["witness"] == "265720");
    CHECK(j["result"]["distance"]["exact"] == "8/113");
    CHECK(j["result"]["guarantee"] == "1/13");
    CHECK(j["result"]["passed"] == true);
    CHECK(j["wall_time_s"].is_number());
    CHECK(j["config"]["precision_bits"] == 128);
}

TEST_CASE("reproducible output is byte-identical") {
    const std::string args = "--reproducible search --base 2 --limit 5000 --gamma 12345/999983";
    const Run a = cli(args), b = cli(args + " --threads 3");
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    // the thread count is part of the config snapshot; everything else must match
    auto ja = ordered_json::parse(a.out), jb = ordered_json::parse(b.out);
    CHECK(ja["result"] == jb["result"]);
    CHECK(ja["wall_time_s"].is_null());
    CHECK(cli(args).out == a.out);
    CHECK(ja["result"]["witness"] == "81");
    CHECK(ja["result"]["distance"]["exact"] == "38/999983");
}

TEST_CASE("CSV output") {
    const Run r = cli("search --base 3 --limit 1000 --gamma 1/7 --format csv");
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("subcommand,b,N,witness,distance_num,distance_den,bound,passed\r\n", 0) == 0);
    CHECK(r.out.find("search,3,1000,28,0,1,1/6,true\r\n") != std::string::npos);
}

TEST_CASE("human output") {
    const Run r = cli("constants --base 2 --format human");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("result.argmax_m: 6") != std::string::npos);
    CHECK(r.out.find("result.first_informative_t: 864") != std::string::npos);
}

TEST_CASE("other subcommands") {
    const auto d = ordered_json::parse(cli("diffset --base 3 --limit 13").out);
    CHECK(d["result"]["M1_plus"]["value"] == 4);
    CHECK(d["result"]["M2_plus"]["witness"] == ordered_json::array({1, 4, 13}));

    const auto e = ordered_json::parse(cli("expsum --base 2 --r 1 --k 1 --gamma 2/5 --m 2").out);
    CHECK(e["result"]["passed"] == true);
    CHECK(e["result"]["hypothesis_beta"] == "1/8");

    const auto q = ordered_json::parse(cli("discrepancy --points 0,1/2").out);
    CHECK(q["result"]["L"]["exact"] == "1/1");
    CHECK(q["result"]["witness"]["interval"] == "[0, 1/2]");

    const auto k = ordered_json::parse(cli("discrepancy --gamma 1/7 --count 7 --G 6").out);
    CHECK(k["result"]["passed"] == true);

    const auto a = ordered_json::parse(cli("adversary --base 2 --count 7").out);
    CHECK(a["result"]["k"] == 4);
    CHECK(a["result"]["min_distance"] == "1/15");

    const Run nm = cli("adversary --base 2 --k 3 --t 3 --e-max 3");
    CHECK(nm.code == 0);
    CHECK(ordered_json::parse(nm.out)["result"]["counterexample"] == "7");
}

TEST_CASE("exit codes") {
    // a zero tolerance makes the floating product identity fail its check
    CHECK(cli("expsum --base 2 --r 10 --k 3 --gamma 5/17 --tolerance 0").code == 2);

    std::ofstream(tmp("small_cap.cfg")) << "# tiny enumeration budget\nenumeration-cap = 10\n";
    const Run limited = cli("search --base 2 --limit 1000 --gamma 1/3", "RADIX_APPROX_CONFIG=" + tmp("small_cap.cfg"));
    CHECK(limited.code == 3);
    CHECK(ordered_json::parse(limited.out)["error"]["kind"] == "resource_limit");

    // the two best candidates cannot be separated at this input uncertainty
    const Run ind = cli("search --base 2 --limit 3 --gamma 1/2+-1/10 --method reference");
    CHECK(ind.code == 4);

    CHECK(cli("search --base 1 --limit 10 --gamma 1/3").code == 1);
    CHECK(cli("expsum --base 2 --r 1 --k 1 --gamma 1/3 --m 2").code == 1);
    CHECK(cli("search --limit 10").code >= 100);
    CHECK(cli("frobnicate").code >= 100);
}

TEST_CASE("config file and overrides") {
    std::ofstream(tmp("run.cfg")) << "precision-bits = 96\noutput-format = csv\nseed = 7\n";
    const std::string env = "RADIX_APPROX_CONFIG=" + tmp("run.cfg");
    const Run csv = cli("search --base 3 --limit 100 --gamma 1/7", env);
    CHECK(csv.out.rfind("subcommand,", 0) == 0);
    const auto j = ordered_json::parse(cli("--format json search --base 3 --limit 100 --gamma 1/7", env).out);
    CHECK(j["config"]["precision_bits"] == 96);
    CHECK(j["config"]["seed"] == 7);

    std::ofstream(tmp("bad.cfg")) << "no-such-key = 1\n";
    CHECK(cli("search --base 3 --limit 100 --gamma 1/7", "RADIX_APPROX_CONFIG=" + tmp("bad.cfg")).code == 1);
}

TEST_CASE("--out writes the report to a file") {
    const std::string path = tmp("report.json");
    std::remove(path.c_str());
    const Run r = cli("--reproducible --out \"" + path + "\" adversary --base 3 --count 7");
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const auto j = ordered_json::parse(slurp(path));
    CHECK(j["result"]["min_distance"] == "1/26");
}
