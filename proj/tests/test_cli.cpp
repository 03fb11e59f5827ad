#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "radrisk/bayes.hpp"
#include "radrisk/rate_fit.hpp"

#include "util.hpp"

using json = nlohmann::json;
using namespace radrisk;

namespace {

struct CliRun {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the CLI from the repository root so the bundled configs resolve their
// relative data paths.
CliRun cli(const std::string& args) {
    const auto root = data_dir().parent_path();
    const auto out_path = scratch_path("cli_stdout.txt");
    const auto err_path = scratch_path("cli_stderr.txt");
    const std::string cmd = "cd " + root.string() + " && " + RADRISK_CLI_PATH + " " + args + " >" +
                            out_path.string() + " 2>" + err_path.string();
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::filesystem::remove(out_path);
    std::filesystem::remove(err_path);
    return r;
}

}  // namespace

TEST_CASE("version flag reports and exits cleanly") {
    const CliRun r = cli("--version");
    CHECK(r.exit_code == 0);
    CHECK_FALSE(r.out.empty());
}

TEST_CASE("point run reproduces the reference scenario") {
    const CliRun r = cli("point --config data/configs/point_reference.conf");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("measures_percent").at("lear").get<double>() ==
          doctest::Approx(5.722208921282734).epsilon(1e-12));
    CHECK(j.at("measures_percent").at("elr").get<double>() ==
          doctest::Approx(5.350686043397956).epsilon(1e-12));
    CHECK(j.at("measures_percent").at("reid").get<double>() ==
          doctest::Approx(5.515733444181206).epsilon(1e-12));
    CHECK(j.at("measures_percent").at("rads").get<double>() ==
          doctest::Approx(9.98311001455161).epsilon(1e-12));
    const double elr = j.at("measures").at("elr").get<double>();
    const double reid = j.at("measures").at("reid").get<double>();
    const double lear = j.at("measures").at("lear").get<double>();
    CHECK(elr <= reid);
    CHECK(reid <= lear);
    CHECK(j.at("command") == "point");
    CHECK(j.at("config_hash").get<std::string>().size() == 16);
    CHECK(j.contains("version"));
    CHECK(j.at("scenario").at("annual_wlm") == 2.0);
}

TEST_CASE("flag overrides win over the config file") {
    const std::string base = "point --config data/configs/point_reference.conf";
    const CliRun two = cli(base);
    const CliRun four = cli(base + " --wlm 4");
    REQUIRE(two.exit_code == 0);
    REQUIRE(four.exit_code == 0);
    const double lear2 = json::parse(two.out).at("measures_percent").at("lear").get<double>();
    const double lear4 = json::parse(four.out).at("measures_percent").at("lear").get<double>();
    CHECK(lear4 > lear2);
    CHECK(json::parse(four.out).at("scenario").at("annual_wlm") == 4.0);
}

TEST_CASE("error classes map to distinct exit codes") {
    // missing required config key
    CHECK(cli("point --table data/icrp103_mixed.csv").exit_code == 2);
    // model JSON that does not exist
    CHECK(cli("point --table data/icrp103_mixed.csv --model nope.json --wlm 2 "
              "--age-from 18 --age-to 64")
              .exit_code == 2);
    // mortality CSV that does not exist
    CHECK(cli("point --table nope.csv --model data/models/simple_linear.json --wlm 2 "
              "--age-from 18 --age-to 64")
              .exit_code == 3);
    // unknown uncertainty method
    CHECK(cli("uncertainty --config data/configs/ana_simple_linear.conf --method bogus")
              .exit_code == 2);
    // missing seed
    const TempFile no_seed("noseed.conf",
                           "table = " + (data_dir() / "icrp103_mixed.csv").string() +
                               "\nmodel = " + (data_dir() / "models/simple_linear.json").string() +
                               "\nmethod = ana\nwlm = 2\nage_from = 18\nage_to = 64\n");
    CHECK(cli("uncertainty --config " + no_seed.path.string()).exit_code == 2);
    // malformed config value
    const TempFile bad_value("badval.conf",
                             "table = " + (data_dir() / "icrp103_mixed.csv").string() +
                                 "\nmodel = " + (data_dir() / "models/simple_linear.json").string() +
                                 "\nwlm = abc\nage_from = 18\nage_to = 64\n");
    CHECK(cli("point --config " + bad_value.path.string()).exit_code == 2);
    // too few draws to form an interval
    CHECK(cli("uncertainty --config data/configs/ana_simple_linear.conf --samples 10")
              .exit_code == 4);
    // unknown flag is a CLI parse error, not one of the domain classes
    const int parse_code = cli("point --no-such-flag").exit_code;
    CHECK(parse_code != 0);
    CHECK(parse_code != 2);
    CHECK(parse_code != 3);
    CHECK(parse_code != 4);
}

TEST_CASE("parameter uncertainty output is byte-identical across worker counts") {
    const auto out1 = scratch_path("ana_w1.json");
    const auto out4 = scratch_path("ana_w4.json");
    const std::string base =
        "uncertainty --config data/configs/ana_simple_linear.conf --samples 2000 ";
    const CliRun r1 = cli(base + "--workers 1 --out " + out1.string());
    const CliRun r4 = cli(base + "--workers 4 --out " + out4.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r4.exit_code == 0);
    CHECK(slurp(out1) == slurp(out4));
    CHECK(r1.out == r4.out);

    const json j = json::parse(r1.out);
    const auto& res = j.at("result");
    CHECK(res.at("lower").get<double>() < res.at("estimate").get<double>());
    CHECK(res.at("estimate").get<double>() < res.at("upper").get<double>());
    CHECK(res.at("method") == "percentile");
    CHECK(res.at("n") == 2000);
    CHECK(res.at("seed") == 1);
    CHECK(j.at("measure") == "lear");

    const CliRun other_seed = cli(base + "--workers 1 --seed 99");
    REQUIRE(other_seed.exit_code == 0);
    CHECK(other_seed.out != r1.out);

    std::filesystem::remove(out1);
    std::filesystem::remove(out4);
}

TEST_CASE("raw samples and density exports land next to the JSON") {
    const auto samples = scratch_path("samples.csv");
    const auto density = scratch_path("density.csv");
    const CliRun r = cli("uncertainty --config data/configs/ana_simple_linear.conf "
                         "--samples 500 --emit-samples " +
                         samples.string() + " --emit-density " + density.string());
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("samples_file") == samples.string());
    CHECK(j.at("density_file") == density.string());
    CHECK(j.at("kde_bandwidth").get<double>() > 0.0);

    std::ifstream s(samples);
    std::string line;
    std::getline(s, line);
    CHECK(line == "value");
    int n = 0;
    while (std::getline(s, line)) ++n;
    CHECK(n == 500);

    std::ifstream d(density);
    std::getline(d, line);
    CHECK(line == "x,density");
    int rows = 0;
    while (std::getline(d, line)) ++rows;
    CHECK(rows == 512);

    std::filesystem::remove(samples);
    std::filesystem::remove(density);
}

TEST_CASE("km subcommand reports categories, differences and the log-rank test") {
    std::ostringstream csv;
    csv << "id,exit_age,event,cumulative_wlm\n";
    for (int i = 0; i < 40; ++i)
        csv << "u" << i << "," << (i % 4 == 0 ? "72,1,0" : "90,0,0") << "\n";
    for (int i = 0; i < 40; ++i)
        csv << "e" << i << "," << (i % 2 == 0 ? "66,1,300" : "88,0,300") << "\n";
    const TempFile subjects("subjects.csv", csv.str());
    const auto curves = scratch_path("curves.csv");

    const CliRun r = cli("km --subjects " + subjects.path.string() +
                         " --edges 100,500 --cut-age 85 --curves-out " + curves.string());
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("cut_age") == 85.0);
    REQUIRE(j.at("categories").size() == 2);
    CHECK(j.at("categories")[0].at("category") == "0");
    CHECK(j.at("categories")[1].at("category") == "[100,500)");
    CHECK(j.at("empty_strata").size() == 2);
    REQUIRE(j.at("naive_lear").size() == 1);
    const auto& diff = j.at("naive_lear")[0];
    CHECK(diff.at("estimate_percent").get<double>() > 0.0);
    CHECK(diff.at("logrank_p").get<double>() >= 0.0);
    CHECK(diff.at("logrank_p").get<double>() <= 1.0);
    CHECK(j.at("command") == "km");

    std::ifstream c(curves);
    std::string header;
    std::getline(c, header);
    CHECK(header == "category,t,n_at_risk,d,S,var,lo,hi");
    std::filesystem::remove(curves);
}

TEST_CASE("km warns and skips differences when everyone is unexposed") {
    std::ostringstream csv;
    csv << "id,exit_age,event,cumulative_wlm\n";
    for (int i = 0; i < 10; ++i) csv << "u" << i << ",80," << (i % 2) << ",0\n";
    const TempFile subjects("all_zero.csv", csv.str());
    const CliRun r = cli("km --subjects " + subjects.path.string() + " --edges 100");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK_FALSE(j.contains("naive_lear"));
    CHECK(r.err.find("skipped") != std::string::npos);
}

TEST_CASE("fitted mortality rates round-trip through the emitted JSON") {
    const auto out = scratch_path("lung_fits.json");
    const CliRun r = cli("fit-mortality --data data/who_extract_lung.csv --family gamma "
                         "--centered --table data/icrp103_mixed.csv --column r0 --out " +
                         out.string());
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("groups").size() == 15);
    CHECK(j.at("observations") == 2250);
    CHECK(j.at("pooled_rate").get<double>() > 0.0);
    CHECK(j.at("command") == "fit-mortality");

    const RateFits fits = load_rate_fits(out);
    CHECK(fits.groups.size() == 15);
    CHECK(fits.groups.front().age_start == 20);
    CHECK(fits.groups.back().age_end == 94);
    // centered fit keeps the reference-table means
    CHECK(fits.groups.front().mean() == doctest::Approx(1.4e-6).epsilon(1e-9));
    std::filesystem::remove(out);
}

TEST_CASE("synthetic cohort generation is seed-deterministic") {
    const TempFile design("design.conf",
                          "model = " + (data_dir() / "models/simple_linear.json").string() +
                              "\nstrata = 4\ncells_per_stratum = 6\n");
    const auto c1 = scratch_path("cohort1.csv");
    const auto c2 = scratch_path("cohort2.csv");
    const auto c3 = scratch_path("cohort3.csv");
    const std::string base = "synth-cohort --config " + design.path.string() + " ";
    const CliRun r1 = cli(base + "--seed 11 --cohort-out " + c1.string());
    const CliRun r2 = cli(base + "--seed 11 --cohort-out " + c2.string());
    const CliRun r3 = cli(base + "--seed 12 --cohort-out " + c3.string());
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r2.exit_code == 0);
    REQUIRE(r3.exit_code == 0);
    CHECK(slurp(c1) == slurp(c2));
    CHECK(slurp(c1) != slurp(c3));

    const json j = json::parse(r1.out);
    CHECK(j.at("cells") == 24);
    CHECK(j.at("strata") == 4);
    CHECK(j.at("total_cases").get<double>() >= 0.0);

    const GroupedCohort cohort = load_cohort(c1);
    CHECK(cohort.cells.size() == 24);
    CHECK(cohort.n_strata == 4);
    for (const auto& p : {c1, c2, c3}) std::filesystem::remove(p);
}
