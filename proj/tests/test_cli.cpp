#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(MODECOUPLER_CLI) + " " + args + " 2>/dev/null";
    CliRun r{0, ""};
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return {-1, ""};
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / "modecoupler_cli_test";
    fs::create_directories(d);
    return d / name;
}

} // namespace

TEST(Cli, SteadyUnitParameters) {
    const CliRun r = run("steady --omega 1 --kappa 1 --epsilon 1 --gamma-a 1 --gamma-b 1 --gamma 0");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("numeric,balanced_subcritical,9,0,nan,0.666666666667,0.111111111111,0.111111111111,"
                         "0.111111111111"),
              std::string::npos)
        << r.out;
    EXPECT_NE(r.out.find("analytic,"), std::string::npos);
}

TEST(Cli, SteadyJson) {
    const CliRun r = run("steady --kappa 0.5 --epsilon 0.8 --gamma-a 0.2 --gamma-b 0.01 --theta 0 --format json");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"regime\": \"collective_max\""), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("\"max_abs_deviation\""), std::string::npos);
}

TEST(Cli, DomainErrorsExitOne) {
    EXPECT_EQ(run("steady --kappa 1 --epsilon 1 --gamma-a 0.01 --gamma-b 0.01 --gamma 0.02").code, 1);
    EXPECT_EQ(run("steady --kappa 1 --epsilon 1 --gamma-a 0.01").code, 1);
    EXPECT_EQ(run("steady --omega 0 --kappa 1 --epsilon 1 --gamma-a 1 --gamma-b 1").code, 1);
    EXPECT_EQ(run("steady --kappa 1 --epsilon 1 --gamma-a 1 --gamma-b 1 --gamma 1").code, 1);  // no pdd0
    EXPECT_EQ(run("figure fig9").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
}

TEST(Cli, IoErrorsExitTwo) {
    EXPECT_EQ(run("steady --kappa 1 --epsilon 1 --gamma-a 1 --gamma-b 1 --out /nonexistent/dir/x.csv").code, 2);
    EXPECT_EQ(run("steady --params /nonexistent/params.json").code, 2);
}

TEST(Cli, ParamsFileWithOverride) {
    const fs::path f = scratch("params.json");
    std::ofstream(f) << R"({"omega": 1, "kappa": 1, "epsilon": 1, "gamma_a": 1, "gamma_b": 1})";
    CliRun r = run("steady --params " + f.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.666666666667"), std::string::npos);
    r = run("steady --params " + f.string() + " --epsilon 0");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find(",0,nan,1,0,0,0,0,0,0,0"), std::string::npos) << r.out;
}

TEST(Cli, NormalizedUnits) {
    EXPECT_EQ(run("steady --normalized --omega 2 --kappa 1 --epsilon 1 --gamma-a 1 --gamma-b 1").code, 1);
    const CliRun r = run("steady --normalized --kappa 1 --epsilon 1 --gamma-a 1 --gamma-b 1");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("0.666666666667"), std::string::npos);
}

TEST(Cli, FigureFiveDataset) {
    const fs::path f = scratch("fig5.csv");
    ASSERT_EQ(run("figure fig5 --resolution 16 --out " + f.string()).code, 0);
    const std::string csv = slurp(f);
    const std::string head = csv.substr(0, csv.find('\n'));
    EXPECT_NE(head.find("axis_epsilon"), std::string::npos);
    EXPECT_NE(head.find("axis_pdd0"), std::string::npos);
    EXPECT_NE(head.find(",c,"), std::string::npos);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 257);
    EXPECT_TRUE(fs::exists(f.string() + ".json"));
}

TEST(Cli, ValidatePasses) {
    const CliRun r = run("validate");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("failed 0"), std::string::npos);
}

TEST(Cli, EvolveAndOracle) {
    CliRun r = run("evolve --kappa 0.5 --epsilon 0.6 --gamma-a 0.3 --gamma-b 0.2 --t-end 1 --sample-every 10");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "time,p11,p22,p33,p44,re_rho23,im_rho23,re_rho14,im_rho14");
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 12);
    r = run("evolve --kappa 0.5 --epsilon 0.6 --gamma-a 0.3 --gamma-b 0.2 --t-end 1 --oracle --n-max 2");
    EXPECT_EQ(r.code, 0);
    r = run("evolve --kappa 0.5 --epsilon 0.6 --gamma-a 0.3 --gamma-b 0.2 --t-end 1 --dt 1");
    EXPECT_EQ(r.code, 1);
}

TEST(Cli, ByteIdenticalReruns) {
    for (const std::string& args :
         {std::string("sweep --kappa 0.5 --epsilon 0.8 --gamma-a 0.2 --gamma-b 0.01 --axis kappa:0:2:12 "
                      "--axis epsilon:0:2:12"),
          std::string("evolve --kappa 0.5 --epsilon 0.8 --gamma-a 0.2 --gamma-b 0.01 --t-end 3"),
          std::string("validate --seed 7 --format json"), std::string("figure fig3b --resolution 20")}) {
        const fs::path a = scratch("a.out"), b = scratch("b.out");
        const int ca = run(args + " --out " + a.string()).code;
        const int cb = run(args + " --out " + b.string()).code;
        ASSERT_EQ(ca, 0) << args;
        ASSERT_EQ(cb, 0) << args;
        EXPECT_EQ(slurp(a), slurp(b)) << args;
        EXPECT_FALSE(slurp(a).empty());
    }
}

TEST(Cli, SweepSingularPointsDefaultToVacuumBranch) {
    const CliRun r = run("sweep --kappa 0.5 --epsilon 0.8 --gamma-a 0.2 --gamma-b 0.2 --axis gamma:0:0.2:3");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("ok,balanced_collective_max,1"), std::string::npos) << r.out;
}
