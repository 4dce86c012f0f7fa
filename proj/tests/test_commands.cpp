#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bnvar/commands.hpp"
#include "bnvar/graph.hpp"
#include "bnvar/manifest.hpp"
#include "bnvar/moments.hpp"

using namespace bnvar;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("bnvar_test_" + std::to_string(::getpid()) + "_" +
                                            std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

} // namespace

TEST_CASE("moments command classifies archives") {
    TempDir dir;
    GlobalOptions opt;

    SUBCASE("identical skeletons are minimum entropy") {
        write_file(dir.file("a.txt"), "nodes=3\n0-1\n0-1\n0-1\n");
        std::ostringstream status;
        cmd_moments(dir.file("a.txt"), dir.file("m.csv"), opt, status);
        CHECK(status.str() == "minimum\n");
        CHECK(fs::exists(dir.file("m.csv")));
        CHECK(fs::exists(dir.file("m.csv.manifest.json")));
    }
    SUBCASE("the full enumeration of three-node graphs is maximum entropy") {
        std::ostringstream archive;
        archive << "nodes=3\n";
        EdgeIndexer idx(3);
        for (int g = 0; g < 8; ++g) {
            bool first = true;
            for (int e = 0; e < 3; ++e) {
                if (!(g & (1 << e))) continue;
                auto [a, b] = idx.pair(e);
                archive << (first ? "" : ",") << a << '-' << b;
                first = false;
            }
            if (first) archive << '-';
            archive << '\n';
        }
        write_file(dir.file("u.txt"), archive.str());
        std::ostringstream status;
        cmd_moments(dir.file("u.txt"), dir.file("m.csv"), opt, status);
        CHECK(status.str() == "maximum\n");
    }
    SUBCASE("mixed archives are intermediate") {
        write_file(dir.file("x.txt"), "nodes=3\n0-1\n0-1,1-2\n-\n0-1\n");
        std::ostringstream status;
        cmd_moments(dir.file("x.txt"), dir.file("m.csv"), opt, status);
        CHECK(status.str() == "intermediate\n");
    }
    SUBCASE("parse errors carry a location") {
        write_file(dir.file("bad.txt"), "nodes=3\n5-7\n");
        std::ostringstream status;
        try {
            cmd_moments(dir.file("bad.txt"), dir.file("m.csv"), opt, status);
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    }
}

TEST_CASE("describe command consumes both input formats") {
    TempDir dir;
    GlobalOptions opt;
    write_file(dir.file("sigma.csv"),
               "i,j,sigma_ij\n0,0,0.24\n0,1,0.04\n1,1,0.24\n");
    std::ostringstream status;
    cmd_describe(dir.file("sigma.csv"), false, dir.file("report.txt"), opt, status);
    const std::string report = slurp(dir.file("report.txt"));
    CHECK(report.find("var_t=0.47999999999999998") != std::string::npos);
    CHECK(report.find("var_g=0.056") != std::string::npos);

    // moments input goes through the plug-in covariance
    write_file(dir.file("mom.csv"), "i,j,p_ij\n0,0,0.75\n0,1,0.5\n1,1,0.75\n");
    std::ostringstream status2;
    cmd_describe(dir.file("mom.csv"), false, dir.file("report2.txt"), opt, status2);
    CHECK(slurp(dir.file("report2.txt")).find("var_t=0.375") != std::string::npos);

    // a zero matrix reports complements of one
    write_file(dir.file("zero.csv"), "i,j,sigma_ij\n0,0,0\n0,1,0\n1,1,0\n");
    std::ostringstream status3;
    cmd_describe(dir.file("zero.csv"), false, dir.file("report3.txt"), opt, status3);
    CHECK(slurp(dir.file("report3.txt")).find("cvar_t=1\n") != std::string::npos);
}

TEST_CASE("test command emits the documented csv") {
    TempDir dir;
    GlobalOptions opt;
    write_file(dir.file("sigma.csv"),
               "i,j,sigma_ij\n0,0,0.1056\n0,1,-0.0336\n1,1,0.2016\n");
    std::ostringstream status;
    cmd_test(dir.file("sigma.csv"), 100, "nagao", dir.file("t.csv"), opt, status);
    const std::string csv = slurp(dir.file("t.csv"));
    CHECK(csv.find("kind,m,k,statistic,p_raw,p_corrected,bounds_flag") == 0);
    CHECK(csv.find("nagao,100,2,") != std::string::npos);
    CHECK(csv.find("0.00014") != std::string::npos);  // reference value 0.000142

    CHECK_THROWS_AS(
        cmd_test(dir.file("sigma.csv"), 100, "bogus", dir.file("t.csv"), opt, status),
        std::invalid_argument);
}

TEST_CASE("mc command works from archives and matrices") {
    TempDir dir;
    GlobalOptions opt;
    opt.seed = 5;

    write_file(dir.file("arch.txt"), "nodes=3\n0-1\n0-1,1-2\n-\n0-1\n0-2\n1-2\n0-1,0-2\n-\n");
    std::ostringstream status;
    cmd_mc(dir.file("arch.txt"), 0, McStat::ComplementN, 2000, CovDivisor::M,
           dir.file("mc.txt"), opt, status);
    CHECK(status.str().rfind("p_hat=", 0) == 0);
    CHECK(status.str().find(" se=") != std::string::npos);
    CHECK(slurp(dir.file("mc.txt")) == status.str());

    write_file(dir.file("sigma.csv"), "i,j,sigma_ij\n0,0,0.24\n0,1,0.04\n1,1,0.24\n");
    std::ostringstream status2;
    cmd_mc(dir.file("sigma.csv"), 10, McStat::ComplementT, 5000, CovDivisor::M, "", opt, status2);
    CHECK(status2.str().rfind("p_hat=0.5", 0) == 0);  // near the reference 0.5697

    CHECK_THROWS_AS(cmd_mc(dir.file("sigma.csv"), 0, McStat::ComplementT, 100, CovDivisor::M,
                           "", opt, status2),
                    std::invalid_argument);
}

TEST_CASE("sample and bootstrap commands round trip through files") {
    TempDir dir;
    GlobalOptions opt;
    opt.seed = 9;
    const std::string bn = std::string(BNVAR_DATA_DIR) + "/net8.json";

    std::ostringstream status;
    cmd_sample(bn, 300, dir.file("data.csv"), opt, status);
    CHECK(status.str().find("sampled 300 rows") != std::string::npos);

    std::ostringstream status2;
    cmd_bootstrap(dir.file("data.csv"), "hc", 10, dir.file("skel.txt"), opt, status2);
    SkeletonArchive archive = load_skeleton_archive(dir.file("skel.txt"));
    CHECK(archive.node_count == 8);
    CHECK(archive.samples.size() == 10);
    CHECK(archive.labels.size() == 8);
}

TEST_CASE("reproduce-tables writes three csv files deterministically") {
    TempDir dir;
    GlobalOptions opt;
    opt.seed = 1;
    std::ostringstream status;
    cmd_reproduce_tables(dir.file("t1"), 20000, opt, status);
    cmd_reproduce_tables(dir.file("t2"), 20000, opt, status);
    for (const char* name : {"table1.csv", "table2.csv", "table3.csv"}) {
        const std::string a = slurp(dir.file("t1") + "/" + name);
        const std::string b = slurp(dir.file("t2") + "/" + name);
        CHECK(a == b);
        CHECK(!a.empty());
    }
    opt.threads = 8;
    std::ostringstream status3;
    cmd_reproduce_tables(dir.file("t3"), 20000, opt, status3);
    CHECK(slurp(dir.file("t1") + "/table3.csv") == slurp(dir.file("t3") + "/table3.csv"));

    CHECK(slurp(dir.file("t1") + "/table1.csv")
              .find("matrix,var_t,var_g,var_n,nvar_t,nvar_g,nvar_n") == 0);
}

TEST_CASE("experiment command determinism and shape") {
    TempDir dir;
    GlobalOptions opt;
    opt.seed = 77;
    const std::string bn = std::string(BNVAR_DATA_DIR) + "/net8.json";

    ExperimentConfig cfg;
    cfg.bn_path = bn;
    cfg.sizes = {100, 400};
    cfg.replicates = 2;
    cfg.learners = {"hc"};
    cfg.bootstrap_m = 8;
    cfg.mc_replicates = 500;

    std::ostringstream status;
    cmd_experiment(cfg, dir.file("e1.csv"), opt, status);
    opt.threads = 8;
    cmd_experiment(cfg, dir.file("e2.csv"), opt, status);
    CHECK(slurp(dir.file("e1.csv")) == slurp(dir.file("e2.csv")));

    const std::string csv = slurp(dir.file("e1.csv"));
    CHECK(csv.find("size,replicate,learner,p_value") == 0);
    CHECK(csv.find("100,0,hc-tabu10,") != std::string::npos);
    CHECK(csv.find("400,1,hc-tabu10,") != std::string::npos);

    // zero replicates leave only the header
    cfg.replicates = 0;
    std::ostringstream status2;
    opt.threads = 1;
    cmd_experiment(cfg, dir.file("e0.csv"), opt, status2);
    CHECK(slurp(dir.file("e0.csv")) == "size,replicate,learner,p_value\n");
}

TEST_CASE("manifest provenance") {
    TempDir dir;
    write_file(dir.file("in.txt"), "nodes=2\n0-1\n");
    GlobalOptions opt;
    opt.seed = 123;
    std::ostringstream status;
    cmd_moments(dir.file("in.txt"), dir.file("out.csv"), opt, status);
    const std::string manifest = slurp(dir.file("out.csv.manifest.json"));
    CHECK(manifest.find("\"command\": \"moments\"") != std::string::npos);
    CHECK(manifest.find("\"seed\": 123") != std::string::npos);
    CHECK(manifest.find("\"version\": \"1.0.0\"") != std::string::npos);
    CHECK(manifest.find(fnv1a64_file(dir.file("in.txt"))) != std::string::npos);
}
