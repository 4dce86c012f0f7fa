#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bnvar/commands.hpp"
#include "bnvar/manifest.hpp"

using namespace bnvar;

int main(int argc, char** argv) {
    CLI::App app{"Network structure variability toolkit"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    GlobalOptions opt;
    app.add_option("--seed", opt.seed, "random seed")->capture_default_str();
    app.add_option("--threads", opt.threads, "worker threads")->capture_default_str();

    // moments
    std::string moments_archive, moments_out = "moments.csv";
    auto* moments = app.add_subcommand("moments", "edge moments and entropy class of an archive");
    moments->add_option("archive", moments_archive, "skeleton archive")->required();
    moments->add_option("--out", moments_out, "moments csv")->capture_default_str();

    // describe
    std::string describe_in, describe_out = "report.txt";
    bool describe_reduce = false, describe_csv = false;
    auto* describe = app.add_subcommand("describe", "dispersion statistics of a covariance matrix");
    describe->add_option("input", describe_in, "covariance csv or moments csv")->required();
    describe->add_option("--out", describe_out, "report file")->capture_default_str();
    describe->add_flag("--reduce", describe_reduce, "use a full-rank reduction for the determinant");
    describe->add_flag("--csv", describe_csv, "write a csv row instead of key=value lines");

    // test
    std::string test_in, test_out = "tests.csv", test_which = "all";
    long test_m = 0;
    auto* test = app.add_subcommand("test", "asymptotic tests against the independence matrix");
    test->add_option("input", test_in, "covariance csv or moments csv")->required();
    test->add_option("--m", test_m, "sample count behind the estimate")->required();
    test->add_option("--which", test_which, "trace|det-gauss|det-gamma|nagao|all")
        ->capture_default_str();
    test->add_option("--out", test_out, "results csv")->capture_default_str();

    // mc
    std::string mc_in, mc_out, mc_stat = "n", mc_divisor = "m";
    long mc_m = 0;
    long long mc_replicates = 1000000;
    auto* mc = app.add_subcommand("mc", "Monte Carlo significance against the independence case");
    mc->add_option("input", mc_in, "covariance csv, moments csv or skeleton archive")->required();
    mc->add_option("--m", mc_m, "rows per replicate (defaults to archive sample count)");
    mc->add_option("--stat", mc_stat, "t|g|n|q")->capture_default_str();
    mc->add_option("--replicates", mc_replicates, "Monte Carlo replicates")->capture_default_str();
    mc->add_option("--divisor", mc_divisor, "covariance divisor: m or m-1")->capture_default_str();
    mc->add_option("--out", mc_out, "optional result file");

    // sample
    std::string sample_bn, sample_out = "sample.csv";
    long sample_n = 0;
    auto* sample = app.add_subcommand("sample", "forward-sample a dataset from a network");
    sample->add_option("network", sample_bn, "bayesnet json")->required();
    sample->add_option("--n", sample_n, "rows")->required();
    sample->add_option("--out", sample_out, "dataset csv")->capture_default_str();

    // bootstrap
    std::string boot_data, boot_out = "skeletons.txt", boot_learner = "gs";
    int boot_m = 50;
    auto* boot = app.add_subcommand("bootstrap", "bootstrap skeletons from a dataset");
    boot->add_option("data", boot_data, "dataset csv")->required();
    boot->add_option("--learner", boot_learner, "gs[-g2|-x2-<alpha>] or hc[-tabu<L>]")
        ->capture_default_str();
    boot->add_option("--m", boot_m, "bootstrap replicates")->capture_default_str();
    boot->add_option("--out", boot_out, "skeleton archive")->capture_default_str();

    // experiment
    ExperimentConfig exp_cfg;
    std::string exp_out = "experiment.csv", exp_stat = "n", exp_divisor = "m";
    auto* exp = app.add_subcommand("experiment", "significance curves over sample sizes");
    exp->add_option("network", exp_cfg.bn_path, "bayesnet json")->required();
    exp->add_option("--sizes", exp_cfg.sizes, "dataset sizes")->required();
    exp->add_option("--replicates", exp_cfg.replicates, "datasets per size")->capture_default_str();
    exp->add_option("--learners", exp_cfg.learners, "learner tokens")->required();
    exp->add_option("--bootstrap-m", exp_cfg.bootstrap_m, "skeletons per dataset")
        ->capture_default_str();
    exp->add_option("--mc-replicates", exp_cfg.mc_replicates, "Monte Carlo replicates")
        ->capture_default_str();
    exp->add_option("--stat", exp_stat, "t|g|n|q")->capture_default_str();
    exp->add_option("--divisor", exp_divisor, "m or m-1")->capture_default_str();
    exp->add_option("--out", exp_out, "output csv")->capture_default_str();

    // reproduce-tables
    std::string tables_dir = "tables";
    long long tables_replicates = 1000000;
    auto* tables = app.add_subcommand("reproduce-tables", "write the reference example tables");
    tables->add_option("--out-dir", tables_dir, "output directory")->capture_default_str();
    tables->add_option("--replicates", tables_replicates, "Monte Carlo replicates")
        ->capture_default_str();

    // global flags may appear after the subcommand name
    for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto parse_divisor = [](const std::string& d) {
        if (d == "m") return CovDivisor::M;
        if (d == "m-1") return CovDivisor::MMinus1;
        throw std::invalid_argument("unknown divisor '" + d + "' (expected m or m-1)");
    };

    try {
        if (moments->parsed()) cmd_moments(moments_archive, moments_out, opt, std::cout);
        if (describe->parsed())
            cmd_describe(describe_in, describe_reduce, describe_out, opt, std::cout, describe_csv);
        if (test->parsed()) cmd_test(test_in, test_m, test_which, test_out, opt, std::cout);
        if (mc->parsed())
            cmd_mc(mc_in, mc_m, mc_stat_from_token(mc_stat), mc_replicates,
                   parse_divisor(mc_divisor), mc_out, opt, std::cout);
        if (sample->parsed()) cmd_sample(sample_bn, sample_n, sample_out, opt, std::cout);
        if (boot->parsed()) cmd_bootstrap(boot_data, boot_learner, boot_m, boot_out, opt, std::cout);
        if (exp->parsed()) {
            exp_cfg.stat = mc_stat_from_token(exp_stat);
            exp_cfg.divisor = parse_divisor(exp_divisor);
            cmd_experiment(exp_cfg, exp_out, opt, std::cout);
        }
        if (tables->parsed()) cmd_reproduce_tables(tables_dir, tables_replicates, opt, std::cout);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 0;
}
