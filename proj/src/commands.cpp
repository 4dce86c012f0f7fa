#include "bnvar/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "bnvar/bayesnet.hpp"
#include "bnvar/bootstrap.hpp"
#include "bnvar/cov_tests.hpp"
#include "bnvar/graph.hpp"
#include "bnvar/manifest.hpp"
#include "bnvar/moments.hpp"
#include "bnvar/variability.hpp"

namespace bnvar {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output '" + path + "'");
    return out;
}

// The three two-edge covariance matrices of the worked example; the table
// commands are defined in terms of them.
std::vector<std::pair<std::string, Matrix>> example_matrices() {
    Matrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 6 / 25.0, 1 / 25.0, 1 / 25.0, 6 / 25.0;
    s2 << 66 / 625.0, -21 / 625.0, -21 / 625.0, 126 / 625.0;
    s3 << 66 / 625.0, 91 / 625.0, 91 / 625.0, 126 / 625.0;
    return {{"sigma1", s1}, {"sigma2", s2}, {"sigma3", s3}};
}

} // namespace

Matrix read_covariance_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "i,j,sigma_ij")
        throw ParseError("covariance csv: expected header 'i,j,sigma_ij'", 1);
    long lineno = 1;
    std::vector<std::tuple<int, int, double>> cells;
    int k = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw ParseError("covariance csv: malformed row", lineno);
        try {
            int i = std::stoi(a), j = std::stoi(b);
            cells.emplace_back(i, j, std::stod(c));
            k = std::max(k, std::max(i, j) + 1);
        } catch (const std::exception&) {
            throw ParseError("covariance csv: malformed row", lineno);
        }
    }
    Matrix sigma = Matrix::Zero(k, k);
    Eigen::Matrix<char, Eigen::Dynamic, Eigen::Dynamic> seen(k, k);
    seen.setZero();
    for (auto [i, j, s] : cells) {
        if (i < 0 || j < i || j >= k)
            throw ParseError("covariance csv: cell indices must satisfy 0 <= i <= j < k");
        sigma(i, j) = s;
        sigma(j, i) = s;
        seen(i, j) = 1;
    }
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j)
            if (!seen(i, j))
                throw ParseError("covariance csv: missing cell (" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
    return sigma;
}

void write_covariance_csv(MatrixRef sigma, std::ostream& out) {
    out << "i,j,sigma_ij\n";
    for (int i = 0; i < sigma.rows(); ++i)
        for (int j = i; j < sigma.cols(); ++j)
            out << i << ',' << j << ',' << fmt17(sigma(i, j)) << '\n';
}

Matrix load_sigma(const std::string& path) {
    std::ifstream probe(path);
    if (!probe) throw ParseError("cannot open statistics input '" + path + "'");
    std::string header;
    std::getline(probe, header);
    probe.close();

    std::ifstream in(path);
    if (header == "i,j,sigma_ij") return read_covariance_csv(in);
    if (header == "i,j,p_ij") return covariance_from_moments(read_moments_csv(in));
    throw ParseError("statistics input '" + path +
                     "': expected an 'i,j,sigma_ij' or 'i,j,p_ij' header");
}

void cmd_moments(const std::string& archive_path, const std::string& out_csv,
                 const GlobalOptions& opt, std::ostream& status) {
    const auto start = Clock::now();
    SkeletonArchive archive = load_skeleton_archive(archive_path);
    EdgeMoments moments = estimate_moments(archive.samples);

    auto out = open_output(out_csv);
    write_moments_csv(moments, out);
    out.close();

    status << to_string(classify_entropy(moments)) << '\n';

    RunManifest manifest;
    manifest.command = "moments";
    manifest.config["archive"] = archive_path;
    manifest.seed = opt.seed;
    manifest.threads = opt.threads;
    manifest.outputs = {out_csv};
    manifest.add_input(archive_path);
    manifest.write(out_csv + ".manifest.json", seconds_since(start));
}

void cmd_describe(const std::string& sigma_path, bool reduce_for_det,
                  const std::string& out_path, const GlobalOptions& opt, std::ostream& status,
                  bool csv_format) {
    const auto start = Clock::now();
    Matrix sigma = load_sigma(sigma_path);
    VariabilityReport report = variability(sigma, reduce_for_det);

    auto out = open_output(out_path);
    if (csv_format) {
        out << VariabilityReport::csv_header() << '\n';
        report.write_csv_row(out);
    } else {
        report.write_key_values(out);
    }
    out.close();
    report.write_key_values(status);

    RunManifest manifest;
    manifest.command = "describe";
    manifest.config["input"] = sigma_path;
    manifest.config["reduce_for_det"] = reduce_for_det ? "1" : "0";
    manifest.config["format"] = csv_format ? "csv" : "key-value";
    manifest.seed = opt.seed;
    manifest.threads = opt.threads;
    manifest.outputs = {out_path};
    manifest.add_input(sigma_path);
    manifest.write(out_path + ".manifest.json", seconds_since(start));
}

void cmd_test(const std::string& sigma_path, long m, const std::string& which,
              const std::string& out_csv, const GlobalOptions& opt, std::ostream& status) {
    const auto start = Clock::now();
    Matrix sigma = load_sigma(sigma_path);

    std::vector<CovTestResult> results;
    auto want = [&](const char* name) { return which == "all" || which == name; };
    if (which != "all" && which != "trace" && which != "det-gauss" && which != "det-gamma" &&
        which != "nagao")
        throw std::invalid_argument("unknown test '" + which +
                                    "' (expected trace, det-gauss, det-gamma, nagao or all)");
    if (want("trace")) results.push_back(trace_test(sigma, m));
    if (want("det-gauss")) results.push_back(det_gaussian_test(sigma, m));
    if (want("det-gamma")) results.push_back(det_gamma_test(sigma, m));
    if (want("nagao")) results.push_back(nagao_test(sigma, m));

    auto out = open_output(out_csv);
    out << cov_test_csv_header() << '\n';
    for (const auto& r : results) write_csv_row(r, out);
    out.close();
    for (const auto& r : results) {
        char line[160];
        std::snprintf(line, sizeof line, "%s: statistic=%.6f p_raw=%.6f p_corrected=%.6f\n",
                      to_string(r.kind), r.statistic, r.p_raw, r.p_corrected);
        status << line;
    }

    RunManifest manifest;
    manifest.command = "test";
    manifest.config["input"] = sigma_path;
    manifest.config["m"] = std::to_string(m);
    manifest.config["which"] = which;
    manifest.seed = opt.seed;
    manifest.threads = opt.threads;
    manifest.outputs = {out_csv};
    manifest.add_input(sigma_path);
    manifest.write(out_csv + ".manifest.json", seconds_since(start));
}

void cmd_mc(const std::string& input_path, long m, McStat stat, long long replicates,
            CovDivisor divisor, const std::string& out_path, const GlobalOptions& opt,
            std::ostream& status) {
    const auto start = Clock::now();

    // A skeleton archive supplies both the observed covariance and a default
    // m; a statistics file supplies the covariance directly.  The observed
    // moments use the same covariance divisor as the simulated replicates so
    // that null inputs stay calibrated.
    Matrix sigma;
    long sample_count = 0;
    {
        std::ifstream probe(input_path);
        if (!probe) throw ParseError("cannot open input '" + input_path + "'");
        std::string header;
        std::getline(probe, header);
        if (header.rfind("nodes=", 0) == 0) {
            SkeletonArchive archive = load_skeleton_archive(input_path);
            EdgeMoments moments = estimate_moments(archive.samples);
            sample_count = moments.sample_count;
            sigma = divisor == CovDivisor::M ? covariance_from_moments(moments)
                                             : unbiased_covariance_from_moments(moments);
        } else {
            sigma = load_sigma(input_path);
        }
    }
    if (m <= 0) m = sample_count;
    if (m < 2)
        throw std::invalid_argument("mc: m must be >= 2 (give --m when the input is not an archive)");

    McConfig cfg;
    cfg.m = m;
    cfg.k = static_cast<int>(sigma.rows());
    cfg.replicates = replicates;
    cfg.seed = opt.seed;
    cfg.stat = stat;
    cfg.divisor = divisor;
    cfg.threads = opt.threads;

    const double t_obs = mc_stat_value(stat, sigma);
    McResult result = mc_pvalue(t_obs, cfg);

    std::ostringstream line;
    line << "p_hat=" << fmt17(result.p_hat) << " se=" << fmt17(result.se) << '\n';
    status << line.str();

    if (!out_path.empty()) {
        auto out = open_output(out_path);
        out << line.str();
        out.close();

        RunManifest manifest;
        manifest.command = "mc";
        manifest.config["input"] = input_path;
        manifest.config["m"] = std::to_string(m);
        manifest.config["stat"] = to_string(stat);
        manifest.config["replicates"] = std::to_string(replicates);
        manifest.config["divisor"] = to_string(divisor);
        manifest.config["t_obs"] = fmt17(t_obs);
        manifest.seed = opt.seed;
        manifest.threads = opt.threads;
        manifest.outputs = {out_path};
        manifest.add_input(input_path);
        manifest.write(out_path + ".manifest.json", seconds_since(start));
    }
}

void cmd_sample(const std::string& bn_path, long n, const std::string& out_csv,
                const GlobalOptions& opt, std::ostream& status) {
    const auto start = Clock::now();
    BayesNet bn = load_bayesnet(bn_path);
    CategoricalDataset data = forward_sample(bn, n, opt.seed);
    auto out = open_output(out_csv);
    write_dataset_csv(data, out);
    out.close();
    status << "sampled " << n << " rows over " << bn.node_count() << " variables\n";

    RunManifest manifest;
    manifest.command = "sample";
    manifest.config["bn"] = bn_path;
    manifest.config["n"] = std::to_string(n);
    manifest.seed = opt.seed;
    manifest.threads = opt.threads;
    manifest.outputs = {out_csv};
    manifest.add_input(bn_path);
    manifest.write(out_csv + ".manifest.json", seconds_since(start));
}

void cmd_bootstrap(const std::string& data_path, const std::string& learner_token, int m,
                   const std::string& out_archive, const GlobalOptions& opt,
                   std::ostream& status) {
    const auto start = Clock::now();
    CategoricalDataset data = load_dataset_csv(data_path);
    LearnerConfig learner = LearnerConfig::parse(learner_token);
    std::vector<Skeleton> skeletons = bootstrap_skeletons(data, learner, m, opt.seed, opt.threads);

    SkeletonArchive archive;
    archive.node_count = data.variable_count();
    archive.labels = data.names;
    archive.samples = std::move(skeletons);
    save_skeleton_archive(archive, out_archive);
    status << "wrote " << m << " skeletons (" << learner.name()
           << ", cap=" << learner.gs.max_cond_size << ")\n";

    RunManifest manifest;
    manifest.command = "bootstrap";
    manifest.config["data"] = data_path;
    manifest.config["learner"] = learner.name();
    manifest.config["m"] = std::to_string(m);
    manifest.config["gs_cond_cap"] = std::to_string(learner.gs.max_cond_size);
    manifest.seed = opt.seed;
    manifest.threads = opt.threads;
    manifest.outputs = {out_archive};
    manifest.add_input(data_path);
    manifest.write(out_archive + ".manifest.json", seconds_since(start));
}

void cmd_reproduce_tables(const std::string& out_dir, long long replicates,
                          const GlobalOptions& opt, std::ostream& status) {
    const auto start = Clock::now();
    std::filesystem::create_directories(out_dir);
    const auto mats = example_matrices();
    const long sample_sizes[] = {10, 20, 50, 100, 200};

    const std::string t1 = out_dir + "/table1.csv";
    {
        auto out = open_output(t1);
        out << "matrix,var_t,var_g,var_n,nvar_t,nvar_g,nvar_n\n";
        for (const auto& [name, sigma] : mats) {
            VariabilityReport r = variability(sigma);
            out << name;
            for (double v : {r.var_t, r.var_g, r.var_n, r.nvar_t, r.nvar_g, r.nvar_n})
                out << ',' << fmt17(v);
            out << '\n';
        }
    }

    const std::string t2 = out_dir + "/table2.csv";
    {
        auto out = open_output(t2);
        out << "test,matrix,m,statistic,p_raw,p_corrected\n";
        struct Row { const char* name; CovTestResult (*fn)(MatrixRef, long); };
        const Row rows[] = {{"trace", trace_test}, {"det-gamma", det_gamma_test}, {"nagao", nagao_test}};
        for (const auto& row : rows)
            for (const auto& [name, sigma] : mats)
                for (long m : sample_sizes) {
                    CovTestResult r = row.fn(sigma, m);
                    out << row.name << ',' << name << ',' << m << ',' << fmt17(r.statistic) << ','
                        << fmt17(r.p_raw) << ',' << fmt17(r.p_corrected) << '\n';
                }
    }

    const std::string t3 = out_dir + "/table3.csv";
    {
        auto out = open_output(t3);
        out << "stat,matrix,m,t_obs,p_hat,se\n";
        const McStat stats[] = {McStat::ComplementT, McStat::ComplementG, McStat::QuarterFrobenius};
        for (long m : sample_sizes) {
            std::vector<std::pair<McStat, double>> observations;
            for (McStat stat : stats)
                for (const auto& [name, sigma] : mats)
                    observations.emplace_back(stat, mc_stat_value(stat, sigma));

            McConfig cfg;
            cfg.m = m;
            cfg.k = 2;
            cfg.replicates = replicates;
            cfg.seed = opt.seed;
            cfg.divisor = CovDivisor::M;
            cfg.threads = opt.threads;
            std::vector<McResult> results = mc_sweep(cfg, observations);

            size_t idx = 0;
            for (McStat stat : stats)
                for (const auto& [name, sigma] : mats) {
                    const McResult& r = results[idx++];
                    out << to_string(stat) << ',' << name << ',' << m << ',' << fmt17(r.observed)
                        << ',' << fmt17(r.p_hat) << ',' << fmt17(r.se) << '\n';
                }
        }
    }

    status << "wrote " << t1 << ", " << t2 << ", " << t3 << '\n';

    RunManifest manifest;
    manifest.command = "reproduce-tables";
    manifest.config["replicates"] = std::to_string(replicates);
    manifest.seed = opt.seed;
    manifest.threads = opt.threads;
    manifest.outputs = {t1, t2, t3};
    manifest.write(out_dir + "/manifest.json", seconds_since(start));
}

void cmd_experiment(const ExperimentConfig& cfg, const std::string& out_csv,
                    const GlobalOptions& opt, std::ostream& status) {
    const auto start = Clock::now();
    if (cfg.replicates < 0) throw std::invalid_argument("experiment: negative replicates");
    if (cfg.learners.empty()) throw std::invalid_argument("experiment: no learners");
    BayesNet bn = load_bayesnet(cfg.bn_path);
    const int v = bn.node_count();
    const int k = v * (v - 1) / 2;

    std::vector<LearnerConfig> learners;
    for (const std::string& token : cfg.learners) learners.push_back(LearnerConfig::parse(token));

    struct Task {
        long size;
        int rep;
        size_t learner;
    };
    std::vector<Task> tasks;
    for (long size : cfg.sizes)
        for (int rep = 0; rep < cfg.replicates; ++rep)
            for (size_t l = 0; l < learners.size(); ++l) tasks.push_back({size, rep, l});

    std::vector<double> p_values(tasks.size(), 0.0);
    std::vector<std::string> errors(tasks.size());

    auto run_task = [&](size_t t) {
        const Task& task = tasks[t];
        try {
            // One dataset per (size, rep), shared by all learners.
            const std::uint64_t data_seed =
                mix_seed(opt.seed, static_cast<std::uint64_t>(task.size) * 1000003ULL +
                                       static_cast<std::uint64_t>(task.rep));
            CategoricalDataset data = forward_sample(bn, task.size, data_seed);

            const std::uint64_t boot_seed = mix_seed(data_seed, 17 + task.learner);
            std::vector<Skeleton> skeletons =
                bootstrap_skeletons(data, learners[task.learner], cfg.bootstrap_m, boot_seed, 1);

            EdgeMoments moments = estimate_moments(skeletons);
            Matrix sigma = cfg.divisor == CovDivisor::M
                               ? covariance_from_moments(moments)
                               : unbiased_covariance_from_moments(moments);
            const double t_obs = mc_stat_value(cfg.stat, sigma);

            McConfig mc;
            mc.m = cfg.bootstrap_m;
            mc.k = k;
            mc.replicates = cfg.mc_replicates;
            mc.seed = mix_seed(data_seed, 7777 + task.learner);
            mc.stat = cfg.stat;
            mc.divisor = cfg.divisor;
            mc.threads = 1;
            p_values[t] = mc_pvalue(t_obs, mc).p_hat;
        } catch (const std::exception& e) {
            errors[t] = e.what();
        }
    };

    if (opt.threads == 1) {
        for (size_t t = 0; t < tasks.size(); ++t) run_task(t);
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&] {
            for (size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1)) run_task(t);
        };
        std::vector<std::thread> pool;
        const size_t n_workers = std::min<size_t>(static_cast<size_t>(opt.threads),
                                                  std::max<size_t>(tasks.size(), 1));
        for (size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    for (size_t t = 0; t < tasks.size(); ++t)
        if (!errors[t].empty())
            throw NumericError("experiment task (size=" + std::to_string(tasks[t].size) +
                               ", rep=" + std::to_string(tasks[t].rep) + ", learner=" +
                               learners[tasks[t].learner].name() + "): " + errors[t]);

    auto out = open_output(out_csv);
    out << "size,replicate,learner,p_value\n";
    for (size_t t = 0; t < tasks.size(); ++t)
        out << tasks[t].size << ',' << tasks[t].rep << ',' << learners[tasks[t].learner].name()
            << ',' << fmt17(p_values[t]) << '\n';
    out.close();
    status << "wrote " << tasks.size() << " experiment rows\n";

    RunManifest manifest;
    manifest.command = "experiment";
    manifest.config["bn"] = cfg.bn_path;
    {
        std::string sizes;
        for (long s : cfg.sizes) sizes += (sizes.empty() ? "" : ",") + std::to_string(s);
        manifest.config["sizes"] = sizes;
        std::string names;
        for (const auto& l : learners) names += (names.empty() ? "" : ",") + l.name();
        manifest.config["learners"] = names;
    }
    manifest.config["replicates"] = std::to_string(cfg.replicates);
    manifest.config["bootstrap_m"] = std::to_string(cfg.bootstrap_m);
    manifest.config["mc_replicates"] = std::to_string(cfg.mc_replicates);
    manifest.config["stat"] = to_string(cfg.stat);
    manifest.config["divisor"] = to_string(cfg.divisor);
    manifest.seed = opt.seed;
    manifest.threads = opt.threads;
    manifest.outputs = {out_csv};
    manifest.add_input(cfg.bn_path);
    manifest.write(out_csv + ".manifest.json", seconds_since(start));
}

} // namespace bnvar
