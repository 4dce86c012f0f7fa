#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bnvar/montecarlo.hpp"
#include "bnvar/types.hpp"

namespace bnvar {

/// Batch commands behind the CLI; each writes its output files plus a
/// `<output>.manifest.json` provenance record.  `status` receives the short
/// human-readable result lines the CLI prints.

struct GlobalOptions {
    std::uint64_t seed = 1;
    int threads = 1;
};

/// Reads a covariance CSV (`i,j,sigma_ij`, upper triangle) into a matrix.
Matrix read_covariance_csv(std::istream& in);
void write_covariance_csv(MatrixRef sigma, std::ostream& out);

/// Covariance from a statistics input file: a covariance CSV is taken as
/// is, a moments CSV (`i,j,p_ij`) goes through the plug-in formula.
Matrix load_sigma(const std::string& path);

void cmd_moments(const std::string& archive_path, const std::string& out_csv,
                 const GlobalOptions& opt, std::ostream& status);

void cmd_describe(const std::string& sigma_path, bool reduce_for_det,
                  const std::string& out_path, const GlobalOptions& opt, std::ostream& status,
                  bool csv_format = false);

void cmd_test(const std::string& sigma_path, long m, const std::string& which,
              const std::string& out_csv, const GlobalOptions& opt, std::ostream& status);

void cmd_mc(const std::string& input_path, long m, McStat stat, long long replicates,
            CovDivisor divisor, const std::string& out_path, const GlobalOptions& opt,
            std::ostream& status);

void cmd_sample(const std::string& bn_path, long n, const std::string& out_csv,
                const GlobalOptions& opt, std::ostream& status);

void cmd_bootstrap(const std::string& data_path, const std::string& learner_token, int m,
                   const std::string& out_archive, const GlobalOptions& opt, std::ostream& status);

void cmd_reproduce_tables(const std::string& out_dir, long long replicates,
                          const GlobalOptions& opt, std::ostream& status);

struct ExperimentConfig {
    std::string bn_path;
    std::vector<long> sizes;
    int replicates = 20;         // datasets per size
    std::vector<std::string> learners;
    int bootstrap_m = 50;        // skeletons per dataset
    long long mc_replicates = 10000;
    McStat stat = McStat::ComplementN;
    CovDivisor divisor = CovDivisor::M;
};

void cmd_experiment(const ExperimentConfig& cfg, const std::string& out_csv,
                    const GlobalOptions& opt, std::ostream& status);

} // namespace bnvar
