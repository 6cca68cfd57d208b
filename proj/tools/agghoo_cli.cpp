#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "agghoo/bench.hpp"
#include "agghoo/dataio.hpp"
#include "agghoo/synthetic.hpp"
#include "agghoo/theory.hpp"

namespace {

using namespace agghoo;

constexpr const char* kVersion = "agghoo 0.1.0";

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

// Scheme entries are "name", "name:V" or "name:V:tau". Bare names expand
// over the tau/V lists; suffixed entries pin their own plan (tau 0 selects
// V-fold splitting).
std::vector<SchemeSetting> build_settings(const std::string& schemes_csv,
                                          const std::vector<double>& taus,
                                          const std::vector<int>& vs) {
    std::vector<SchemeSetting> settings;
    std::stringstream ss(schemes_csv);
    std::string entry;
    while (std::getline(ss, entry, ',')) {
        if (entry.empty()) continue;
        std::vector<std::string> parts;
        std::stringstream es(entry);
        std::string p;
        while (std::getline(es, p, ':')) parts.push_back(p);
        Scheme scheme;
        try {
            scheme = scheme_from_name(parts[0]);
        } catch (const std::invalid_argument& e) {
            throw CLI::ValidationError("--schemes", e.what());
        }
        if (parts.size() == 1) {
            for (const double tau : taus)
                for (const int v : vs) settings.push_back({scheme, tau, v});
        } else if (parts.size() == 2) {
            for (const double tau : taus) settings.push_back({scheme, tau, std::stoi(parts[1])});
        } else if (parts.size() == 3) {
            settings.push_back({scheme, std::stod(parts[2]), std::stoi(parts[1])});
        } else {
            throw CLI::ValidationError("--schemes", "bad scheme entry: " + entry);
        }
    }
    if (settings.empty()) throw CLI::ValidationError("--schemes", "no schemes given");
    return settings;
}

// key = value lines, '#' comments. The resulting flags are spliced in front
// of the explicit command line, which therefore wins (TakeLast policy).
std::vector<std::string> config_file_as_args(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::vector<std::string> args;
    std::string line;
    auto trim = [](std::string s) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
        return s;
    };
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) continue;
        args.push_back("--" + key);
        args.push_back(value);
    }
    return args;
}

struct BenchArgs {
    std::string problem = "sigmoid";
    std::string family = "knn";
    std::string schemes = "agghoo,cv";
    std::string tau_list = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    std::string v_list = "10";
    std::string out_path = "bench.csv";
    std::string svg_path;
    std::string trace_path;
    std::string config_path;  // consumed before parsing
    std::string uci_path = "data/breast-cancer-wisconsin.data";
    std::string missing = "impute-median";
    std::uint64_t seed = 0;
    ExperimentConfig config;
};

void setup_bench(CLI::App& cmd, const std::shared_ptr<BenchArgs>& a, int& exit_code) {
    cmd.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    cmd.add_option("--problem", a->problem, "sigmoid | gaussmix | uci");
    cmd.add_option("--family", a->family, "knn | cart | lp");
    cmd.add_option("--n", a->config.n, "sample size per replicate");
    cmd.add_option("--test-n", a->config.test_n, "test set size (synthetic problems)");
    cmd.add_option("--replicates", a->config.replicates, "number of independent replicates");
    cmd.add_option("--tau-list", a->tau_list, "training fractions; 0 selects V-fold");
    cmd.add_option("--v-list", a->v_list, "numbers of splits");
    cmd.add_option("--schemes", a->schemes,
                   "agghoo,cv,holdout,subag; entries may pin V/tau as name:V[:tau]");
    cmd.add_option("--seed", a->seed, "master seed (printed)");
    cmd.add_option("--out", a->out_path, "CSV output path");
    cmd.add_option("--svg", a->svg_path, "optional SVG plot path");
    cmd.add_option("--trace", a->trace_path, "optional JSON-lines per-split trace");
    cmd.add_option("--threads", a->config.threads, "worker cap; 0 = hardware");
    cmd.add_option("--gauss-d", a->config.gauss_d, "gaussmix dimension");
    cmd.add_option("--uci-path", a->uci_path, "breast-cancer data file");
    cmd.add_option("--missing-policy", a->missing, "impute-median | drop-rows");
    cmd.add_option("--inner-tau", a->config.inner_tau, "inner training fraction for subag");
    cmd.add_option("--knn-max-k", a->config.knn_max_k, "largest (odd) k");
    cmd.add_option("--cart-alpha-min", a->config.cart_grid.alpha_min, "smallest CART penalty");
    cmd.add_option("--cart-ratio", a->config.cart_grid.ratio, "CART grid ratio");
    cmd.add_option("--cart-count", a->config.cart_grid.count, "CART grid size");
    cmd.add_option("--lp-max-degree", a->config.lp_max_degree, "largest polynomial degree");
    cmd.add_option("--lp-max-k", a->config.lp_max_k, "largest inverse bandwidth");
    cmd.add_option("--config", a->config_path, "key=value file; flags override");

    cmd.callback([a, &exit_code]() {
        ExperimentConfig& config = a->config;
        if (a->problem == "sigmoid") config.problem = BenchProblem::Sigmoid;
        else if (a->problem == "gaussmix") config.problem = BenchProblem::GaussMix;
        else if (a->problem == "uci") config.problem = BenchProblem::Uci;
        else throw CLI::ValidationError("--problem", "unknown problem " + a->problem);

        if (a->family == "knn") config.family = BenchFamily::Knn;
        else if (a->family == "cart") config.family = BenchFamily::Cart;
        else if (a->family == "lp") config.family = BenchFamily::Lp;
        else throw CLI::ValidationError("--family", "unknown family " + a->family);

        if (a->missing == "impute-median") config.missing_policy = MissingPolicy::ImputeMedian;
        else if (a->missing == "drop-rows") config.missing_policy = MissingPolicy::DropRows;
        else throw CLI::ValidationError("--missing-policy", "unknown policy " + a->missing);

        config.uci_path = a->uci_path;
        config.master_seed = a->seed;
        config.trace_path = a->trace_path;
        config.settings =
            build_settings(a->schemes, parse_double_list(a->tau_list), parse_int_list(a->v_list));

        std::printf("seed=%llu replicates=%d settings=%zu\n",
                    static_cast<unsigned long long>(config.master_seed), config.replicates,
                    config.settings.size());
        const ExperimentReport report = run_experiment(config);
        report_write(report, a->out_path);
        if (!a->svg_path.empty()) report_plot(report, a->svg_path);
        for (const auto& agg : report.aggregates) {
            std::printf("%-8s tau=%-4g V=%-3d mean_excess=%-12g mean_risk=%-12g se_risk=%g\n",
                        agg.scheme.c_str(), agg.tau, agg.V, agg.mean_excess, agg.mean_risk,
                        agg.se_risk);
        }
        if (!report.failures.empty()) {
            std::fprintf(stderr, "%zu replicate(s) failed; see CSV\n", report.failures.size());
            exit_code = 2;
        }
        std::printf("wrote %s (%.1fs)\n", a->out_path.c_str(), report.runtime_seconds);
    });
}

struct BayesArgs {
    std::string problem = "sigmoid";
    int grid = 2000;
    long mc_n = 1000000;
    int gauss_d = 7;
    std::uint64_t seed = 0;
};

struct TheoryArgs {
    int sweeps = 10000;
    std::uint64_t seed = 0;
    std::string out_path;
    int t1_replicates = 0;
    double t1_beta = 1.0;
    double t1_c = 10.0;
    double t1_tau = 0.7;
    int t1_v = 10;
};

struct UciArgs {
    std::string path = "data/breast-cancer-wisconsin.data";
    std::string missing = "impute-median";
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Aggregated hold-out, cross-validation and hold-out selection benchmarks"};
    app.require_subcommand(1);
    int exit_code = 0;

    // Splice config-file values in front of the explicit flags so the
    // command line overrides the file.
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == "--config") {
            try {
                const auto file_args = config_file_as_args(args[i + 1]);
                args.insert(args.begin() + 1, file_args.begin(), file_args.end());
            } catch (const std::exception& e) {
                std::fprintf(stderr, "error: %s\n", e.what());
                return 1;
            }
            break;
        }
    }

    auto bench_args = std::make_shared<BenchArgs>();
    setup_bench(*app.add_subcommand("bench", "run a replicated selection experiment"), bench_args,
                exit_code);

    auto bayes_args = std::make_shared<BayesArgs>();
    {
        auto* cmd = app.add_subcommand("bayes-risk", "compute a problem's Bayes risk");
        cmd->add_option("--problem", bayes_args->problem, "sigmoid | gaussmix");
        cmd->add_option("--grid", bayes_args->grid, "Simpson grid per axis (sigmoid)");
        cmd->add_option("--mc-n", bayes_args->mc_n, "Monte-Carlo draws (gaussmix)");
        cmd->add_option("--gauss-d", bayes_args->gauss_d, "gaussmix dimension");
        cmd->add_option("--seed", bayes_args->seed, "Monte-Carlo seed (printed)");
        cmd->callback([bayes_args]() {
            std::printf("seed=%llu\n", static_cast<unsigned long long>(bayes_args->seed));
            if (bayes_args->problem == "sigmoid") {
                std::printf("bayes_risk=%.6f\n", bayes_risk_sigmoid(bayes_args->grid));
            } else if (bayes_args->problem == "gaussmix") {
                const auto est =
                    bayes_risk_gaussmix(bayes_args->gauss_d, bayes_args->mc_n, bayes_args->seed);
                std::printf("bayes_risk=%.6f se=%.6f draws=%ld\n", est.value, est.std_error,
                            est.draws);
            } else {
                throw CLI::ValidationError("--problem", "unknown problem " + bayes_args->problem);
            }
        });
    }

    auto theory_args = std::make_shared<TheoryArgs>();
    {
        auto* cmd = app.add_subcommand("theory-check", "run the executable theory checks");
        cmd->add_option("--sweeps", theory_args->sweeps, "majority-vote bound instances");
        cmd->add_option("--seed", theory_args->seed, "sweep seed (printed)");
        cmd->add_option("--out", theory_args->out_path, "write the JSON verdict here");
        cmd->add_option("--t1-replicates", theory_args->t1_replicates,
                        "also Monte-Carlo check the oracle inequality with this many replicates");
        cmd->add_option("--t1-beta", theory_args->t1_beta, "margin exponent for the oracle bound");
        cmd->add_option("--t1-c", theory_args->t1_c, "margin constant for the oracle bound");
        cmd->add_option("--t1-tau", theory_args->t1_tau, "training fraction for the oracle bound");
        cmd->add_option("--t1-v", theory_args->t1_v, "splits for the oracle bound");
        cmd->callback([theory_args, &exit_code]() {
            std::printf("seed=%llu\n", static_cast<unsigned long long>(theory_args->seed));
            const Prop2SweepResult sweep = prop2_fuzz(theory_args->sweeps, theory_args->seed);
            nlohmann::json verdict;
            verdict["majority_bounds"] = {{"instances", sweep.instances},
                                          {"violations", sweep.violations}};
            if (sweep.violations == 0) {
                std::printf("all majority-vote bound instances hold (%d/%d)\n", sweep.instances,
                            sweep.instances);
            } else {
                std::printf("VIOLATIONS: %d of %d instances failed\n", sweep.violations,
                            sweep.instances);
                exit_code = 2;
            }
            if (theory_args->t1_replicates > 0) {
                ExperimentConfig config;
                config.replicates = theory_args->t1_replicates;
                config.master_seed = theory_args->seed;
                const auto samples =
                    oracle_inequality_samples(config, theory_args->t1_tau, theory_args->t1_v);
                OracleBoundParams params;
                params.family_size = samples.family_size;
                params.p = samples.p;
                params.beta = theory_args->t1_beta;
                params.c = theory_args->t1_c;
                const auto report =
                    check_oracle_inequality(samples.agghoo_excess, samples.oracle_excess, params);
                verdict["oracle_inequality"] = nlohmann::json::parse(report.to_json());
                std::printf("oracle inequality: lhs=%.5f rhs=%.5f -> %s\n", report.lhs_mean,
                            report.rhs, report.holds ? "holds" : "VIOLATED");
                if (!report.holds) exit_code = 2;
            }
            if (!theory_args->out_path.empty()) {
                std::ofstream out(theory_args->out_path);
                out << verdict.dump(2) << '\n';
            }
        });
    }

    auto uci_args = std::make_shared<UciArgs>();
    {
        auto* cmd = app.add_subcommand("load-uci", "validate a local breast-cancer data file");
        cmd->add_option("--path", uci_args->path, "data file location");
        cmd->add_option("--missing-policy", uci_args->missing, "impute-median | drop-rows");
        cmd->callback([uci_args]() {
            const MissingPolicy policy = uci_args->missing == "drop-rows"
                                             ? MissingPolicy::DropRows
                                             : MissingPolicy::ImputeMedian;
            const DataPtr data = load_breast_cancer(uci_args->path, policy);
            int benign = 0;
            for (int i = 0; i < data->size(); ++i)
                if (data->label(i) == 0) ++benign;
            std::printf("n=%d d=%d benign=%d malignant=%d checksum=%016llx\n", data->size(),
                        data->dim(), benign, data->size() - benign,
                        static_cast<unsigned long long>(file_checksum(uci_args->path)));
        });
    }

    app.add_subcommand("version", "print the version")->callback([]() {
        std::printf("%s\n", kVersion);
    });

    try {
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return exit_code;
}
