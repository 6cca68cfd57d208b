#include "agghoo/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>
#include <tuple>
#include <utility>

#include "json.hpp"

#include "agghoo/knn.hpp"
#include "agghoo/localpoly.hpp"
#include "agghoo/rng.hpp"
#include "agghoo/selection.hpp"
#include "agghoo/synthetic.hpp"

namespace agghoo {

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::Agghoo: return "agghoo";
        case Scheme::Cv: return "cv";
        case Scheme::Holdout: return "holdout";
        case Scheme::Subag: return "subag";
    }
    throw std::logic_error("scheme_name: unknown scheme");
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "agghoo") return Scheme::Agghoo;
    if (name == "cv") return Scheme::Cv;
    if (name == "holdout") return Scheme::Holdout;
    if (name == "subag") return Scheme::Subag;
    throw std::invalid_argument("unknown scheme: " + name);
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::vector<LearningRule> make_family(const ExperimentConfig& config) {
    switch (config.family) {
        case BenchFamily::Knn: return knn_family(config.knn_max_k);
        case BenchFamily::Cart: return cart_family(config.cart_grid);
        case BenchFamily::Lp: return lp_collection(config.lp_max_degree, config.lp_max_k);
    }
    throw std::logic_error("make_family: unknown family");
}

struct ReplicateContext {
    DataPtr train;
    DataPtr test;
    ClassifierPtr reference;  // null when the true distribution is unknown
    std::vector<LearningRule> family;
};

ReplicateContext make_context(const ExperimentConfig& config, const DataPtr& uci_full, int r) {
    const std::uint64_t seed_r = Rng::derive(config.master_seed, static_cast<std::uint64_t>(r));
    ReplicateContext ctx;
    switch (config.problem) {
        case BenchProblem::Sigmoid:
            ctx.train = sample_sigmoid(config.n, Rng::derive(seed_r, 1));
            ctx.test = sample_sigmoid(config.test_n, Rng::derive(seed_r, 2));
            ctx.reference = bayes_sigmoid();
            break;
        case BenchProblem::GaussMix:
            ctx.train = sample_gaussmix(config.n, config.gauss_d, Rng::derive(seed_r, 1));
            ctx.test = sample_gaussmix(config.test_n, config.gauss_d, Rng::derive(seed_r, 2));
            ctx.reference = bayes_gaussmix(config.gauss_d);
            break;
        case BenchProblem::Uci:
            std::tie(ctx.train, ctx.test) = train_test_resplit(*uci_full, config.n, Rng::derive(seed_r, 1));
            break;
    }
    ctx.family = make_family(config);
    return ctx;
}

std::uint64_t plan_seed_for(std::uint64_t rep_seed, double tau, int V) {
    const auto tau_key = static_cast<std::uint64_t>(std::llround(tau * 1e9));
    return Rng::derive(rep_seed, Rng::derive(tau_key, static_cast<std::uint64_t>(V)));
}

struct PlanBundle {
    SplitPlan plan;
    PlanEvaluation eval;
    std::uint64_t plan_seed = 0;
};

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string trace_line(int replicate, double tau, int V, const SplitScores& record) {
    nlohmann::json j;
    j["replicate"] = replicate;
    j["tau"] = tau;
    j["V"] = V;
    j["split"] = record.split;
    auto& scores = j["scores"];
    scores = nlohmann::json::array();
    for (const auto& [id, score] : record.scores) scores.push_back({id, score});
    j["winner"] = record.winner_id;
    return j.dump();
}

std::vector<ReplicateOutcome> run_replicate(const ExperimentConfig& config, const DataPtr& uci_full,
                                            int r, std::vector<std::string>* trace_lines) {
    const std::uint64_t seed_r = Rng::derive(config.master_seed, static_cast<std::uint64_t>(r));
    const ReplicateContext ctx = make_context(config, uci_full, r);
    const double reference_risk = ctx.reference ? test_risk(*ctx.reference, *ctx.test) : kNan;

    std::map<std::pair<std::int64_t, int>, PlanBundle> bundles;
    auto bundle_for = [&](double tau, int V) -> PlanBundle& {
        const std::pair<std::int64_t, int> key{std::llround(tau * 1e9), V};
        auto it = bundles.find(key);
        if (it != bundles.end()) return it->second;
        PlanBundle bundle;
        bundle.plan_seed = plan_seed_for(seed_r, tau, V);
        bundle.plan = tau > 0.0 ? monte_carlo_splits(config.n, tau, V, bundle.plan_seed)
                                : vfold_splits(config.n, V, bundle.plan_seed);
        TraceSink sink;
        if (trace_lines)
            sink = [&, tau, V](const SplitScores& record) {
                trace_lines->push_back(trace_line(r, tau, V, record));
            };
        bundle.eval = evaluate_plan(ctx.family, *ctx.train, bundle.plan, sink);
        return bundles.emplace(key, std::move(bundle)).first->second;
    };

    std::vector<ReplicateOutcome> rows;
    rows.reserve(config.settings.size() + 1);
    for (const auto& setting : config.settings) {
        PlanBundle& bundle = bundle_for(setting.tau, setting.V);
        ClassifierPtr f;
        std::string ids;
        switch (setting.scheme) {
            case Scheme::Holdout:
                f = bundle.eval.winners.front();
                ids = ctx.family[bundle.eval.winner_index.front()].id;
                break;
            case Scheme::Agghoo: {
                f = agghoo_from_evaluation(bundle.eval, ctx.train->class_count());
                for (std::size_t j = 0; j < bundle.eval.winner_index.size(); ++j) {
                    if (j) ids += '|';
                    ids += ctx.family[bundle.eval.winner_index[j]].id;
                }
                break;
            }
            case Scheme::Cv: {
                const CvChoice choice = cv_from_evaluation(ctx.family, *ctx.train, bundle.eval);
                f = choice.classifier;
                ids = ctx.family[choice.rule_index].id;
                break;
            }
            case Scheme::Subag: {
                std::vector<std::size_t> winner_indices;
                f = subagged_holdout(ctx.family, *ctx.train, bundle.plan, config.inner_tau,
                                     Rng::derive(bundle.plan_seed, 0x5bacULL), nullptr,
                                     &winner_indices);
                for (std::size_t j = 0; j < winner_indices.size(); ++j) {
                    if (j) ids += '|';
                    ids += ctx.family[winner_indices[j]].id;
                }
                break;
            }
        }
        const double risk = test_risk(*f, *ctx.test);
        rows.push_back(ReplicateOutcome{r, scheme_name(setting.scheme), setting.tau, setting.V,
                                        ctx.reference ? risk - reference_risk : kNan, risk, ids});
    }

    if (config.include_oracle) {
        std::string winner_id;
        const double value = oracle_excess(ctx.family, ctx.train, ctx.reference, *ctx.test, &winner_id);
        const double risk = ctx.reference ? value + reference_risk : value;
        rows.push_back(ReplicateOutcome{r, "oracle", 0.0, 0, ctx.reference ? value : kNan, risk,
                                        winner_id});
    }
    return rows;
}

std::pair<double, double> mean_and_se(const std::vector<double>& xs) {
    if (xs.empty()) return {kNan, kNan};
    const double n = static_cast<double>(xs.size());
    double sum = 0.0;
    for (const double x : xs) sum += x;
    const double mean = sum / n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (const double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1) / n)};
}

}  // namespace

double oracle_excess(const std::vector<LearningRule>& family, const DataPtr& data,
                     const ClassifierPtr& reference, const Dataset& test, std::string* winner_id) {
    if (family.empty()) throw std::invalid_argument("oracle_excess: empty family");
    double best_risk = 0.0;
    std::size_t best = 0;
    for (std::size_t g = 0; g < family.size(); ++g) {
        const double risk = test_risk(*family[g].train(data), test);
        if (g == 0 || risk < best_risk || (risk == best_risk && family[g].id < family[best].id)) {
            best_risk = risk;
            best = g;
        }
    }
    if (winner_id) *winner_id = family[best].id;
    return reference ? best_risk - test_risk(*reference, test) : best_risk;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    if (config.replicates < 1) throw std::invalid_argument("run_experiment: replicates must be >= 1");
    if (config.settings.empty() && !config.include_oracle)
        throw std::invalid_argument("run_experiment: nothing to evaluate");
    for (const auto& s : config.settings) {
        if (s.V < 1) throw std::invalid_argument("run_experiment: V must be >= 1");
        if (s.tau < 0.0 || s.tau >= 1.0) throw std::invalid_argument("run_experiment: tau out of range");
        if (s.tau == 0.0 && s.V < 2) throw std::invalid_argument("run_experiment: V-fold needs V >= 2");
    }

    ExperimentReport report;
    report.config = config;

    DataPtr uci_full;
    if (config.problem == BenchProblem::Uci) {
        if (config.uci_path.empty()) throw std::invalid_argument("run_experiment: uci_path not set");
        uci_full = load_breast_cancer(config.uci_path, config.missing_policy);
        report.uci_checksum = file_checksum(config.uci_path);
        if (config.n >= uci_full->size())
            throw std::invalid_argument("run_experiment: n must be below the UCI sample size");
    }

    const auto start = std::chrono::steady_clock::now();
    const int R = config.replicates;
    std::vector<std::vector<ReplicateOutcome>> slots(R);
    std::vector<std::vector<std::string>> trace_slots(config.trace_path.empty() ? 0 : R);
    std::vector<std::string> failure_slots(R);

    int workers = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, R);

    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int r = next.fetch_add(1);
            if (r >= R) return;
            try {
                slots[r] = run_replicate(config, uci_full, r,
                                         trace_slots.empty() ? nullptr : &trace_slots[r]);
            } catch (const std::exception& e) {
                failure_slots[r] = e.what();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (int r = 0; r < R; ++r) {
        if (!failure_slots[r].empty()) {
            report.failures.emplace_back(r, failure_slots[r]);
            continue;
        }
        report.rows.insert(report.rows.end(), slots[r].begin(), slots[r].end());
    }

    if (!config.trace_path.empty()) {
        std::ofstream trace(config.trace_path);
        if (!trace) throw std::runtime_error("run_experiment: cannot open trace file");
        for (const auto& lines : trace_slots)
            for (const auto& line : lines) trace << line << '\n';
    }

    // Aggregates in settings order, oracle last.
    auto append_aggregate = [&](const std::string& scheme, double tau, int V) {
        AggregateOutcome agg;
        agg.scheme = scheme;
        agg.tau = tau;
        agg.V = V;
        std::vector<double> excesses, risks;
        for (const auto& row : report.rows) {
            if (row.scheme != scheme || row.tau != tau || row.V != V) continue;
            excesses.push_back(row.excess);
            risks.push_back(row.risk);
        }
        agg.count = static_cast<int>(risks.size());
        std::tie(agg.mean_excess, agg.se_excess) = mean_and_se(excesses);
        std::tie(agg.mean_risk, agg.se_risk) = mean_and_se(risks);
        report.aggregates.push_back(std::move(agg));
    };
    std::vector<std::tuple<std::string, double, int>> seen;
    for (const auto& setting : config.settings) {
        const std::tuple<std::string, double, int> key{scheme_name(setting.scheme), setting.tau,
                                                       setting.V};
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);
        append_aggregate(std::get<0>(key), std::get<1>(key), std::get<2>(key));
    }
    if (config.include_oracle) append_aggregate("oracle", 0.0, 0);
    return report;
}

const AggregateOutcome& ExperimentReport::aggregate(const std::string& scheme, double tau,
                                                    int V) const {
    for (const auto& agg : aggregates)
        if (agg.scheme == scheme && agg.tau == tau && agg.V == V) return agg;
    throw std::out_of_range("ExperimentReport::aggregate: no such setting");
}

std::vector<double> ExperimentReport::excess_series(const std::string& scheme, double tau,
                                                    int V) const {
    std::vector<double> out;
    for (const auto& row : rows)
        if (row.scheme == scheme && row.tau == tau && row.V == V) out.push_back(row.excess);
    return out;
}

std::vector<double> ExperimentReport::risk_series(const std::string& scheme, double tau,
                                                  int V) const {
    std::vector<double> out;
    for (const auto& row : rows)
        if (row.scheme == scheme && row.tau == tau && row.V == V) out.push_back(row.risk);
    return out;
}

void report_write(const ExperimentReport& report, const std::string& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("report_write: cannot open " + csv_path);
    out << "replicate,scheme,tau,V,excess_risk,risk,selected_rule_ids\n";
    for (const auto& row : report.rows) {
        out << row.replicate << ',' << row.scheme << ',' << format_double(row.tau) << ',' << row.V
            << ',' << format_double(row.excess) << ',' << format_double(row.risk) << ','
            << row.rule_ids << '\n';
    }
    for (const auto& [replicate, message] : report.failures) {
        std::string sanitized = message;
        std::replace(sanitized.begin(), sanitized.end(), ',', ';');
        out << replicate << ",FAILED,0,0,nan,nan," << sanitized << '\n';
    }
    for (const auto& agg : report.aggregates) {
        out << "AGG," << agg.scheme << ',' << format_double(agg.tau) << ',' << agg.V << ','
            << format_double(agg.mean_excess) << ',' << format_double(agg.mean_risk) << ",mean\n";
        out << "AGG," << agg.scheme << ',' << format_double(agg.tau) << ',' << agg.V << ','
            << format_double(agg.se_excess) << ',' << format_double(agg.se_risk) << ",se\n";
    }
    if (!out) throw std::runtime_error("report_write: write failed for " + csv_path);

    nlohmann::json meta;
    meta["runtime_seconds"] = report.runtime_seconds;
    meta["replicates"] = report.config.replicates;
    meta["failures"] = report.failures.size();
    meta["master_seed"] = report.config.master_seed;
    meta["n"] = report.config.n;
    meta["test_n"] = report.config.test_n;
    if (report.uci_checksum != 0) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(report.uci_checksum));
        meta["uci_checksum"] = buf;
    }
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    meta["written_at_unix"] = static_cast<long long>(now);
    std::ofstream meta_out(csv_path + ".meta.json");
    if (meta_out) meta_out << meta.dump(2) << '\n';
}

namespace {

struct PlotSeries {
    std::string name;
    std::vector<double> x, y, half_width;  // error bar half-width = 2 se
};

std::string svg_color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                    "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
    return palette[i % (sizeof palette / sizeof palette[0])];
}

}  // namespace

void report_plot(const ExperimentReport& report, const std::string& svg_path) {
    // Excess risk when a reference classifier exists, raw risk otherwise.
    const bool use_risk = std::all_of(report.aggregates.begin(), report.aggregates.end(),
                                      [](const AggregateOutcome& a) { return std::isnan(a.mean_excess); });

    std::vector<PlotSeries> series;
    double oracle_level = kNan;
    for (const auto& agg : report.aggregates) {
        const double value = use_risk ? agg.mean_risk : agg.mean_excess;
        const double se = use_risk ? agg.se_risk : agg.se_excess;
        if (agg.scheme == "oracle") {
            oracle_level = value;
            continue;
        }
        char name[48];
        std::snprintf(name, sizeof name, "%s V=%d", agg.scheme.c_str(), agg.V);
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const PlotSeries& s) { return s.name == name; });
        if (it == series.end()) {
            series.push_back(PlotSeries{name, {}, {}, {}});
            it = series.end() - 1;
        }
        it->x.push_back(agg.tau);
        it->y.push_back(value);
        it->half_width.push_back(2.0 * se);
    }

    double x_min = 0.0, x_max = 1.0, y_max = 1e-12;
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!any) { x_min = x_max = s.x[i]; any = true; }
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_max = std::max(y_max, s.y[i] + s.half_width[i]);
        }
    if (!std::isnan(oracle_level)) y_max = std::max(y_max, oracle_level);
    if (x_max == x_min) { x_min -= 0.05; x_max += 0.05; }
    y_max *= 1.08;

    const double width = 800, height = 500, ml = 70, mr = 160, mt = 30, mb = 55;
    auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * (width - ml - mr); };
    auto sy = [&](double y) { return height - mb - y / y_max * (height - mt - mb); };

    std::ofstream out(svg_path);
    if (!out) throw std::runtime_error("report_plot: cannot open " + svg_path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    // Axes and ticks.
    out << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = x_min + (x_max - x_min) * t / 4.0;
        const double yv = y_max * t / 4.0;
        out << "<text x=\"" << sx(xv) << "\" y=\"" << height - mb + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << format_double(xv) << "</text>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(yv) + 4
            << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(yv) << "</text>\n";
        out << "<line x1=\"" << ml - 4 << "\" y1=\"" << sy(yv) << "\" x2=\"" << ml << "\" y2=\""
            << sy(yv) << "\" stroke=\"black\"/>\n";
    }
    out << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"14\" text-anchor=\"middle\">training fraction tau</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + height - mb) / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (mt + height - mb) / 2 << ")\">" << (use_risk ? "mean risk" : "mean excess risk")
        << "</text>\n";

    if (!std::isnan(oracle_level)) {
        out << "<line x1=\"" << ml << "\" y1=\"" << sy(oracle_level) << "\" x2=\"" << width - mr
            << "\" y2=\"" << sy(oracle_level)
            << "\" stroke=\"#555555\" stroke-dasharray=\"6 4\"/>\n";
        out << "<text x=\"" << width - mr + 6 << "\" y=\"" << sy(oracle_level) + 4
            << "\" font-size=\"12\">oracle</text>\n";
    }

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& sr = series[s];
        const std::string color = svg_color(s);
        // points sorted by tau for the polyline
        std::vector<std::size_t> order(sr.x.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return sr.x[a] < sr.x[b]; });
        if (order.size() > 1) {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (const std::size_t i : order) out << sx(sr.x[i]) << ',' << sy(sr.y[i]) << ' ';
            out << "\"/>\n";
        }
        for (const std::size_t i : order) {
            const double cx = sx(sr.x[i]);
            out << "<line x1=\"" << cx << "\" y1=\"" << sy(sr.y[i] - sr.half_width[i]) << "\" x2=\""
                << cx << "\" y2=\"" << sy(sr.y[i] + sr.half_width[i]) << "\" stroke=\"" << color
                << "\"/>\n";
            out << "<circle cx=\"" << cx << "\" cy=\"" << sy(sr.y[i]) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        }
        out << "<rect x=\"" << width - mr + 6 << "\" y=\"" << mt + 18 * s << "\" width=\"12\" height=\"12\" fill=\""
            << color << "\"/>\n";
        out << "<text x=\"" << width - mr + 24 << "\" y=\"" << mt + 18 * s + 10
            << "\" font-size=\"12\">" << sr.name << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw std::runtime_error("report_plot: write failed for " + svg_path);
}

OracleInequalitySamples oracle_inequality_samples(const ExperimentConfig& config, double tau,
                                                  int V) {
    if (config.problem == BenchProblem::Uci)
        throw std::invalid_argument("oracle_inequality_samples: needs a known distribution");
    if (tau <= 0.0 || tau >= 1.0)
        throw std::invalid_argument("oracle_inequality_samples: tau in (0,1) required");

    OracleInequalitySamples samples;
    samples.p = config.n - static_cast<int>(std::floor(tau * config.n));
    for (int r = 0; r < config.replicates; ++r) {
        const std::uint64_t seed_r = Rng::derive(config.master_seed, static_cast<std::uint64_t>(r));
        const ReplicateContext ctx = make_context(config, nullptr, r);
        samples.family_size = ctx.family.size();
        const double reference_risk = test_risk(*ctx.reference, *ctx.test);

        const SplitPlan plan = monte_carlo_splits(config.n, tau, V, plan_seed_for(seed_r, tau, V));
        const PlanEvaluation eval = evaluate_plan(ctx.family, *ctx.train, plan);
        const auto mv = agghoo_from_evaluation(eval, ctx.train->class_count());
        samples.agghoo_excess.push_back(test_risk(*mv, *ctx.test) - reference_risk);

        // Oracle over rules trained on the first training set (n - p rows).
        const DataPtr sub = subset(*ctx.train, plan.sets.front());
        double best = 0.0;
        for (std::size_t g = 0; g < ctx.family.size(); ++g) {
            const double excess = test_risk(*ctx.family[g].train(sub), *ctx.test) - reference_risk;
            if (g == 0 || excess < best) best = excess;
        }
        samples.oracle_excess.push_back(best);
    }
    return samples;
}

}  // namespace agghoo
