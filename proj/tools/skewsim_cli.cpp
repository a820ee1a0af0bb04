// skewsim: generate datasets, simulate one run, pick a secondary-PE count,
// sweep a parameter grid, and derive heatmap / speedup tables.

#include "CLI11.hpp"

#include "skewsim/analyzer.hpp"
#include "skewsim/config.hpp"
#include "skewsim/datagen.hpp"
#include "skewsim/report.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace skewsim;

namespace {

struct Common {
    std::string config;
    std::string dataset;
    std::string app = "histo";
    double alpha = 0.0;
    std::optional<std::uint32_t> m;
    std::optional<std::uint32_t> x;
    std::uint64_t seed = 0;
    std::string out;
    std::vector<std::string> params;
    std::uint64_t tuples = 1 << 20;
    std::uint64_t domain = 1 << 20;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "key=value architecture config file")->check(CLI::ExistingFile);
    cmd->add_option("--dataset", c.dataset, "SKTP tuple file or text edge list")->check(CLI::ExistingFile);
    cmd->add_option("--app", c.app, "histo|dp|pr|hll|hhd");
    cmd->add_option("--alpha", c.alpha, "Zipf factor");
    cmd->add_option("--m", c.m, "primary PEs");
    cmd->add_option("--x", c.x, "secondary PEs");
    cmd->add_option("--seed", c.seed, "dataset and run seed");
    cmd->add_option("--out", c.out, "output path (stdout if omitted)");
    cmd->add_option("--set", c.params, "config override key=value (repeatable)");
    cmd->add_option("--n", c.tuples, "tuples (or edges) to generate");
    cmd->add_option("--domain", c.domain, "key domain (vertex count for pr)");
}

ArchConfig build_config(const Common& c) {
    ArchConfig cfg = c.config.empty() ? ArchConfig{} : load_config_file(c.config);
    for (const auto& kv : c.params) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
        set_config_field(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (c.m) cfg.m_pripe = *c.m;
    if (c.x) cfg.x_secpe = *c.x;
    cfg.seed = c.seed;
    return validate_config(cfg);
}

bool is_tuple_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    char magic[4] = {};
    return in.read(magic, 4) && std::string(magic, 4) == "SKTP";
}

std::vector<TupleRecord> load_or_generate(const Common& c, AppKind kind) {
    if (c.dataset.empty()) return sweep_dataset(kind, c.tuples, c.alpha, c.domain, c.seed);
    if (is_tuple_file(c.dataset)) return read_tuples(c.dataset);
    return load_edge_list(c.dataset);
}

// Writes to --out when given, else stdout.
template <class Fn>
void emit(const std::string& out, Fn&& fn) {
    if (out.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream file(out);
    if (!file) throw DataError("cannot write '" + out + "'");
    fn(file);
    if (!file) throw DataError("write failed for '" + out + "'");
}

template <class T>
std::vector<T> split_list(const std::string& text, const char* what) {
    std::vector<T> out;
    std::istringstream in(text);
    for (std::string item; std::getline(in, item, ',');) {
        std::istringstream cell(item);
        T v{};
        if (!(cell >> v) || !cell.eof()) throw ConfigError(std::string("bad ") + what + " list entry '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(std::string("empty ") + what + " list");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skew-oblivious data routing simulator"};
    app.require_subcommand(1);

    Common gen_c, sim_c, ana_c, sweep_c, rep_c;

    auto* generate = app.add_subcommand("generate", "write a dataset file");
    add_common(generate, gen_c);
    std::string gen_kind = "zipf";
    std::uint64_t interval = 0, hot_key = 0;
    std::string seed_schedule;
    double degree = 16.0;
    std::uint16_t width = 8;
    generate->add_option("--kind", gen_kind, "zipf|single|evolving|graph")
        ->check(CLI::IsMember({"zipf", "single", "evolving", "graph"}));
    generate->add_option("--interval", interval, "tuples per segment (evolving)");
    generate->add_option("--seeds", seed_schedule, "comma-separated seed schedule (evolving)");
    generate->add_option("--key", hot_key, "the single key (single)");
    generate->add_option("--degree", degree, "average out-degree (graph)");
    generate->add_option("--width", width, "tuple width in bytes for the binary file");

    auto* simulate = app.add_subcommand("simulate", "run one configuration and print a CSV row");
    add_common(simulate, sim_c);
    bool sim_verify = false;
    std::uint32_t pr_iterations = 1;
    simulate->add_flag("--verify", sim_verify, "compare against the single-instance reference");
    simulate->add_option("--iterations", pr_iterations, "PageRank iterations");

    auto* analyze = app.add_subcommand("analyze", "choose the secondary-PE count for a dataset");
    add_common(analyze, ana_c);
    double tolerance = 0.01;
    std::string mode = "offline";
    analyze->add_option("--tolerance", tolerance, "allowed per-PE overload fraction, in (0, 1)");
    analyze->add_option("--mode", mode, "offline|online")->check(CLI::IsMember({"offline", "online"}));

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid and write CSV");
    add_common(sweep, sweep_c);
    std::string apps_list, alphas_list = "0,1,2,3", ms_list, xs_list = "0,1,2,4,8,15", seeds_list;
    bool sweep_verify = false;
    sweep->add_option("--apps", apps_list, "comma-separated apps (default: --app)");
    sweep->add_option("--alphas", alphas_list, "comma-separated Zipf factors");
    sweep->add_option("--ms", ms_list, "comma-separated primary counts (default: --m or config)");
    sweep->add_option("--xs", xs_list, "comma-separated secondary counts");
    sweep->add_option("--seeds", seeds_list, "comma-separated seeds (default: --seed)");
    sweep->add_flag("--verify", sweep_verify, "compare every run against the reference");

    auto* report = app.add_subcommand("report", "derive heatmap or speedup tables");
    add_common(report, rep_c);
    std::string rep_kind = "heatmap", rep_in, rep_alphas = "1,2,3";
    report->add_option("--kind", rep_kind, "heatmap|speedup")->check(CLI::IsMember({"heatmap", "speedup"}));
    report->add_option("--in", rep_in, "sweep CSV (speedup)");
    report->add_option("--alphas", rep_alphas, "comma-separated Zipf factors (heatmap)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) {
            if (gen_c.out.empty()) throw ConfigError("generate needs --out");
            if (gen_kind == "graph") {
                if (gen_c.domain > 0xffffffffULL) throw ConfigError("graph: --domain (vertex count) too large");
                write_edge_list(gen_c.out,
                                gen_graph(static_cast<std::uint32_t>(gen_c.domain), degree, gen_c.alpha, gen_c.seed));
            } else {
                std::vector<TupleRecord> data;
                if (gen_kind == "zipf") {
                    data = gen_zipf(gen_c.tuples, gen_c.alpha, gen_c.domain, gen_c.seed);
                } else if (gen_kind == "single") {
                    data = gen_single_key(gen_c.tuples, hot_key);
                } else {
                    const auto seeds = seed_schedule.empty() ? std::vector<std::uint64_t>{gen_c.seed, gen_c.seed + 1}
                                                             : split_list<std::uint64_t>(seed_schedule, "seed");
                    const auto len = interval ? interval : (gen_c.tuples + seeds.size() - 1) / seeds.size();
                    data = gen_evolving(gen_c.tuples, gen_c.alpha, len, gen_c.domain, seeds);
                }
                write_tuples(gen_c.out, data, width);
            }
            return 0;
        }

        if (*simulate) {
            const auto kind = parse_app(sim_c.app);
            const auto cfg = build_config(sim_c);
            const auto data = load_or_generate(sim_c, kind);
            AppOptions opts;
            opts.pr_iterations = pr_iterations;
            opts.hash_seed = sim_c.seed;
            const auto s = run_app(kind, cfg, data, opts, sim_verify);
            emit(sim_c.out, [&](std::ostream& os) {
                os << kCsvHeader << '\n'
                   << format_row({std::string(app_name(kind)), sim_c.alpha, cfg.m_pripe, cfg.x_secpe, sim_c.seed,
                                  s.cycles, s.tuples, s.throughput, s.stalls, s.reschedules})
                   << '\n';
            });
            if (!s.matches_reference) {
                std::cerr << "error: simulated result differs from the reference result\n";
                return 3;
            }
            return 0;
        }

        if (*analyze) {
            const auto kind = parse_app(ana_c.app);
            const auto cfg = build_config(ana_c);
            const auto data = load_or_generate(ana_c, kind);
            AnalyzerParams params;
            params.tolerance = tolerance;
            params.seed = ana_c.seed;
            AppOptions opts;
            opts.hash_seed = ana_c.seed;
            const auto sel = select_implementation(data, app_destination(kind, cfg.m_pripe, opts), cfg.m_pripe,
                                                   cfg.bram_capacity_c, mode == "online" ? SelectionMode::online
                                                                                         : SelectionMode::offline,
                                                   params);
            emit(ana_c.out, [&](std::ostream& os) {
                os << "x_secpe," << sel.x_secpe << "\ncapacity," << sel.capacity << '\n';
                if (!sel.histogram.empty()) {
                    os << "pe,samples\n";
                    for (std::size_t pe = 0; pe < sel.histogram.size(); ++pe) {
                        os << pe << ',' << sel.histogram[pe] << '\n';
                    }
                }
            });
            return 0;
        }

        if (*sweep) {
            SweepSpec spec;
            spec.base = build_config(sweep_c);
            spec.tuples = sweep_c.tuples;
            spec.domain = sweep_c.domain;
            spec.verify = sweep_verify;
            spec.apps.clear();
            for (const auto& name : split_list<std::string>(apps_list.empty() ? sweep_c.app : apps_list, "app")) {
                spec.apps.push_back(parse_app(name));
            }
            spec.alphas = split_list<double>(alphas_list, "alpha");
            spec.ms = ms_list.empty() ? std::vector<std::uint32_t>{spec.base.m_pripe}
                                      : split_list<std::uint32_t>(ms_list, "m");
            spec.xs = split_list<std::uint32_t>(xs_list, "x");
            spec.seeds = seeds_list.empty() ? std::vector<std::uint64_t>{sweep_c.seed}
                                            : split_list<std::uint64_t>(seeds_list, "seed");
            for (auto m : spec.ms) {
                for (auto x : spec.xs) {
                    auto probe = spec.base;
                    probe.m_pripe = m;
                    probe.x_secpe = x;
                    validate_config(probe);
                }
            }
            const auto rows = run_sweep(spec, sweep_threads());
            emit(sweep_c.out, [&](std::ostream& os) {
                os << kCsvHeader << '\n';
                for (const auto& r : rows) os << format_row(r) << '\n';
            });
            return 0;
        }

        if (*report) {
            if (rep_kind == "speedup") {
                if (rep_in.empty()) throw ConfigError("report --kind speedup needs --in <sweep.csv>");
                std::ifstream in(rep_in);
                if (!in) throw DataError("cannot open '" + rep_in + "'");
                const auto records = parse_csv(in);
                const auto rows = speedups(records);
                emit(rep_c.out, [&](std::ostream& os) { write_speedup_csv(os, rows); });
            } else {
                const auto kind = parse_app(rep_c.app);
                const auto cfg = build_config(rep_c);
                const auto alphas = split_list<double>(rep_alphas, "alpha");
                AppOptions opts;
                opts.hash_seed = rep_c.seed;
                const auto matrix =
                    workload_heatmap(kind, alphas, cfg.m_pripe, rep_c.tuples, rep_c.domain, rep_c.seed, opts);
                emit(rep_c.out, [&](std::ostream& os) { write_heatmap_csv(os, alphas, matrix); });
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
