#include "uavsim/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "uavsim/channel.hpp"
#include "uavsim/power.hpp"

namespace fs = std::filesystem;

namespace uavsim {

namespace {

bool verbose_logging() {
    const char* v = std::getenv("UAVSIM_VERBOSE");
    return v != nullptr && std::string(v) != "0";
}

std::string g12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string g10(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << content;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

// Core of cmd_train, shared with sweep workers. Throws on failure.
void run_training_job(const RunConfig& cfg, const fs::path& out_dir,
                      const std::string& resume_path, bool verbose,
                      const std::string& label) {
    fs::create_directories(out_dir);
    save_manifest(cfg, (out_dir / "manifest.cfg").string());

    Trainer trainer(cfg.env(), cfg.hyper(), cfg.weights(), cfg.seed);
    const bool resuming = !resume_path.empty();
    if (resuming) trainer.load_state(resume_path);

    const fs::path log_path = out_dir / "training_log.csv";
    const bool append = resuming && fs::exists(log_path) && fs::file_size(log_path) > 0;
    std::ofstream log(log_path, append ? std::ios::app : std::ios::trunc);
    if (!log) throw std::runtime_error("cannot open for writing: " + log_path.string());
    if (!append) log << training_log_header() << '\n';

    const fs::path state_path = out_dir / "trainer_state.txt";
    for (int e = trainer.episodes_done() + 1; e <= cfg.episodes; ++e) {
        const EpisodeRow row = trainer.run_episode();
        log << format_episode_row(row) << '\n';
        if (!log) throw std::runtime_error("write failed: " + log_path.string());
        if (verbose)
            std::cerr << label << "episode " << row.episode << '/' << cfg.episodes
                      << " return=" << g12(row.ret) << '\n';
        if (row.episode % cfg.checkpoint_every == 0) {
            trainer.actor().save(
                (out_dir / ("actor_ep" + std::to_string(row.episode) + ".mlp")).string());
            trainer.save_state(state_path.string());
        }
    }
    trainer.actor().save((out_dir / "actor_final.mlp").string());
    trainer.save_state(state_path.string());
}

} // namespace

std::string training_log_header() {
    return "episode,return,r_sum_mbit,e_harvest_uJ,e_consume_J,critic_loss,actor_obj,epsilon";
}

std::string format_episode_row(const EpisodeRow& row) {
    std::ostringstream os;
    os << row.episode << ',' << g12(row.ret) << ',' << g12(row.r_sum_mbit) << ','
       << g12(row.e_harvest_uj) << ',' << g12(row.e_consume_j) << ','
       << g12(row.critic_loss) << ',' << g12(row.actor_obj) << ','
       << g12(row.epsilon);
    return os.str();
}

std::string eval_report_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "episode,avg_rate_mbps,avg_power_w,harvested_uJ,hovers\n";
    for (const EvalEpisode& e : report.episodes)
        os << e.episode << ',' << g12(e.avg_rate_mbps) << ',' << g12(e.avg_power_w)
           << ',' << g12(e.harvested_uj) << ',' << e.hovers << '\n';
    os << "mean," << g12(report.mean_rate_mbps) << ',' << g12(report.mean_power_w)
       << ',' << g12(report.mean_harvested_uj) << ',' << g12(report.mean_hovers) << '\n';
    os << "std," << g12(report.std_rate_mbps) << ',' << g12(report.std_power_w) << ','
       << g12(report.std_harvested_uj) << ',' << g12(report.std_hovers) << '\n';
    return os.str();
}

std::string sweep_summary_header() {
    return "preset,w_dc,w_eh,w_ec,w_aux,seed,avg_rate_mbps,avg_power_w,harvested_uJ,hovers";
}

WeightVector preset_weights(const std::string& name) {
    if (name == "sodr") return {100.0, 1.0, 1.0, 1.0};
    if (name == "soec") return {1.0, 1.0, 100.0, 1.0};
    throw ConfigError("unknown sweep preset '" + name + "' (expected sodr or soec)");
}

std::vector<std::uint64_t> parse_seed_spec(const std::string& spec) {
    if (spec.empty()) throw ConfigError("empty seed spec");
    std::vector<std::uint64_t> seeds;
    const auto parse_one = [](const std::string& tok) -> std::uint64_t {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad seed value '" + tok + "'");
        }
        if (used != tok.size()) throw ConfigError("bad seed value '" + tok + "'");
        return v;
    };
    const auto range = spec.find("..");
    if (range != std::string::npos) {
        const std::uint64_t lo = parse_one(spec.substr(0, range));
        const std::uint64_t hi = parse_one(spec.substr(range + 2));
        if (hi < lo) throw ConfigError("seed range '" + spec + "' is descending");
        if (hi - lo > 10000) throw ConfigError("seed range '" + spec + "' is too large");
        for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
        return seeds;
    }
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) throw ConfigError("empty entry in seed list '" + spec + "'");
        seeds.push_back(parse_one(tok));
    }
    if (seeds.empty()) throw ConfigError("empty seed spec");
    return seeds;
}

RunConfig resolve_config(const std::string& config_path,
                         std::optional<std::uint64_t> seed) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (seed) cfg.seed = *seed;
    cfg.validate();
    return cfg;
}

int cmd_train(const TrainOptions& opt) {
    RunConfig cfg;
    try {
        cfg = resolve_config(opt.config_path, opt.seed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        run_training_job(cfg, opt.out_dir, opt.resume_path, verbose_logging(), "");
    } catch (const std::exception& e) {
        std::cerr << "train failed: " << e.what() << '\n';
        return kExitRuntime;
    }
    std::cout << "train: " << cfg.episodes << " episodes done, artifacts in "
              << opt.out_dir << '\n';
    return kExitOk;
}

int cmd_eval(const EvalOptions& opt) {
    RunConfig cfg;
    try {
        cfg = resolve_config(opt.config_path, opt.seed);
        if (opt.episodes <= 0) throw ConfigError("eval episodes must be > 0");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const Mlp actor = Mlp::load(opt.checkpoint_path);
        fs::create_directories(opt.out_dir);
        std::optional<std::ofstream> trace;
        if (!opt.trace_path.empty()) {
            const fs::path parent = fs::path(opt.trace_path).parent_path();
            if (!parent.empty()) fs::create_directories(parent);
            trace.emplace(opt.trace_path);
            if (!*trace)
                throw std::runtime_error("cannot open for writing: " + opt.trace_path);
        }
        const EvalReport report = evaluate(actor, cfg.env(), opt.episodes, cfg.seed,
                                           trace ? &*trace : nullptr);
        write_file(fs::path(opt.out_dir) / "eval_report.csv", eval_report_csv(report));
        std::cout << "eval: " << opt.episodes << " episodes avg_rate_mbps="
                  << g12(report.mean_rate_mbps) << " avg_power_w="
                  << g12(report.mean_power_w) << " harvested_uJ="
                  << g12(report.mean_harvested_uj) << " hovers="
                  << g12(report.mean_hovers) << '\n';
    } catch (const std::exception& e) {
        std::cerr << "eval failed: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

int cmd_curves(const CurvesOptions& opt) {
    RunConfig cfg;
    try {
        cfg = resolve_config(opt.config_path, std::nullopt);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        const EnvConfig env = cfg.env();
        fs::create_directories(opt.out_dir);

        std::ostringstream prop;
        prop << "v_mps,power_w\n";
        for (int i = 0; i <= 200; ++i) {
            const double v = i / 10.0;
            prop << g10(v) << ',' << g10(propulsion_power(v, env.propulsion)) << '\n';
        }
        write_file(fs::path(opt.out_dir) / "propulsion_power.csv", prop.str());

        std::ostringstream eh;
        eh << "pr_uw,harvested_uw\n";
        for (int i = 0; i <= 1000; ++i) {
            const double pr_uw = i / 10.0;
            eh << g10(pr_uw) << ','
               << g10(harvested_power(pr_uw * 1e-6, env.eh) * 1e6) << '\n';
        }
        write_file(fs::path(opt.out_dir) / "harvested_power.csv", eh.str());

        std::ostringstream los;
        los << "theta_deg,p_los\n";
        for (int i = 1; i <= 900; ++i) {
            const double theta = i / 10.0;
            los << g10(theta) << ',' << g10(los_probability(theta, env.channel)) << '\n';
        }
        write_file(fs::path(opt.out_dir) / "los_probability.csv", los.str());
    } catch (const std::exception& e) {
        std::cerr << "curves failed: " << e.what() << '\n';
        return kExitRuntime;
    }
    std::cout << "curves: wrote propulsion_power.csv, harvested_power.csv, "
                 "los_probability.csv to " << opt.out_dir << '\n';
    return kExitOk;
}

int cmd_sweep(const SweepOptions& opt) {
    RunConfig base;
    std::vector<WeightVector> wvs;
    try {
        base = resolve_config(opt.config_path, std::nullopt);
        if (opt.presets.empty()) throw ConfigError("sweep needs at least one preset");
        if (opt.seeds.empty()) throw ConfigError("sweep needs at least one seed");
        if (opt.jobs <= 0) throw ConfigError("sweep jobs must be > 0");
        if (opt.eval_episodes <= 0) throw ConfigError("sweep eval episodes must be > 0");
        for (const std::string& p : opt.presets) wvs.push_back(preset_weights(p));
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    struct Run {
        std::string preset;
        WeightVector w;
        std::uint64_t seed = 0;
        fs::path dir;
        bool ok = false;
        std::string error;
        EvalReport report;
    };
    std::vector<Run> runs;
    for (std::size_t p = 0; p < opt.presets.size(); ++p)
        for (std::uint64_t seed : opt.seeds) {
            Run r;
            r.preset = opt.presets[p];
            r.w = wvs[p];
            r.seed = seed;
            r.dir = fs::path(opt.out_dir) /
                    (opt.presets[p] + "_seed" + std::to_string(seed));
            runs.push_back(std::move(r));
        }

    try {
        fs::create_directories(opt.out_dir);
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << '\n';
        return kExitRuntime;
    }

    const bool verbose = verbose_logging();
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            Run& run = runs[i];
            try {
                RunConfig cfg = base;
                cfg.w_dc = run.w.w_dc;
                cfg.w_eh = run.w.w_eh;
                cfg.w_ec = run.w.w_ec;
                cfg.w_aux = run.w.w_aux;
                cfg.seed = run.seed;
                run_training_job(cfg, run.dir, "", false,
                                 run.preset + " seed " + std::to_string(run.seed) + ": ");
                const Mlp actor = Mlp::load((run.dir / "actor_final.mlp").string());
                run.report = evaluate(actor, cfg.env(), opt.eval_episodes, cfg.seed);
                run.ok = true;
                if (verbose)
                    std::cerr << "sweep run " << run.preset << " seed " << run.seed
                              << " done\n";
            } catch (const std::exception& e) {
                run.ok = false;
                run.error = e.what();
            }
        }
    };
    const int n_workers =
        std::min<int>(opt.jobs, static_cast<int>(runs.size()) > 0
                                    ? static_cast<int>(runs.size())
                                    : 1);
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::ostringstream summary;
    summary << sweep_summary_header() << '\n';
    std::ostringstream failures;
    int failed = 0;
    for (const Run& run : runs) {
        if (!run.ok) {
            ++failed;
            failures << run.preset << " seed " << run.seed << ": " << run.error << '\n';
            continue;
        }
        summary << run.preset << ',' << g12(run.w.w_dc) << ',' << g12(run.w.w_eh) << ','
                << g12(run.w.w_ec) << ',' << g12(run.w.w_aux) << ',' << run.seed << ','
                << g12(run.report.mean_rate_mbps) << ','
                << g12(run.report.mean_power_w) << ','
                << g12(run.report.mean_harvested_uj) << ','
                << g12(run.report.mean_hovers) << '\n';
    }
    try {
        write_file(fs::path(opt.out_dir) / "sweep_summary.csv", summary.str());
        if (failed > 0)
            write_file(fs::path(opt.out_dir) / "sweep_failures.txt", failures.str());
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << '\n';
        return kExitRuntime;
    }
    if (failed > 0) {
        std::cerr << "sweep: " << failed << " of " << runs.size()
                  << " runs failed (see sweep_failures.txt)\n";
        return kExitPartial;
    }
    std::cout << "sweep: " << runs.size() << " runs done, summary in "
              << (fs::path(opt.out_dir) / "sweep_summary.csv").string() << '\n';
    return kExitOk;
}

GradcheckReport run_gradcheck(std::uint64_t seed, int nets) {
    Rng rng(Rng::derive_seed(seed, 7));
    GradcheckReport report;
    report.nets = nets;
    const double eps = 1e-5;
    const std::array<Act, 4> act_pool{Act::relu, Act::sigmoid, Act::tanh, Act::linear};

    for (int n = 0; n < nets; ++n) {
        const int hidden_layers = static_cast<int>(rng.uniform_index(3)); // 0..2
        std::vector<int> sizes;
        sizes.push_back(1 + static_cast<int>(rng.uniform_index(8)));
        for (int h = 0; h < hidden_layers; ++h)
            sizes.push_back(1 + static_cast<int>(rng.uniform_index(16)));
        sizes.push_back(1 + static_cast<int>(rng.uniform_index(2)));
        std::vector<Act> acts;
        for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
            acts.push_back(act_pool[rng.uniform_index(act_pool.size())]);

        Mlp net = Mlp::init(sizes, acts, rng);

        // Keep every relu pre-activation away from its kink so the central
        // difference stays on one linear piece.
        std::vector<double> x(static_cast<std::size_t>(sizes.front()));
        bool margin_ok = false;
        for (int attempt = 0; attempt < 200 && !margin_ok; ++attempt) {
            for (double& xi : x) xi = rng.uniform(-1.0, 1.0);
            net.forward(x);
            margin_ok = true;
            std::vector<double> cur = x;
            for (const Layer& layer : net.layers) {
                std::vector<double> z(static_cast<std::size_t>(layer.fan_out));
                for (int r = 0; r < layer.fan_out; ++r) {
                    double acc = layer.b[static_cast<std::size_t>(r)];
                    for (int c = 0; c < layer.fan_in; ++c)
                        acc += layer.w[static_cast<std::size_t>(r) * layer.fan_in + c] *
                               cur[static_cast<std::size_t>(c)];
                    z[static_cast<std::size_t>(r)] = acc;
                    if (layer.act == Act::relu && std::abs(acc) < 2e-3) margin_ok = false;
                }
                for (int r = 0; r < layer.fan_out; ++r) {
                    const double zi = z[static_cast<std::size_t>(r)];
                    switch (layer.act) {
                        case Act::relu: z[static_cast<std::size_t>(r)] = zi > 0 ? zi : 0; break;
                        case Act::sigmoid: z[static_cast<std::size_t>(r)] = 1.0 / (1.0 + std::exp(-zi)); break;
                        case Act::tanh: z[static_cast<std::size_t>(r)] = std::tanh(zi); break;
                        case Act::linear: z[static_cast<std::size_t>(r)] = zi; break;
                    }
                }
                cur = std::move(z);
            }
        }

        std::vector<double> weighting(static_cast<std::size_t>(sizes.back()));
        for (double& c : weighting) c = rng.uniform(-1.0, 1.0);

        net.forward(x);
        const auto [grads, dx] = net.backward(weighting);

        const auto loss_at = [&]() {
            const std::vector<double> y = net.predict(x);
            double s = 0.0;
            for (std::size_t k = 0; k < y.size(); ++k) s += weighting[k] * y[k];
            return s;
        };

        for (std::size_t l = 0; l < net.layers.size(); ++l) {
            auto check_array = [&](std::vector<double>& params,
                                   const std::vector<double>& analytic) {
                for (std::size_t i = 0; i < params.size(); ++i) {
                    const double saved = params[i];
                    params[i] = saved + eps;
                    const double fp = loss_at();
                    params[i] = saved - eps;
                    const double fm = loss_at();
                    params[i] = saved;
                    const double fd = (fp - fm) / (2.0 * eps);
                    const double a = analytic[i];
                    const double denom = std::max({std::abs(a), std::abs(fd), 1e-3});
                    const double err = std::abs(a - fd) / denom;
                    if (err > report.max_rel_err) report.max_rel_err = err;
                    ++report.params_checked;
                }
            };
            check_array(net.layers[l].w, grads.layers[l].dw);
            check_array(net.layers[l].b, grads.layers[l].db);
        }
    }
    report.pass = report.max_rel_err < 1e-4;
    return report;
}

int cmd_gradcheck() {
    const GradcheckReport report = run_gradcheck(1);
    std::cout << "gradcheck: nets=" << report.nets << " params="
              << report.params_checked << " max_rel_err=" << g12(report.max_rel_err)
              << (report.pass ? " PASS" : " FAIL") << '\n';
    return report.pass ? kExitOk : kExitRuntime;
}

} // namespace uavsim
