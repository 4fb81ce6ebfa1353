#include "ellweyl/cli.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ellweyl/json_io.hpp"

namespace ellweyl
{

namespace
{

json read_json_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
}

WeylWord word_from_json(const json &j)
{
    if (j.is_string()) {
        return WeylWord::parse(j.get<std::string>());
    }
    if (j.is_array()) {
        std::vector<int> letters;
        for (const json &x : j) {
            if (!x.is_number_integer()) {
                throw InputError("word entries must be integers");
            }
            letters.push_back(x.get<int>());
        }
        return WeylWord(std::move(letters));
    }
    throw InputError("word must be a string like \"0,1,2\" or a list of integers");
}

json class_json(const std::vector<Integer> &coeffs, const std::string &text)
{
    return json{{"coeffs", integer_list_json(coeffs)}, {"class", text}};
}

json matrix_rows_json(const ActionMatrix &m)
{
    json rows = json::array();
    for (std::size_t r = 0; r < m.dim(); ++r) {
        rows.push_back(integer_list_json(m.row(r)));
    }
    return rows;
}

struct LatticeArgs {
    int n = 2;
    int m = 9;
    std::string word;
    std::string cls;
    bool curve = false;
    bool pullback = false;
    int depth = 4;
};

struct OrbitArgs {
    std::string params;
    std::string word;
    int steps = 1;
};

struct VerifyArgs {
    std::string config;
    bool random = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> word;
    std::optional<std::string> compare;
    std::string mode = "word";
    std::optional<int> probes;
    int trials = 1;
    unsigned threads = 0;
    bool timing = false;
    ConfigTolerances tol;
    Real tol_verify = 1e-6;
};

struct ConfigArgs {
    std::string file;
    std::string word;
    bool normalize = false;
};

int cmd_lattice(const std::string &sub, const LatticeArgs &a, std::ostream &out)
{
    const LatticeSignature sig(a.n, a.m);
    json res{{"n", a.n}, {"m", a.m}};
    if (sub == "act") {
        const WeylWord w = WeylWord::parse(a.word);
        w.validate(sig);
        res["word"] = w.letters();
        const ActionMatrix push = word_pushforward(w, sig);
        if (a.curve) {
            const CurveClass d = parse_curve(a.cls, sig);
            const CurveClass img = push.apply_curve(d);
            res["input"] = class_json(d.coeffs(), d.str());
            res["image"] = class_json(img.coeffs(), img.str());
        } else {
            const DivisorClass d = parse_divisor(a.cls, sig);
            const DivisorClass img = push.apply(d);
            res["input"] = class_json(d.coeffs(), d.str());
            res["image"] = class_json(img.coeffs(), img.str());
        }
    } else if (sub == "matrix") {
        const WeylWord w = WeylWord::parse(a.word);
        w.validate(sig);
        const ActionMatrix mat = a.pullback ? word_pullback(w, sig) : word_pushforward(w, sig);
        res["word"] = w.letters();
        res["kind"] = a.pullback ? "pullback" : "pushforward";
        res["matrix"] = matrix_rows_json(mat);
        res["determinant"] = integer_list_json({mat.determinant()})[0];
    } else if (sub == "dynkin") {
        res["adjacency"] = dynkin_adjacency(sig);
    } else {
        res["depth"] = a.depth;
        if (!a.cls.empty()) {
            const DivisorClass d = parse_divisor(a.cls, sig);
            const auto w = find_root_word(d, a.depth);
            res["class"] = d.str();
            res["member"] = w.has_value();
            if (w) {
                res["word"] = w->letters();
            }
        } else {
            json classes = json::array();
            for (const DivisorClass &d : root_orbit(sig, a.depth)) {
                classes.push_back(class_json(d.coeffs(), d.str()));
            }
            res["count"] = classes.size();
            res["classes"] = classes;
        }
    }
    out << res.dump(2) << '\n';
    return 0;
}

json state_json(std::size_t step, const TorusParams &p, std::optional<Complex> s)
{
    json j{{"step", step}};
    if (p.eps) {
        j["eps"] = complex_json(*p.eps);
    }
    j["u"] = complex_list_json(p.u);
    if (s) {
        j["s"] = complex_json(*s);
    }
    return j;
}

int cmd_orbit(const OrbitArgs &a, std::ostream &out)
{
    if (a.steps < 1) {
        throw InputError("--steps must be >= 1");
    }
    TorusParams state = params_from_json(read_json_file(a.params));
    const WeylWord w = WeylWord::parse(a.word);
    w.validate(state.sig);
    const bool weier = state.kind() == EmbeddingKind::weierstrass;
    out << state_json(0, state, weier ? std::optional<Complex>(Complex(0.0, 0.0)) : std::nullopt).dump() << '\n';
    for (int step = 1; step <= a.steps; ++step) {
        const TorusTrajectory traj = torus_word(w, state);
        state = traj.params;
        try {
            state.validate();
        } catch (const DegenerateInput &e) {
            out << json{{"step", step}, {"error", e.what()}}.dump() << '\n';
            return 1;
        }
        out << state_json(static_cast<std::size_t>(step), state, weier ? std::optional<Complex>(traj.total) : std::nullopt)
                   .dump()
            << '\n';
    }
    return 0;
}

Real config_distance(const PointConfig &a, const PointConfig &b)
{
    const CMatrix na = normalize_frame(a).first.points();
    const CMatrix nb = normalize_frame(b).first.points();
    return (na - nb).cwiseAbs().maxCoeff();
}

int cmd_verify(const VerifyArgs &a, std::ostream &out)
{
    const json cfg = read_json_file(a.config);
    const std::uint64_t seed = a.seed ? *a.seed : (cfg.contains("seed") ? cfg.at("seed").get<std::uint64_t>() : 1);
    VerifyOptions opt;
    opt.tol = a.tol;
    opt.tol_verify = a.tol_verify;
    opt.probes = a.probes ? *a.probes : (cfg.contains("probes") ? cfg.at("probes").get<int>() : 10);
    if (opt.probes < 1) {
        throw InputError("probes must be >= 1");
    }
    if (a.trials < 1) {
        throw InputError("--trials must be >= 1");
    }
    WeylWord word;
    if (a.word) {
        word = WeylWord::parse(*a.word);
    } else if (cfg.contains("word")) {
        word = word_from_json(cfg.at("word"));
    }

    auto timed = [&](auto &&fn) {
        const auto t0 = std::chrono::steady_clock::now();
        auto r = fn();
        if (a.timing) {
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        return r;
    };

    if (a.mode == "word") {
        if (a.trials > 1 && !a.random) {
            throw InputError("--trials needs --random");
        }
        std::vector<VerifyTask> tasks;
        for (int k = 0; k < a.trials; ++k) {
            Rng rng(a.trials > 1 ? derive_seed(seed, static_cast<std::uint64_t>(k)) : seed);
            TorusParams params = params_from_json(cfg, a.random ? &rng : nullptr);
            word.validate(params.sig);
            std::vector<Complex> probes;
            for (int r = 0; r < opt.probes; ++r) {
                probes.push_back(random_torus_point(rng, params.modulus));
            }
            tasks.push_back({word, std::move(params), std::move(probes)});
        }
        if (a.compare) {
            const WeylWord other = WeylWord::parse(*a.compare);
            other.validate(tasks.front().params.sig);
            const VerifyTask &t = tasks.front();
            const VerificationReport r1 = timed([&] { return verify_word(word, t.params, t.probes, opt); });
            const VerificationReport r2 = timed([&] { return verify_word(other, t.params, t.probes, opt); });
            const Real state_dist =
                params_distance(torus_word(word, t.params).params, torus_word(other, t.params).params);
            const PointConfig start(t.params.sig, configuration_matrix(t.params));
            const Real cfg_dist = config_distance(apply_word(word, start), apply_word(other, start));
            const bool equal = state_dist < default_tol_torus && cfg_dist < a.tol.projective;
            json res{{"word", word.letters()},
                     {"compare", other.letters()},
                     {"state_distance", state_dist},
                     {"config_distance", cfg_dist},
                     {"equal", equal},
                     {"reports", json::array({report_json(r1), report_json(r2)})},
                     {"pass", equal && r1.pass && r2.pass}};
            out << res.dump(2) << '\n';
            return res["pass"].get<bool>() ? 0 : 1;
        }
        if (a.trials == 1) {
            const VerifyTask &t = tasks.front();
            VerificationReport r = timed([&] { return verify_word(t.word, t.params, t.probes, opt); });
            json res = report_json(r);
            res["seed"] = seed;
            out << res.dump(2) << '\n';
            return r.pass ? 0 : 1;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<VerificationReport> reports = verify_batch(tasks, opt, a.threads);
        json list = json::array();
        bool all = true;
        for (const auto &r : reports) {
            list.push_back(report_json(r));
            all = all && r.pass;
        }
        json res{{"seed", seed}, {"trials", a.trials}, {"reports", list}, {"pass", all}};
        if (a.timing) {
            res["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        }
        out << res.dump(2) << '\n';
        return all ? 0 : 1;
    }

    Rng rng(seed);
    const TorusParams params = params_from_json(cfg, a.random ? &rng : nullptr);
    json res;
    if (a.mode == "gdecomp") {
        const GCase which = params.kind() == EmbeddingKind::weierstrass ? GCase::weierstrass_cremona
                                                                         : GCase::kmnoy_r_n1_n2;
        res = gdecomp_json(verify_g_decomposition(which, params));
    } else if (a.mode == "prop32") {
        TorusParams partner = cfg.contains("partner") ? params_from_json(cfg.at("partner"))
                                                      : random_params(EmbeddingKind::kmnoy, params.sig, params.modulus, rng);
        res = prop32_json(verify_prop32(embedding_for(params), embedding_for(partner), rng));
        res["partner"] = params_json(partner);
    } else if (a.mode == "shift") {
        if (word.size() != 1) {
            throw InputError("--mode shift needs a single generator as the word");
        }
        std::vector<Complex> probes;
        for (int r = 0; r < opt.probes; ++r) {
            probes.push_back(random_torus_point(rng, params.modulus));
        }
        const ShiftMeasurement sm = measure_weierstrass_shift(word[0], params, probes);
        res = shift_json(sm);
        res["word"] = word.letters();
        res["pass"] = sm.torsion_defect < default_tol_torus && sm.residual_formula < default_tol_torus;
    } else {
        throw InputError("--mode must be one of word, gdecomp, prop32, shift");
    }
    res["params"] = params_json(params);
    out << res.dump(2) << '\n';
    return res["pass"].get<bool>() ? 0 : 1;
}

int cmd_config(const ConfigArgs &a, std::ostream &out)
{
    const PointConfig cfg = config_from_json(read_json_file(a.file));
    const WeylWord w = WeylWord::parse(a.word);
    PointConfig res = apply_word(w, cfg);
    json j;
    j["word"] = w.letters();
    if (a.normalize) {
        auto [norm, h] = normalize_frame(res);
        j["normalizing_map"] = rows_json(h.normalized());
        res = norm;
    }
    const GenericityReport gen = genericity_check(res);
    j["config"] = config_json(res);
    j["genericity"] = {{"min_scaled_minor", gen.min_scaled_minor}, {"worst", gen.worst}, {"pass", gen.pass}};
    out << j.dump(2) << '\n';
    return 0;
}

int report_error(std::ostream &out, std::ostream &err, const std::string &kind, const std::string &msg, int code)
{
    out << json{{"error", msg}, {"kind", kind}}.dump(2) << '\n';
    err << "ellweyl: " << msg << '\n';
    return code;
}

} // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Weyl group actions on point configurations and elliptic parameter dynamics", "ellweyl"};
    app.require_subcommand(1);

    LatticeArgs la;
    auto *lattice = app.add_subcommand("lattice", "Picard lattice queries");
    lattice->require_subcommand(1);
    auto add_sig = [&](CLI::App *c) {
        c->add_option("--n", la.n, "dimension of the projective space")->required();
        c->add_option("--m", la.m, "number of points")->required();
    };
    auto *l_act = lattice->add_subcommand("act", "apply a word to a divisor (or curve) class");
    add_sig(l_act);
    l_act->add_option("--word", la.word, "comma separated generators, applied left to right")->required();
    l_act->add_option("--class", la.cls, "symbolic class such as E-E_1-E_2")->required();
    l_act->add_flag("--curve", la.curve, "the class is a curve class in e, e_i");
    auto *l_matrix = lattice->add_subcommand("matrix", "push-forward (or pull-back) matrix of a word");
    add_sig(l_matrix);
    l_matrix->add_option("--word", la.word, "comma separated generators")->required();
    l_matrix->add_flag("--pullback", la.pullback, "print w^* instead of w_*");
    auto *l_dynkin = lattice->add_subcommand("dynkin", "adjacency matrix of the Dynkin diagram");
    add_sig(l_dynkin);
    auto *l_orbit = lattice->add_subcommand("orbit", "bounded orbit of alpha_0");
    add_sig(l_orbit);
    l_orbit->add_option("--depth", la.depth, "maximal word length")->check(CLI::NonNegativeNumber);
    l_orbit->add_option("--class", la.cls, "test membership of this class instead of listing");

    OrbitArgs oa;
    auto *orbit = app.add_subcommand("orbit", "iterate a word on torus parameters (JSON lines)");
    orbit->add_option("--params", oa.params, "parameter file")->required();
    orbit->add_option("--word", oa.word, "comma separated generators")->required();
    orbit->add_option("--steps", oa.steps, "number of iterations");

    VerifyArgs va;
    auto *verify = app.add_subcommand("verify", "compare the geometric and the torus action");
    verify->add_option("--config", va.config, "configuration file")->required();
    verify->add_flag("--random", va.random, "draw u (and eps) from the seed instead of the file");
    verify->add_option("--seed", va.seed, "random seed");
    verify->add_option("--word", va.word, "word overriding the file");
    verify->add_option("--compare", va.compare, "second word expected to act identically");
    verify->add_option("--mode", va.mode, "word | gdecomp | prop32 | shift");
    verify->add_option("--probes", va.probes, "number of fiber probes");
    verify->add_option("--trials", va.trials, "independent random trials (with --random)");
    verify->add_option("--threads", va.threads, "worker threads for trials (0: all cores)");
    verify->add_flag("--timing", va.timing, "add wall clock seconds to the report");
    verify->add_option("--tol-det", va.tol.det, "scaled minor threshold");
    verify->add_option("--tol-projective", va.tol.projective, "projective equality threshold");
    verify->add_option("--tol-verify", va.tol_verify, "residual threshold for a pass");

    ConfigArgs ca;
    auto *config = app.add_subcommand("config", "apply a word to an explicit point configuration");
    config->add_option("--file", ca.file, "configuration file")->required();
    config->add_option("--word", ca.word, "comma separated generators")->required();
    config->add_flag("--normalize", ca.normalize, "bring the result to the standard frame");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        return report_error(out, err, "parse", e.what(), 2);
    }

    try {
        if (*lattice) {
            for (auto *sub : {l_act, l_matrix, l_dynkin, l_orbit}) {
                if (*sub) {
                    return cmd_lattice(sub->get_name(), la, out);
                }
            }
        }
        if (*orbit) {
            return cmd_orbit(oa, out);
        }
        if (*verify) {
            return cmd_verify(va, out);
        }
        return cmd_config(ca, out);
    } catch (const InputError &e) {
        return report_error(out, err, "parse", e.what(), 2);
    } catch (const json::exception &e) {
        return report_error(out, err, "parse", e.what(), 2);
    } catch (const DegenerateInput &e) {
        return report_error(out, err, "degenerate", e.what(), 1);
    } catch (const std::invalid_argument &e) {
        return report_error(out, err, "parse", e.what(), 2);
    } catch (const std::exception &e) {
        return report_error(out, err, "domain", e.what(), 1);
    }
}

} // namespace ellweyl
