// cheb: command-line front end. Exit 0 on success, 1 on a failed verification, 2 on usage errors.

#include "cheb/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <unistd.h>

using namespace cheb;
namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    int n_max = 6;
    int depth = 12;
    std::string cache_dir;
    std::string output_format = "json";
    int parallelism = 1;
    std::string output;
};

std::string default_cache_dir() {
    if (const char* x = std::getenv("XDG_CACHE_HOME"); x && *x) return (fs::path(x) / "cheb").string();
    if (const char* h = std::getenv("HOME"); h && *h) return (fs::path(h) / ".cache" / "cheb").string();
    return "";
}

// JW projectors persist as cache_dir/jw/<n>.json; unreadable entries are recomputed
void load_jw_cache(const Config& cfg, int n) {
    if (cfg.cache_dir.empty()) return;
    for (int k = 0; k <= n; ++k) {
        if (JWCache::instance().lookup(k)) continue;
        std::ifstream in(fs::path(cfg.cache_dir) / "jw" / (std::to_string(k) + ".json"));
        if (!in) continue;
        try {
            TLElement p = tl_from_json(Json::parse(in));
            if (p.n() == k && p.m() == k) JWCache::instance().insert(k, p);
        } catch (const std::exception&) {
        }
    }
}

void store_jw_cache(const Config& cfg) {
    if (cfg.cache_dir.empty()) return;
    fs::path dir = fs::path(cfg.cache_dir) / "jw";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) return;
    for (auto& [k, p] : JWCache::instance().snapshot()) {
        fs::path f = dir / (std::to_string(k) + ".json");
        if (fs::exists(f)) continue;
        fs::path tmp = f;
        tmp += ".tmp" + std::to_string(::getpid());
        {
            std::ofstream out(tmp);
            out << to_json(p).dump() << "\n";
        }
        fs::rename(tmp, f, ec);
    }
}

void emit(const Config& cfg, const Json& j, const std::string& text) {
    std::string body = cfg.output_format == "text" ? text : j.dump(2) + "\n";
    if (cfg.output.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream out(cfg.output);
    if (!out) throw UsageError("cannot write " + cfg.output);
    out << body;
}

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    try {
        Json j = Json::parse(in);
        // projector and qn output wraps the complex
        if (j.is_object() && !j.contains("base") && j.contains("complex")) return j["complex"];
        return j;
    } catch (const Json::parse_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

Json coeff_map(const ZPoly& p, const std::string& prefix) {
    Json j = Json::object();
    for (auto& [k, c] : p.coeffs) j[prefix + std::to_string(k)] = to_json(c);
    return j;
}

std::string coeff_text(const ZPoly& p, const std::string& prefix) {
    std::string s;
    for (auto& [k, c] : p.coeffs) s += prefix + std::to_string(k) + ": " + c.to_string() + "\n";
    return s.empty() ? "0\n" : s;
}

Json graded_json(const std::map<int, int>& g) {
    Json j = Json::object();
    for (auto& [d, n] : g) j[std::to_string(d)] = n;
    return j;
}

std::string graded_text(const std::map<int, int>& g) {
    std::string s;
    for (auto& [d, n] : g) s += (s.empty() ? "" : " + ") + std::to_string(n) + " q^" + std::to_string(d);
    return s.empty() ? "0" : s;
}

template <class Base>
std::string complex_text(const Complex<Base>& c) {
    std::ostringstream s;
    s << Base::name << " complex " << c.n() << " -> " << c.m() << ", " << c.size() << " generators, " << c.entry_count() << " differential entries\n";
    for (auto& [id, g] : c.generators()) s << "  " << id << ": t^" << g.tdeg << " q^" << g.qshift << " " << Base::describe(g.object) << "\n";
    return s.str();
}

ChebyshevSystem system_named(const std::string& model, int n) {
    if (model == "khovanov") return khovanov_system(n);
    if (model == "jw") return jw_system(n);
    throw UsageError("unknown model '" + model + "' (khovanov or jw)");
}

TruncatedProjector projector_for(int n, int depth) {
    if (n == 1) return p1_complex();
    if (n == 2) return p2_complex(depth);
    if (n == 3) {
        if (depth < 16) throw UsageError("projector: n = 3 needs depth >= 16 for a nonempty safe window");
        return splice_pn(build_qn(3, p2_complex(depth + 8), depth), depth / 4 + 1, depth);
    }
    throw UsageError("projector: n <= 3 supported (P_n for n >= 4 needs the periodicity map on the spliced P_{n-1})");
}

struct Setting {
    std::string key;  // config-file key; the env var is CHEB_ + upper(key)
    CLI::Option* opt;
};

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    for (int no = 1; std::getline(in, line); ++no) {
        auto trim = [](std::string x) {
            x.erase(0, x.find_first_not_of(" \t\r"));
            x.erase(x.find_last_not_of(" \t\r") + 1);
            return x;
        };
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '-', '_');
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

// flags > CHEB_* env > config file > defaults
void resolve_settings(const std::vector<Setting>& settings, const char* config_path) {
    std::map<std::string, std::string> file;
    if (config_path && *config_path) file = read_config_file(config_path);
    for (auto& [key, value] : file)
        if (std::none_of(settings.begin(), settings.end(), [&](const Setting& s) { return s.key == key; }))
            throw UsageError(std::string("unknown config key '") + key + "' in " + config_path);
    for (auto& s : settings) {
        if (s.opt->count() > 0) continue;
        std::string env = "CHEB_" + s.key;
        std::transform(env.begin(), env.end(), env.begin(), [](unsigned char c) { return std::toupper(c); });
        std::optional<std::string> v;
        if (const char* e = std::getenv(env.c_str())) v = e;
        else if (auto it = file.find(s.key); it != file.end()) v = it->second;
        if (!v) continue;
        try {
            s.opt->add_result(*v);
            s.opt->run_callback();
        } catch (const CLI::Error& e) {
            throw UsageError(s.key + ": " + e.what());
        }
    }
}

Json verdict_json(const WindowVerdict& v) { return {{"contractible", v.contractible}, {"residual", v.residual}, {"evidence", v.evidence}}; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Temperley-Lieb, Bar-Natan and truncated projector computations"};
    app.require_subcommand(1);
    app.fallthrough();
    Config cfg;
    cfg.cache_dir = default_cache_dir();
    std::string config_file;
    app.add_option("--config", config_file, "key=value configuration file");
    std::vector<Setting> settings{
        {"n_max", app.add_option("--n-max", cfg.n_max, "largest n for verification suites")->check(CLI::PositiveNumber)},
        {"depth", app.add_option("--depth", cfg.depth, "truncation depth")->check(CLI::Range(2, 1 << 20))},
        {"cache_dir", app.add_option("--cache-dir", cfg.cache_dir, "disk cache for JW projectors; empty disables")},
        {"output_format", app.add_option("--format", cfg.output_format, "json or text")->check(CLI::IsMember({"json", "text"}))},
        {"parallelism", app.add_option("--jobs", cfg.parallelism, "parallel verification jobs")->check(CLI::PositiveNumber)},
    };
    app.add_option("-o,--output", cfg.output, "write to a file instead of stdout");

    int n = 0, imax = 2, k_filter = -1;
    bool central = false, primitive = false, triangle = false, chebyshev = false, hh0 = false, hh = false, acceptance = false, track = false;
    std::string model, theta_against, check, input, suite = "all", track_output;
    std::vector<int> window;

    auto* jw = app.add_subcommand("jw", "Jones-Wenzl projector p_n");
    jw->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);

    auto* idem = app.add_subcommand("idempotents", "central p_{n,k} or primitive p_eps idempotents");
    idem->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);
    auto* fc = idem->add_flag("--central", central);
    auto* fp = idem->add_flag("--primitive", primitive);
    fc->excludes(fp);
    idem->add_option("--k", k_filter, "only through-degree k");

    auto* colored = app.add_subcommand("colored", "colored complex V_n in a Chebyshev model");
    colored->add_option("--model", model)->required()->check(CLI::IsMember({"khovanov", "jw"}));
    colored->add_option("--n", n)->required()->check(CLI::NonNegativeNumber);
    colored->add_flag("--triangle", triangle, "check the distinguished triangle at n");
    colored->add_option("--theta-against", theta_against, "build theta equivalences to another model")->check(CLI::IsMember({"khovanov", "jw"}));

    auto* proj = app.add_subcommand("projector", "truncated categorified projector P_n");
    proj->add_option("--n", n)->required()->check(CLI::Range(1, 64));
    proj->add_option("--check", check)->check(CLI::IsMember({"turnbacks", "euler"}));

    auto* qn = app.add_subcommand("qn", "four-term complex Q_n with its solved homotopies");
    qn->add_option("--n", n)->required()->check(CLI::Range(2, 64));

    auto* simp = app.add_subcommand("simplify", "delooping and Gaussian elimination of a JSON complex");
    simp->add_option("--input", input)->required();
    simp->add_flag("--track", track, "also emit the equivalence maps f, g");
    simp->add_option("--track-output", track_output, "file for the equivalence maps");

    auto* trace = app.add_subcommand("trace-euler", "Euler characteristic of the annular closure");
    trace->add_option("--input", input)->required();
    trace->add_flag("--chebyshev", chebyshev, "coefficients in the basis S_k");
    trace->add_option("--window", window, "tdeg window LO HI")->expected(2);

    auto* arc = app.add_subcommand("arc", "arc algebra H^n and its quantum Hochschild homology");
    arc->add_option("--n", n)->required()->check(CLI::Range(1, 4));
    arc->add_flag("--hh0", hh0, "quantum coinvariants");
    arc->add_flag("--hh", hh, "truncated quantum bar complex");
    arc->add_option("--imax", imax)->check(CLI::Range(0, 3));

    auto* ver = app.add_subcommand("verify", "executable invariant suites");
    ver->add_option("--suite", suite)->check(CLI::IsMember({"coeff", "tl", "cob", "chebyshev", "projector", "annulus", "arc", "all"}));
    ver->add_flag("--acceptance", acceptance, "run acceptance criteria 1-9 instead of a suite");

    try {
        app.parse(argc, argv);
        resolve_settings(settings, config_file.empty() ? std::getenv("CHEB_CONFIG") : config_file.c_str());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "cheb: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*jw) {
            load_jw_cache(cfg, n);
            TLElement p = jones_wenzl(n);
            store_jw_cache(cfg);
            emit(cfg, to_json(p), p.to_string() + "\n");
            return 0;
        }
        if (*idem) {
            if (!central && !primitive) throw UsageError("idempotents: pass --central or --primitive");
            load_jw_cache(cfg, n);
            Json out = Json::array();
            std::string text;
            if (central) {
                for (int k = n % 2; k <= n; k += 2) {
                    if (k_filter >= 0 && k != k_filter) continue;
                    TLElement p = central_idempotent(n, k);
                    out.push_back({{"k", k}, {"element", to_json(p)}});
                    text += "p_{" + std::to_string(n) + "," + std::to_string(k) + "} = " + p.to_string() + "\n";
                }
            } else {
                for (auto& eps : admissible_sequences(n, k_filter)) {
                    TLElement p = primitive_idempotent(eps);
                    out.push_back({{"eps", eps.to_string()}, {"k", eps.total()}, {"element", to_json(p)}});
                    text += "p_" + eps.to_string() + " = " + p.to_string() + "\n";
                }
            }
            store_jw_cache(cfg);
            emit(cfg, out, text);
            return 0;
        }
        if (*colored) {
            load_jw_cache(cfg, n);
            int reach = std::max(n, 2);
            ChebyshevSystem s = system_named(model, reach);
            Json out;
            out["model"] = model;
            out["n"] = n;
            out["complex"] = to_json(s.V[static_cast<std::size_t>(n)]);
            std::string text = complex_text(s.V[static_cast<std::size_t>(n)]);
            bool ok = true;
            if (triangle) {
                if (n < 2) throw UsageError("colored: --triangle needs n >= 2");
                try {
                    auto w = triangle_check(s, n);
                    out["triangle"] = {{"ok", true}, {"cone_generators", w.cone.complex.size()}};
                    text += "triangle V(n-2) -> V(n-1) (x) V -> V(n): ok\n";
                } catch (const NotATriangle& e) {
                    ok = false;
                    out["triangle"] = {{"ok", false}, {"reason", e.what()}};
                    text += std::string("triangle: FAILED ") + e.what() + "\n";
                }
            }
            if (!theta_against.empty()) {
                ChebyshevSystem other = system_named(theta_against, reach);
                out["theta"] = Json::array();
                try {
                    for (auto& t : build_theta(s, other, n)) {
                        bool inv = verify_inverse(s.V[static_cast<std::size_t>(t.n)], other.V[static_cast<std::size_t>(t.n)], t.theta, t.inverse);
                        ok = ok && inv && t.right_square;
                        out["theta"].push_back({{"n", t.n}, {"entries", t.theta.size()}, {"equivalence", inv}, {"right_square", t.right_square}});
                        text += "theta^(" + std::to_string(t.n) + "): " + (inv && t.right_square ? "equivalence" : "FAILED") + "\n";
                    }
                } catch (const CompletionFailed& e) {
                    ok = false;
                    out["theta_error"] = e.what();
                    text += std::string("theta: FAILED ") + e.what() + "\n";
                }
            }
            store_jw_cache(cfg);
            emit(cfg, out, text);
            return ok ? 0 : 1;
        }
        if (*proj) {
            TruncatedProjector p = projector_for(n, cfg.depth);
            Json out;
            out["n"] = n;
            out["depth"] = n == 1 ? Json(nullptr) : Json(p.depth);
            out["safe_window"] = {p.safe_window.first, p.safe_window.second};
            std::string text = "P_" + std::to_string(n) + " safe window [" + std::to_string(p.safe_window.first) + ", 0]\n";
            bool ok = true;
            if (check == "turnbacks") {
                Json reps = Json::array();
                for (auto& r : kills_turnbacks(p)) {
                    ok = ok && r.left.contractible && r.right.contractible;
                    reps.push_back({{"i", r.i}, {"left", verdict_json(r.left)}, {"right", verdict_json(r.right)}});
                    text += "B" + std::to_string(r.i) + " * P: " + (r.left.contractible ? "contractible" : "NOT contractible") + ", P * cup: " +
                            (r.right.contractible ? "contractible" : "NOT contractible") + " on the window\n";
                }
                out["turnbacks"] = reps;
            } else if (check == "euler") {
                auto tt = trace_euler(p);
                ZPoly s = chebyshev_coefficients(tt.trace);
                ok = agree_below(s, ZPoly::monomial(n), tt.cutoff);
                out["chebyshev"] = coeff_map(s, "S_");
                out["cutoff"] = tt.cutoff == INT_MAX ? Json(nullptr) : Json(tt.cutoff);
                out["equals_S_n_below_cutoff"] = ok;
                text += coeff_text(s, "S_") + "cutoff q^" + std::to_string(tt.cutoff) + (ok ? ": agrees with S_" : ": DIFFERS from S_") + std::to_string(n) + "\n";
            }
            out["complex"] = to_json(p.complex);
            if (check.empty()) text += complex_text(p.complex);
            emit(cfg, out, text);
            return ok ? 0 : 1;
        }
        if (*qn) {
            if (n > 3) throw UsageError("qn: n <= 3 supported");
            TruncatedProjector prev = n == 2 ? p1_complex() : p2_complex(cfg.depth + 8);
            QnComplex q = build_qn(n, prev, cfg.depth);
            Json out;
            out["n"] = n;
            out["depth"] = cfg.depth;
            out["shifts"] = Json::array();
            for (auto& [t, s] : q.shifts) out["shifts"].push_back({t, s});
            out["terms"] = Json::array();
            for (auto& ids : q.terms) out["terms"].push_back(ids);
            out["h"] = to_json(q.h);
            out["k"] = to_json(q.k);
            out["gamma"] = to_json(q.gamma);
            out["complex"] = to_json(q.complex);
            std::string text = "Q_" + std::to_string(n) + " at depth " + std::to_string(cfg.depth) + ": h " + std::to_string(q.h.size()) + ", k " +
                               std::to_string(q.k.size()) + ", gamma " + std::to_string(q.gamma.size()) + " entries\n" + complex_text(q.complex);
            emit(cfg, out, text);
            return 0;
        }
        if (*simp) {
            Json in = read_json(input);
            std::string base = in.value("base", "");
            Json maps;
            std::string text;
            Json result;
            auto run = [&]<class B>(Complex<B> c, auto reduce) {
                Equivalence<B> eq;
                auto r = reduce(c, track ? &eq : nullptr);
                if (track) maps = {{"f", to_json(eq.f)}, {"g", to_json(eq.g)}, {"h", to_json(eq.h)}};
                result = to_json(r);
                text = complex_text(r);
            };
            if (base == "BN")
                run(complex_from_json<BNBase>(in), [](Complex<BNBase> c, Equivalence<BNBase>* t) { return simplify(std::move(c), t); });
            else if (base == "TL")
                run(complex_from_json<TLBase>(in), [](Complex<TLBase> c, Equivalence<TLBase>* t) {
                    if (t) *t = Equivalence<TLBase>::identity_on(c);
                    while (gaussian_eliminate(c, t) > 0) {
                    }
                    return c;
                });
            else
                throw UsageError(input + ": base must be TL or BN");
            if (track) {
                if (track_output.empty()) result = {{"complex", result}, {"equivalence", maps}};
                else {
                    std::ofstream out(track_output);
                    if (!out) throw UsageError("cannot write " + track_output);
                    out << maps.dump(2) << "\n";
                }
            }
            emit(cfg, result, text);
            return 0;
        }
        if (*trace) {
            Json in = read_json(input);
            auto c = complex_from_json<BNBase>(in);
            std::optional<std::pair<int, int>> w;
            if (!window.empty()) w = std::pair{window[0], window[1]};
            ZPoly t = trace_euler(c, w);
            if (chebyshev) t = chebyshev_coefficients(t);
            std::string prefix = chebyshev ? "S_" : "z^";
            emit(cfg, coeff_map(t, prefix), coeff_text(t, prefix));
            return 0;
        }
        if (*arc) {
            ArcAlgebra h(n);
            Json out;
            out["n"] = n;
            out["dimension"] = h.dim();
            out["graded_dimension"] = graded_json(h.graded_dimension());
            std::string text = "H^" + std::to_string(n) + ": dim " + std::to_string(h.dim()) + " = " + graded_text(h.graded_dimension()) + "\n";
            if (hh0) {
                auto r = quantum_coinvariants_rank(h);
                out["hh0"] = {{"rank", r.rank},
                              {"graded_dimension", graded_json(r.graded_dimension)},
                              {"idempotents_span", r.idempotents_span},
                              {"idempotents_independent", r.idempotents_independent}};
                text += "HH_0^q: rank " + std::to_string(r.rank) + " = " + graded_text(r.graded_dimension) + "\n";
            }
            if (hh) {
                if (n > 2) throw UsageError("arc: --hh supports n <= 2");
                auto r = quantum_hochschild_bar(n, imax);
                Json g = Json::array();
                for (auto& m : r.graded) g.push_back(graded_json(m));
                out["hh"] = {{"imax", imax}, {"ranks", r.ranks}, {"graded", g}};
                for (std::size_t i = 0; i < r.ranks.size(); ++i) text += "HH_" + std::to_string(i) + "^q: " + graded_text(r.graded[i]) + "\n";
            }
            emit(cfg, out, text);
            return 0;
        }
        if (*ver) {
            SuiteReport r;
            if (acceptance) {
                r.name = "acceptance";
                std::vector<Job> jobs;
                for (int k = 1; k <= 9; ++k)
                    jobs.emplace_back("criterion " + std::to_string(k), [k] {
                        auto c = acceptance_criterion(k);
                        return checks::Outcome{c.pass, c.name + ": " + c.witness};
                    });
                r.checks = run_jobs(jobs, cfg.parallelism);
            } else {
                r = verify_suite(suite, VerifyConfig{cfg.n_max, cfg.depth, cfg.parallelism});
            }
            std::string text;
            for (auto& c : r.checks) {
                char secs[32];
                std::snprintf(secs, sizeof secs, "%.2fs", c.seconds);
                text += std::string(c.pass ? "PASS " : "FAIL ") + c.name + " (" + secs + "): " + c.witness + "\n";
            }
            emit(cfg, to_json(r), text);
            return r.ok() ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "cheb: " << e.what() << "\n";
        return 2;
    } catch (const BadJson& e) {
        std::cerr << "cheb: bad input: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "cheb: bad input: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "cheb: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "cheb: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
