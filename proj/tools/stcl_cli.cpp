// Batch front-end: parses setup configs, runs rate / steady-state / current
// computations and the verification suite, and emits plot-ready tables.
// Links the shared C API only.

#include <clocale>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stcl/stcl.h"

namespace {

struct SweepSpec {
    std::string var;  // eps0 | mu | T | gamma0
    double lo = 0.0, hi = 0.0;
    int n = 0;
};

struct ResonantParams {
    double eps0 = 0.0, gamma0 = 1.0, mu = 0.0, cutoff = 1e6, temperature = 1.0;
};

int fail_with(stcl_status st, const std::string& context) {
    std::fprintf(stderr, "error: %s: %s\n", context.c_str(), stcl_last_error());
    return st == STCL_ERR_VALIDATION ? 1 : 2;
}

std::optional<SweepSpec> parse_sweep(const std::string& text, std::string& err) {
    SweepSpec s;
    std::istringstream in(text);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(in, tok, ':')) parts.push_back(tok);
    if (parts.size() != 4) {
        err = "sweep must be <var>:<lo>:<hi>:<n>";
        return std::nullopt;
    }
    s.var = parts[0];
    if (s.var != "eps0" && s.var != "mu" && s.var != "T" && s.var != "gamma0") {
        err = "sweep variable must be one of eps0, mu, T, gamma0";
        return std::nullopt;
    }
    try {
        s.lo = std::stod(parts[1]);
        s.hi = std::stod(parts[2]);
        s.n = std::stoi(parts[3]);
    } catch (...) {
        err = "bad sweep bounds";
        return std::nullopt;
    }
    if (!(s.n >= 2) || !std::isfinite(s.lo) || !std::isfinite(s.hi)) {
        err = "sweep needs finite bounds and n >= 2";
        return std::nullopt;
    }
    return s;
}

// Minimal scan of a config file for the [resonant_level] shortcut, which is
// what makes a setup sweepable.
std::optional<ResonantParams> scan_resonant(const std::string& path) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    ResonantParams p;
    bool found = false;
    std::string line, section;
    while (std::getline(in, line)) {
        const size_t h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        const size_t a = line.find_first_not_of(" \t\r\n");
        if (a == std::string::npos) continue;
        const size_t b = line.find_last_not_of(" \t\r\n");
        const std::string s = line.substr(a, b - a + 1);
        if (s.front() == '[') {
            section = s.substr(1, s.size() - 2);
            if (section == "resonant_level") found = true;
            continue;
        }
        const size_t eq = s.find('=');
        if (eq == std::string::npos) continue;
        std::string key = s.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        const double val = std::atof(s.c_str() + eq + 1);
        if (section.empty() && key == "temperature") p.temperature = val;
        if (section == "resonant_level") {
            if (key == "eps0") p.eps0 = val;
            else if (key == "gamma0") p.gamma0 = val;
            else if (key == "mu") p.mu = val;
            else if (key == "cutoff") p.cutoff = val;
        }
    }
    return found ? std::optional<ResonantParams>(p) : std::nullopt;
}

stcl_setup* make_resonant(const ResonantParams& p, int& exit_code) {
    stcl_setup* s = nullptr;
    const stcl_status st = stcl_setup_resonant_level(p.eps0, p.gamma0, p.mu,
                                                     p.temperature, p.cutoff, &s);
    if (st != STCL_OK) exit_code = fail_with(st, "resonant level setup");
    return s;
}

ResonantParams with_sweep_value(ResonantParams p, const std::string& var, double v) {
    if (var == "eps0") p.eps0 = v;
    else if (var == "mu") p.mu = v;
    else if (var == "T") p.temperature = v;
    else if (var == "gamma0") p.gamma0 = v;
    return p;
}

// 17 significant digits, stable across runs.
std::string num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class TableWriter {
public:
    TableWriter(std::string format, std::vector<std::string> columns)
        : format_(std::move(format)), columns_(std::move(columns)) {}

    void row(const std::vector<double>& values) { rows_.push_back(values); }

    void emit() const {
        if (format_ == "csv") {
            for (size_t c = 0; c < columns_.size(); ++c)
                std::printf("%s%s", c ? "," : "", columns_[c].c_str());
            std::printf("\n");
            for (const auto& r : rows_) {
                for (size_t c = 0; c < r.size(); ++c)
                    std::printf("%s%s", c ? "," : "", num(r[c]).c_str());
                std::printf("\n");
            }
        } else {
            std::printf("{\n  \"columns\": [");
            for (size_t c = 0; c < columns_.size(); ++c)
                std::printf("%s\"%s\"", c ? ", " : "", columns_[c].c_str());
            std::printf("],\n  \"rows\": [\n");
            for (size_t k = 0; k < rows_.size(); ++k) {
                std::printf("    [");
                for (size_t c = 0; c < rows_[k].size(); ++c)
                    std::printf("%s%s", c ? ", " : "", num(rows_[k][c]).c_str());
                std::printf("]%s\n", k + 1 < rows_.size() ? "," : "");
            }
            std::printf("  ]\n}\n");
        }
    }

private:
    std::string format_;
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

int check_cutoff(stcl_setup* setup) {
    double drift = 0.0;
    const stcl_status st = stcl_cutoff_drift(setup, &drift);
    if (st != STCL_OK) return fail_with(st, "cutoff check");
    std::fprintf(stderr, "cutoff doubling drift: %s\n", num(drift).c_str());
    if (drift > 1e-8) {
        std::fprintf(stderr,
                     "warning: order-4 rates depend on the band cutoff; the coupling "
                     "sum rule (state-independent sum of squared amplitudes per "
                     "reservoir) is violated\n");
    }
    return 0;
}

// Computes the order-gamma0 / order-gamma0^2 truncations of the exact
// results by Richardson central differences through the C API.
double taylor1(double (*f)(double g, const ResonantParams&), const ResonantParams& p) {
    const double h0 = 1e-3 * p.temperature;
    double d[4];
    for (int k = 0; k < 4; ++k) {
        const double h = h0 / (1 << k);
        d[k] = (f(h, p) - f(-h, p)) / (2.0 * h);
    }
    for (int lev = 1; lev < 4; ++lev) {
        const double fac = std::pow(4.0, lev);
        for (int k = 3; k >= lev; --k) d[k] = (fac * d[k] - d[k - 1]) / (fac - 1.0);
    }
    return d[3];
}

double taylor2(double (*f)(double g, const ResonantParams&), const ResonantParams& p) {
    const double h0 = 1e-3 * p.temperature;
    const double f0 = f(0.0, p);
    double d[4];
    for (int k = 0; k < 4; ++k) {
        const double h = h0 / (1 << k);
        d[k] = (f(h, p) - 2.0 * f0 + f(-h, p)) / (h * h);
    }
    for (int lev = 1; lev < 4; ++lev) {
        const double fac = std::pow(4.0, lev);
        for (int k = 3; k >= lev; --k) d[k] = (fac * d[k] - d[k - 1]) / (fac - 1.0);
    }
    return 0.5 * d[3];
}

double occ_at(double g, const ResonantParams& p) {
    double v = 0.0;
    stcl_exact_occupation(p.eps0, g, p.temperature, &v);
    return v;
}

double cur_at(double g, const ResonantParams& p) {
    double v = 0.0;
    stcl_exact_current(p.eps0, g, p.mu, p.temperature, &v);
    return v;
}

int run_fig(const std::string& which, const SweepSpec& sweep, const std::string& format,
            const ResonantParams& base, bool do_check) {
    const bool occupation = which == "occupation";
    std::vector<std::string> cols;
    if (occupation)
        cols = {"eps0", "p0_occupied", "p2_occupied", "exact", "exact_taylor"};
    else
        cols = {"eps0", "i2_right", "i4_right", "exact", "exact_taylor"};
    TableWriter table(format, cols);

    for (int k = 0; k < sweep.n; ++k) {
        const double v = sweep.lo + (sweep.hi - sweep.lo) * k / (sweep.n - 1);
        ResonantParams p = with_sweep_value(base, sweep.var, v);
        int code = 0;
        stcl_setup* setup = make_resonant(p, code);
        if (!setup) return code;
        if (do_check && k == 0) check_cutoff(setup);

        stcl_steady* steady = nullptr;
        stcl_status st = stcl_steady_solve(setup, &steady);
        if (st != STCL_OK) {
            stcl_setup_free(setup);
            return fail_with(st, "steady state");
        }
        double p0[2], p2[2];
        stcl_steady_p0(steady, p0);
        stcl_steady_p2(steady, p2);

        if (occupation) {
            const double exact = occ_at(p.gamma0, p);
            const double trunc = occ_at(0.0, p) + taylor1(occ_at, p) * p.gamma0;
            table.row({v, p0[1], p2[1], exact, trunc});
        } else {
            double i2 = 0.0, i4 = 0.0;
            st = stcl_current(setup, steady, 2, &i2, &i4, nullptr);
            if (st != STCL_OK) {
                stcl_steady_free(steady);
                stcl_setup_free(setup);
                return fail_with(st, "current");
            }
            const double exact = cur_at(p.gamma0, p);
            const double trunc =
                taylor1(cur_at, p) * p.gamma0 + taylor2(cur_at, p) * p.gamma0 * p.gamma0;
            table.row({v, i2, i4, exact, trunc});
        }
        stcl_steady_free(steady);
        stcl_setup_free(setup);
    }
    table.emit();
    return 0;
}

void print_matrix_csv(const char* name, int n, const std::vector<double>& m) {
    for (int i = 0; i < n; ++i) {
        std::printf("%s", name);
        for (int f = 0; f < n; ++f) std::printf(",%s", num(m[i * n + f]).c_str());
        std::printf("\n");
    }
}

} // namespace

int main(int argc, char** argv) {
    std::setlocale(LC_ALL, "C");
    CLI::App app{"steady-state transport rates for small open quantum systems"};
    app.require_subcommand(1);

    std::string setup_path, sweep_text, format = "csv";
    std::vector<std::string> tol_overrides;
    bool do_check = false;
    int order = 4;

    app.add_option("--setup", setup_path, "setup config file (text or JSON)");
    app.add_option("--sweep", sweep_text, "sweep spec <var>:<lo>:<hi>:<n>");
    app.add_option("--order", order, "expansion order (2 or 4)")
        ->check(CLI::IsMember({2, 4}));
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_flag("--check-cutoff", do_check, "report cutoff-doubling drift of S4");
    app.add_option("--tol", tol_overrides, "tolerance override name=value (repeatable)");

    auto* cmd_rates = app.add_subcommand("rates", "dump rate matrices");
    auto* cmd_steady = app.add_subcommand("steady", "steady-state probabilities");
    auto* cmd_current = app.add_subcommand("current", "per-reservoir currents");
    auto* cmd_fig_occ =
        app.add_subcommand("fig-occupation", "equilibrium occupation sweep");
    auto* cmd_fig_cur = app.add_subcommand("fig-current", "biased current sweep");
    auto* cmd_verify = app.add_subcommand("verify", "run the verification suite");
    for (auto* cmd : {cmd_rates, cmd_steady, cmd_current, cmd_fig_occ, cmd_fig_cur, cmd_verify})
        cmd->fallthrough();
    int verify_criterion = 0;
    bool verify_quick = false;
    cmd_verify->add_option("--criterion", verify_criterion, "run one criterion (1..8)");
    cmd_verify->add_flag("--quick", verify_quick, "shrink the long quadrature checks");

    CLI11_PARSE(app, argc, argv);

    // Tolerance overrides ride on the documented environment knobs.
    for (const auto& t : tol_overrides) {
        const size_t eq = t.find('=');
        if (eq == std::string::npos) {
            std::fprintf(stderr, "error: --tol expects name=value\n");
            return 1;
        }
        std::string name = "STCL_TOL_";
        for (char c : t.substr(0, eq)) name += static_cast<char>(std::toupper(c));
        setenv(name.c_str(), t.c_str() + eq + 1, 1);
    }

    if (cmd_verify->parsed()) {
        char* report = nullptr;
        int n_failed = 0;
        const stcl_status st = stcl_verify(verify_criterion, verify_quick ? 1 : 0,
                                           &report, &n_failed);
        if (st != STCL_OK) return fail_with(st, "verify");
        std::printf("%s", report);
        stcl_string_free(report);
        if (n_failed > 0) {
            std::fprintf(stderr, "verify: %d criterion(s) failed\n", n_failed);
            return 2;
        }
        return 0;
    }

    if (cmd_fig_occ->parsed() || cmd_fig_cur->parsed()) {
        SweepSpec sweep{"eps0", -10.0, 10.0, 41};
        if (!sweep_text.empty()) {
            std::string err;
            auto s = parse_sweep(sweep_text, err);
            if (!s) {
                std::fprintf(stderr, "error: %s\n", err.c_str());
                return 1;
            }
            sweep = *s;
        }
        ResonantParams base;
        base.gamma0 = 3.141592653589793;
        base.temperature = 1.0;
        base.cutoff = 1e6;
        base.mu = cmd_fig_cur->parsed() ? 6.0 : 0.0;
        if (!setup_path.empty()) {
            auto p = scan_resonant(setup_path);
            if (!p) {
                std::fprintf(stderr,
                             "error: --setup for figure sweeps must use the "
                             "[resonant_level] form\n");
                return 1;
            }
            base = *p;
        }
        return run_fig(cmd_fig_occ->parsed() ? "occupation" : "current", sweep, format,
                       base, do_check);
    }

    // The remaining subcommands need a setup.
    if (setup_path.empty()) {
        std::fprintf(stderr, "error: --setup is required\n");
        return 1;
    }

    // Sweeps only apply to the resonant-level shortcut form.
    std::optional<SweepSpec> sweep;
    if (!sweep_text.empty()) {
        std::string err;
        sweep = parse_sweep(sweep_text, err);
        if (!sweep) {
            std::fprintf(stderr, "error: %s\n", err.c_str());
            return 1;
        }
        if (!scan_resonant(setup_path)) {
            std::fprintf(stderr,
                         "error: sweep variable %s does not apply to this setup "
                         "(only [resonant_level] setups are sweepable)\n",
                         sweep->var.c_str());
            return 1;
        }
    }

    std::vector<ResonantParams> points;
    stcl_setup* fixed_setup = nullptr;
    if (sweep) {
        const auto base = *scan_resonant(setup_path);
        for (int k = 0; k < sweep->n; ++k) {
            const double v = sweep->lo + (sweep->hi - sweep->lo) * k / (sweep->n - 1);
            points.push_back(with_sweep_value(base, sweep->var, v));
        }
    } else {
        const stcl_status st = stcl_setup_from_file(setup_path.c_str(), &fixed_setup);
        if (st != STCL_OK) return fail_with(st, setup_path);
    }

    auto for_each_setup = [&](auto&& fn) -> int {
        if (fixed_setup) {
            const int rc = fn(fixed_setup, 0.0, false);
            stcl_setup_free(fixed_setup);
            return rc;
        }
        for (size_t k = 0; k < points.size(); ++k) {
            int code = 0;
            stcl_setup* s = make_resonant(points[k], code);
            if (!s) return code;
            const double sweep_value =
                sweep->lo + (sweep->hi - sweep->lo) * k / (sweep->n - 1);
            const int rc = fn(s, sweep_value, true);
            stcl_setup_free(s);
            if (rc != 0) return rc;
        }
        return 0;
    };

    if (cmd_rates->parsed()) {
        return for_each_setup([&](stcl_setup* s, double sv, bool in_sweep) -> int {
            const int n = stcl_setup_num_states(s);
            std::vector<double> m(static_cast<size_t>(n) * n);
            if (do_check) check_cutoff(s);
            if (in_sweep) std::printf("# sweep %s = %s\n", sweep->var.c_str(), num(sv).c_str());
            if (order == 2 || order == 4) {
                stcl_status st = stcl_rate_matrix(s, 2, m.data());
                if (st != STCL_OK) return fail_with(st, "rates order 2");
                print_matrix_csv("s2", n, m);
            }
            if (order == 4) {
                stcl_status st = stcl_rate_matrix(s, 4, m.data());
                if (st != STCL_OK) return fail_with(st, "rates order 4");
                print_matrix_csv("s4", n, m);
            }
            return 0;
        });
    }

    if (cmd_steady->parsed()) {
        bool header = false;
        std::vector<std::string> cols;
        std::vector<std::vector<double>> rows;
        const int rc = for_each_setup([&](stcl_setup* s, double sv, bool in_sweep) -> int {
            const int n = stcl_setup_num_states(s);
            if (!header) {
                cols.push_back(in_sweep ? sweep->var : std::string("point"));
                for (int k = 0; k < n; ++k) cols.push_back("p0_" + std::to_string(k));
                for (int k = 0; k < n; ++k) cols.push_back("p2_" + std::to_string(k));
                header = true;
            }
            if (do_check) check_cutoff(s);
            stcl_steady* steady = nullptr;
            stcl_status st = stcl_steady_solve(s, &steady);
            if (st != STCL_OK) return fail_with(st, "steady state");
            std::vector<double> p0(static_cast<size_t>(n)), p2(static_cast<size_t>(n));
            stcl_steady_p0(steady, p0.data());
            stcl_steady_p2(steady, p2.data());
            stcl_steady_free(steady);
            std::vector<double> row{in_sweep ? sv : 0.0};
            row.insert(row.end(), p0.begin(), p0.end());
            row.insert(row.end(), p2.begin(), p2.end());
            rows.push_back(row);
            return 0;
        });
        if (rc != 0) return rc;
        TableWriter out(format, cols);
        for (auto& r : rows) out.row(r);
        out.emit();
        return 0;
    }

    if (cmd_current->parsed()) {
        std::vector<std::string> cols;
        std::vector<std::vector<double>> rows;
        bool header = false;
        const int rc = for_each_setup([&](stcl_setup* s, double sv, bool in_sweep) -> int {
            const int nr = stcl_setup_num_reservoirs(s);
            if (!header) {
                cols.push_back(in_sweep ? sweep->var : std::string("point"));
                for (int k = 0; k < nr; ++k) {
                    const std::string lab = std::to_string(stcl_setup_reservoir_label(s, k));
                    cols.push_back("i2_r" + lab);
                    cols.push_back("i4_r" + lab);
                    cols.push_back("i4_seq_r" + lab);
                    cols.push_back("i4_cot_r" + lab);
                    cols.push_back("i4_vas_r" + lab);
                }
                header = true;
            }
            if (do_check) check_cutoff(s);
            stcl_steady* steady = nullptr;
            stcl_status st = stcl_steady_solve(s, &steady);
            if (st != STCL_OK) return fail_with(st, "steady state");
            std::vector<double> row{in_sweep ? sv : 0.0};
            for (int k = 0; k < nr; ++k) {
                double i2 = 0.0, i4 = 0.0, br[3] = {0, 0, 0};
                st = stcl_current(s, steady, stcl_setup_reservoir_label(s, k), &i2, &i4, br);
                if (st != STCL_OK) {
                    stcl_steady_free(steady);
                    return fail_with(st, "current");
                }
                row.push_back(i2);
                row.push_back(i4);
                row.push_back(br[0]);
                row.push_back(br[1]);
                row.push_back(br[2]);
            }
            stcl_steady_free(steady);
            rows.push_back(row);
            return 0;
        });
        if (rc != 0) return rc;
        TableWriter out(format, cols);
        for (auto& r : rows) out.row(r);
        out.emit();
        return 0;
    }

    return 0;
}
