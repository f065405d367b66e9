#include <vlint/cli.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <vlint/models.hpp>
#include <vlint/reference.hpp>
#include <vlint/tableaus.hpp>

namespace vlint::cli {

namespace {

using json = nlohmann::json;

const std::vector<std::string> default_convergence_methods{"gauss1",     "gauss2",   "gauss3",  "radau_iia3",
                                                           "lobatto2",   "lobatto3", "lobatto4"};

template <typename T>
void read_key(const json& j, const char* key, T& dst)
{
    if (auto it = j.find(key); it != j.end()) {
        try {
            dst = it->get<T>();
        } catch (const json::exception& e) {
            throw config_error_exception(std::string("config key '") + key + "': " + e.what());
        }
    }
}

jacobian_mode parse_jacobian_mode(const std::string& s)
{
    if (s == "exact") {
        return jacobian_mode::exact;
    }
    if (s == "simplified") {
        return jacobian_mode::simplified;
    }
    throw config_error_exception("jacobian_mode must be 'exact' or 'simplified', got '" + s + "'");
}

initial_guess_mode parse_guess_mode(const std::string& s)
{
    if (s == "el_field") {
        return initial_guess_mode::el_field;
    }
    if (s == "zero") {
        return initial_guess_mode::zero;
    }
    throw config_error_exception("initial_guess_mode must be 'el_field' or 'zero', got '" + s + "'");
}

const char* to_string(jacobian_mode m) { return m == jacobian_mode::exact ? "exact" : "simplified"; }
const char* to_string(initial_guess_mode m) { return m == initial_guess_mode::el_field ? "el_field" : "zero"; }

void validate(const run_config& cfg)
{
    if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) {
        throw config_error_exception("h must be positive");
    }
    if (!(cfg.t_final > 0.0) || !std::isfinite(cfg.t_final)) {
        throw config_error_exception("t_final must be positive");
    }
    if (!(cfg.reference_h > 0.0)) {
        throw config_error_exception("reference_h must be positive");
    }
    if (cfg.max_samples < 2) {
        throw config_error_exception("max_samples must be at least 2");
    }
    try {
        cfg.solver.validate();
    } catch (const vlint::error& e) {
        throw config_error_exception(e.what());
    }
}

std::filesystem::path output_dir(const run_config& cfg)
{
    std::filesystem::path dir = cfg.out_dir;
    std::filesystem::create_directories(dir);
    return dir;
}

json manifest_base(const run_config& cfg, const velocity_linear_system& sys, const vector& q0)
{
    return json{{"model", sys.name},
                {"t_final", cfg.t_final},
                {"q0", q0},
                {"newton_tol", cfg.solver.newton_tol},
                {"max_newton_iters", cfg.solver.max_newton_iters},
                {"jacobian_mode", to_string(cfg.solver.jacobian)},
                {"initial_guess_mode", to_string(cfg.solver.initial_guess)},
                {"version", version}};
}

void write_manifest(const std::filesystem::path& path, const json& manifest)
{
    std::ofstream out(path);
    out << manifest.dump(2) << '\n';
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

run_config parse_config(const std::string& json_text, run_config base)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw config_error_exception(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw config_error_exception("config must be a JSON object");
    }
    static const std::vector<std::string> known{
        "model",        "method",        "methods",    "h",           "t_final",          "q0",
        "e",            "a_axis",        "h0",         "gammas",      "separation",       "newton_tol",
        "max_newton_iters", "jacobian_mode", "initial_guess_mode", "step_sizes", "h_max", "h_min",
        "step_count",   "reference_h",   "error_floor", "max_samples", "out_dir"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw config_error_exception("unknown config key '" + key + "'");
        }
    }

    read_key(j, "model", base.model);
    read_key(j, "method", base.method);
    read_key(j, "methods", base.methods);
    read_key(j, "h", base.h);
    read_key(j, "t_final", base.t_final);
    if (j.contains("q0")) {
        vector q0;
        read_key(j, "q0", q0);
        base.q0 = std::move(q0);
    }
    read_key(j, "e", base.e);
    read_key(j, "a_axis", base.a_axis);
    if (j.contains("h0")) {
        double h0 = 0.0;
        read_key(j, "h0", h0);
        base.h0 = h0;
    }
    read_key(j, "gammas", base.gammas);
    read_key(j, "separation", base.separation);
    read_key(j, "newton_tol", base.solver.newton_tol);
    read_key(j, "max_newton_iters", base.solver.max_newton_iters);
    if (j.contains("jacobian_mode")) {
        std::string m;
        read_key(j, "jacobian_mode", m);
        base.solver.jacobian = parse_jacobian_mode(m);
    }
    if (j.contains("initial_guess_mode")) {
        std::string m;
        read_key(j, "initial_guess_mode", m);
        base.solver.initial_guess = parse_guess_mode(m);
    }
    read_key(j, "step_sizes", base.step_sizes);
    read_key(j, "h_max", base.h_max);
    read_key(j, "h_min", base.h_min);
    read_key(j, "step_count", base.step_count);
    read_key(j, "reference_h", base.reference_h);
    read_key(j, "error_floor", base.error_floor);
    read_key(j, "max_samples", base.max_samples);
    if (j.contains("out_dir")) {
        std::string dir;
        read_key(j, "out_dir", dir);
        base.out_dir = dir;
    }
    return base;
}

run_config load_config_file(const std::filesystem::path& path, run_config base)
{
    std::ifstream in(path);
    if (!in) {
        throw config_error_exception("cannot read config file '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), std::move(base));
}

velocity_linear_system make_model(const run_config& cfg)
{
    try {
        if (cfg.model == "kepler") {
            kepler_params p{cfg.e, cfg.a_axis, cfg.h0.value_or(-0.5)};
            return kepler_system(p);
        }
        if (cfg.model == "vortex2" || cfg.model == "vortex") {
            vortex_params p{cfg.gammas, cfg.h0.value_or(0.0)};
            return vortex_system(p);
        }
        if (cfg.model == "lotka_volterra") {
            return lotka_volterra_system({cfg.h0.value_or(2.0)});
        }
        if (cfg.model == "toy") {
            return toy_system();
        }
    } catch (const vlint::error& e) {
        throw config_error_exception(e.what());
    }
    throw config_error_exception("unknown model '" + cfg.model + "'");
}

vector default_initial_state(const run_config& cfg)
{
    if (cfg.q0) {
        return *cfg.q0;
    }
    if (cfg.model == "kepler") {
        return kepler_pericenter({cfg.e, cfg.a_axis, cfg.h0.value_or(-0.5)});
    }
    if (cfg.model == "vortex2" || cfg.model == "vortex") {
        if (cfg.gammas.size() != 2) {
            throw config_error_exception("q0 is required for more than two vortices");
        }
        return vortex_pair_initial({cfg.gammas, 0.0}, cfg.separation);
    }
    if (cfg.model == "lotka_volterra") {
        return {1.0, 1.0};
    }
    if (cfg.model == "toy") {
        return {1.0, 2.0};
    }
    throw config_error_exception("unknown model '" + cfg.model + "'");
}

namespace {

struct prepared {
    velocity_linear_system sys;
    vector q0;
};

prepared prepare(const run_config& cfg)
{
    validate(cfg);
    auto sys = make_model(cfg);
    auto q0 = default_initial_state(cfg);
    if (q0.size() != sys.n) {
        throw config_error_exception("q0 has " + std::to_string(q0.size()) + " entries, model expects " +
                                     std::to_string(sys.n));
    }
    return {std::move(sys), std::move(q0)};
}

partitioned_tableau method_or_config_error(const std::string& id)
{
    try {
        return tableau_by_id(id);
    } catch (const vlint::error& e) {
        throw config_error_exception(e.what());
    }
}

} // namespace

int cmd_run(const run_config& cfg, std::ostream& log)
{
    const auto [sys, q0] = prepare(cfg);
    const auto tab = method_or_config_error(cfg.method);
    const auto dir = output_dir(cfg);

    std::ofstream csv(dir / "trajectory.csv");
    csv << "t";
    for (std::size_t i = 1; i <= sys.n; ++i) {
        csv << ",q" << i;
    }
    for (std::size_t i = 1; i <= sys.n; ++i) {
        csv << ",p" << i;
    }
    csv << ",constraint_residual,newton_iters\n";

    auto write_row = [&](const phase_point& x, int iters) {
        csv << format_double(x.t);
        for (double v : x.q) {
            csv << ',' << format_double(v);
        }
        for (double v : x.p) {
            csv << ',' << format_double(v);
        }
        csv << ',' << format_double(constraint_residual(sys, x)) << ',' << iters << '\n';
    };

    const auto steps = static_cast<std::size_t>(std::llround(std::ceil(cfg.t_final / cfg.h - 1e-9)));
    phase_point x = consistent_init(sys, q0);
    write_row(x, 0);

    bool truncated = false;
    std::string failure;
    std::size_t done = 0;
    try {
        for (; done < steps; ++done) {
            const double step = (done + 1 == steps) ? cfg.t_final - static_cast<double>(done) * cfg.h : cfg.h;
            auto [next, report] = prk_step(sys, tab, step, x, cfg.solver);
            next.t = (done + 1 == steps) ? cfg.t_final : static_cast<double>(done + 1) * cfg.h;
            x = std::move(next);
            write_row(x, report.iterations);
        }
    } catch (const vlint::error& e) {
        truncated = true;
        failure = e.what();
    }
    csv.close();

    auto manifest = manifest_base(cfg, sys, q0);
    manifest["command"] = "run";
    manifest["method"] = tab.name;
    manifest["h"] = cfg.h;
    manifest["steps_completed"] = done;
    manifest["truncated"] = truncated;
    if (truncated) {
        manifest["failure"] = failure;
    }
    write_manifest(dir / "trajectory.manifest.json", manifest);

    if (truncated) {
        log << "solver failure after " << done << " steps: " << failure << '\n';
        return solver_divergence;
    }
    log << "wrote " << (dir / "trajectory.csv").string() << " (" << steps << " steps)\n";
    return ok;
}

int cmd_convergence(const run_config& cfg, std::ostream& log)
{
    const auto [sys, q0] = prepare(cfg);
    std::vector<partitioned_tableau> methods;
    for (const auto& id : cfg.methods.empty() ? default_convergence_methods : cfg.methods) {
        methods.push_back(method_or_config_error(id));
    }
    std::vector<double> hs = cfg.step_sizes;
    if (hs.empty()) {
        try {
            hs = dividing_step_sizes(cfg.t_final, cfg.h_max, cfg.h_min, cfg.step_count);
        } catch (const vlint::error& e) {
            throw config_error_exception(e.what());
        }
    }
    for (std::size_t i = 1; i < hs.size(); ++i) {
        if (!(hs[i] < hs[i - 1])) {
            throw config_error_exception("step_sizes must be strictly decreasing");
        }
    }
    const auto dir = output_dir(cfg);

    reference_endpoint ref;
    std::string reference_kind;
    if (sys.name == "vortex2" && !cfg.q0) {
        ref.q = vortex_exact({cfg.gammas, 0.0}, cfg.separation, cfg.t_final);
        reference_kind = "closed_form";
    } else {
        const auto traj = reference_solution(sys, q0, cfg.t_final, cfg.reference_h, 2);
        ref.q = traj.back().q;
        reference_kind = "verner6";
    }
    ref.p = sys.alpha(ref.q);

    convergence_options opts;
    opts.error_floor = cfg.error_floor;
    opts.solver = cfg.solver;

    std::ofstream csv(dir / "convergence.csv");
    csv << "method,h,err_q,err_p,fitted_order\n";
    json orders = json::object();
    for (const auto& tab : methods) {
        const auto rep = run_convergence(sys, tab, q0, cfg.t_final, hs, ref, opts);
        for (std::size_t i = 0; i < hs.size(); ++i) {
            csv << tab.name << ',' << format_double(hs[i]) << ',' << optional_cell(rep.errors[i]) << ','
                << optional_cell(rep.errors_p[i]) << ",\n";
        }
        csv << tab.name << ",,,," << optional_cell(rep.fitted_order) << '\n';
        orders[tab.name] = rep.fitted_order ? json(*rep.fitted_order) : json(nullptr);
        log << tab.name << ": fitted order "
            << (rep.fitted_order ? format_double(*rep.fitted_order) : std::string("n/a")) << '\n';
    }
    csv.close();

    auto manifest = manifest_base(cfg, sys, q0);
    manifest["command"] = "convergence";
    manifest["methods"] = json::array();
    for (const auto& tab : methods) {
        manifest["methods"].push_back(tab.name);
    }
    manifest["step_sizes"] = hs;
    manifest["reference"] = reference_kind;
    manifest["reference_h"] = cfg.reference_h;
    manifest["error_floor"] = cfg.error_floor;
    manifest["fitted_orders"] = orders;
    manifest["truncated"] = false;
    write_manifest(dir / "convergence.manifest.json", manifest);
    return ok;
}

int cmd_drift(const run_config& cfg, std::ostream& log)
{
    const auto [sys, q0] = prepare(cfg);
    const auto tab = method_or_config_error(cfg.method);
    const auto dir = output_dir(cfg);

    const auto rep = run_drift(sys, tab, q0, cfg.h, cfg.t_final, cfg.max_samples, cfg.solver);

    std::ofstream csv(dir / "drift.csv");
    csv << "t,H,constraint_residual\n";
    for (std::size_t i = 0; i < rep.sample_times.size(); ++i) {
        csv << format_double(rep.sample_times[i]) << ',' << format_double(rep.hamiltonian_values[i]) << ','
            << format_double(rep.constraint_residuals[i]) << '\n';
    }
    csv.close();

    auto manifest = manifest_base(cfg, sys, q0);
    manifest["command"] = "drift";
    manifest["method"] = tab.name;
    manifest["h"] = cfg.h;
    manifest["max_samples"] = cfg.max_samples;
    manifest["linear_drift_rate"] = rep.linear_drift_rate;
    manifest["max_abs_hamiltonian_deviation"] = rep.max_abs_hamiltonian_deviation;
    manifest["max_constraint_residual"] = rep.max_constraint_residual;
    manifest["reached_time"] = rep.reached_time;
    manifest["truncated"] = rep.terminated_early;
    if (rep.terminated_early) {
        manifest["failure"] = rep.failure;
    }
    write_manifest(dir / "drift.manifest.json", manifest);

    log << tab.name << " on " << sys.name << ": drift rate " << format_double(rep.linear_drift_rate)
        << ", reached t = " << format_double(rep.reached_time) << '\n';
    if (rep.terminated_early) {
        log << "solver failure: " << rep.failure << '\n';
        return solver_divergence;
    }
    return ok;
}

int cmd_tableau_check(std::ostream& out)
{
    out << "method,stages,classical_order,partitioned,stiffly_accurate,symplecticity_residual,condition,residual\n";
    for (const auto& id : tableau_ids()) {
        const auto t = tableau_by_id(id);
        const auto prefix = t.name + ',' + std::to_string(t.s) + ',' + std::to_string(t.classical_order) + ',' +
                            (t.partitioned() ? "true" : "false") + ',' + (t.stiffly_accurate ? "true" : "false") +
                            ',' + format_double(check_symplecticity(t));
        for (const auto& r : check_order_conditions(t, t.classical_order)) {
            // Collocation methods satisfy C(k) only for k <= s.
            if (r.id[0] == 'C' && std::stoi(r.id.substr(1)) > static_cast<int>(t.s)) {
                continue;
            }
            out << prefix << ',' << r.id << ',' << format_double(r.residual) << '\n';
        }
    }
    return ok;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Variational integrators for Lagrangians linear in velocities"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print this help and exit");

    std::string config_path;
    std::optional<std::string> model, method, out_dir;
    std::optional<double> h, t_final;

    auto add_common = [&](CLI::App* sub) {
        sub->set_help_flag("--help", "print this help and exit");
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--model", model, "kepler | vortex2 | lotka_volterra | toy");
        sub->add_option("--method", method, "gauss1..3 | radau_iia2..3 | lobatto2..4");
        sub->add_option("--h", h, "step size");
        sub->add_option("--t-final", t_final, "final time");
        sub->add_option("--out-dir", out_dir, "output directory (default: $VLINT_OUT_DIR or .)");
    };
    auto* run = app.add_subcommand("run", "integrate one trajectory and write trajectory.csv");
    auto* conv = app.add_subcommand("convergence", "endpoint errors over a range of step sizes");
    auto* drift = app.add_subcommand("drift", "long-time Hamiltonian and constraint behavior");
    auto* check = app.add_subcommand("tableau-check", "symplecticity and order-condition residuals");
    add_common(run);
    add_common(conv);
    add_common(drift);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int code = app.exit(e, o, er);
        out << o.str();
        err << er.str();
        return code == 0 ? ok : config_error;
    }

    if (check->parsed()) {
        return cmd_tableau_check(out);
    }

    try {
        run_config cfg;
        if (const char* env = std::getenv("VLINT_OUT_DIR"); env && *env) {
            cfg.out_dir = env;
        }
        if (!config_path.empty()) {
            cfg = load_config_file(config_path, cfg);
        }
        if (model) {
            cfg.model = *model;
        }
        if (method) {
            cfg.method = *method;
            cfg.methods = {*method};
        }
        if (h) {
            cfg.h = *h;
        }
        if (t_final) {
            cfg.t_final = *t_final;
        }
        if (out_dir) {
            cfg.out_dir = *out_dir;
        }
        if (run->parsed()) {
            return cmd_run(cfg, out);
        }
        if (conv->parsed()) {
            return cmd_convergence(cfg, out);
        }
        return cmd_drift(cfg, out);
    } catch (const config_error_exception& e) {
        err << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return failure;
    }
}

} // namespace vlint::cli
