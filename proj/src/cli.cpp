#include "isac/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>

#include "isac/comm.hpp"
#include "isac/config_io.hpp"
#include "isac/mc.hpp"
#include "isac/region.hpp"
#include "isac/sense.hpp"

namespace isac::io {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string csv() const {
        std::string out;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out += ',';
            out += header[i];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out += ',';
                out += row[i];
            }
            out += '\n';
        }
        return out;
    }

    json as_json() const {
        json arr = json::array();
        for (const auto& row : rows) {
            json obj;
            for (std::size_t i = 0; i < header.size() && i < row.size(); ++i)
                obj[header[i]] = row[i];
            arr.push_back(obj);
        }
        return arr;
    }
};

struct Sweep {
    std::string param;
    std::vector<double> values;
};

Sweep parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw Error("--sweep expects <param>=<start>:<stop>:<step>");
    Sweep sw;
    sw.param = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);
    double lo, hi, step;
    if (std::sscanf(rest.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3)
        throw Error("--sweep expects <param>=<start>:<stop>:<step>");
    if (!(step > 0.0)) throw Error("--sweep step must be > 0");
    for (double v = lo; v <= hi + 1e-9 * step; v += step) sw.values.push_back(v);
    if (sw.values.empty()) throw Error("--sweep produced no values");
    return sw;
}

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    int jobs = 1;
    bool bits = false;
    std::string sweep_text;
    std::optional<int> k, l, j, q;
    std::optional<double> rho;
    std::string mode; // for mc/validate: comm|sense
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_alloc = true) {
    cmd->add_option("--config", o.config_path, "config file (key = value sections)");
    cmd->add_option("--out", o.out_path, "output file; '-' or empty writes to stdout");
    cmd->add_option("--seed", o.seed, "RNG seed override");
    cmd->add_option("--format", o.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--jobs", o.jobs, "parallel worker cap")->check(CLI::PositiveNumber);
    cmd->add_flag("--bits", o.bits, "report rates in bits instead of nats");
    cmd->add_option("--sweep", o.sweep_text, "<param>=<start>:<stop>:<step>");
    if (with_alloc) {
        cmd->add_option("--k", o.k, "users served per cell");
        cmd->add_option("--l", o.l, "communication cluster size");
        cmd->add_option("--j", o.j, "targets probed per cell");
        cmd->add_option("--q", o.q, "sensing cluster size");
    }
}

struct Context {
    LoadedConfig cfg;
    CommonOpts opts;
    double unit_scale = 1.0;
    std::string units = "nats";
    num::QuadSpec spec_single = num::QuadSpec::single_integral();
    num::QuadSpec spec_nested = num::QuadSpec::nested();
    std::string started;
    json extras;
};

std::string error_kind(const Error& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const ConvergenceError*>(&e)) return "ConvergenceError";
    if (dynamic_cast<const InfeasibleAllocation*>(&e)) return "InfeasibleAllocation";
    if (dynamic_cast<const DegenerateLaw*>(&e)) return "DegenerateLaw";
    if (dynamic_cast<const RankDeficiency*>(&e)) return "RankDeficiency";
    if (dynamic_cast<const DegenerateRealization*>(&e)) return "DegenerateRealization";
    return "Error";
}

Context make_context(const CommonOpts& o) {
    Context ctx;
    ctx.opts = o;
    ctx.cfg = o.config_path.empty() ? parse_config("") : load_config(o.config_path);
    if (o.seed) ctx.cfg.run.seed = *o.seed;
    if (o.k) ctx.cfg.alloc.k = *o.k;
    if (o.l) ctx.cfg.alloc.l = *o.l;
    if (o.j) ctx.cfg.alloc.j = *o.j;
    if (o.q) ctx.cfg.alloc.q = *o.q;
    if (o.bits) {
        ctx.unit_scale = 1.0 / std::log(2.0);
        ctx.units = "bits";
    }
    if (ctx.cfg.run.rel_tol > 0.0) {
        ctx.spec_single.rel_tol = ctx.cfg.run.rel_tol;
        ctx.spec_nested.rel_tol = ctx.cfg.run.rel_tol;
    }
    return ctx;
}

/// Allocation grid: the swept allocation parameter expanded, or the single
/// configured allocation. Infeasible points are skipped and counted.
std::vector<model::Allocation> alloc_grid(Context& ctx) {
    std::vector<model::Allocation> out;
    if (ctx.opts.sweep_text.empty()) {
        out.push_back(ctx.cfg.alloc);
        return out;
    }
    const Sweep sw = parse_sweep(ctx.opts.sweep_text);
    for (double v : sw.values) {
        model::Allocation a = ctx.cfg.alloc;
        const int iv = static_cast<int>(std::lround(v));
        if (sw.param == "k") a.k = iv;
        else if (sw.param == "l") a.l = iv;
        else if (sw.param == "j") a.j = iv;
        else if (sw.param == "q") a.q = iv;
        else throw Error("unknown sweep parameter '" + sw.param + "'");
        out.push_back(a);
    }
    return out;
}

mc::McOptions mc_options(const Context& ctx) {
    mc::McOptions o;
    o.n = ctx.cfg.run.n_realizations;
    o.seed = ctx.cfg.run.seed;
    o.r_window_km = ctx.cfg.run.r_window_km;
    o.jobs = ctx.opts.jobs;
    return o;
}

sense::SenseRateResult sense_rate_for(const Context& ctx, const model::Allocation& a,
                                      bool hole = true) {
    if (a.q == 1)
        return sense::rs_q1(ctx.cfg.network, a.k, ctx.spec_nested, a.j, hole);
    return sense::rs_cluster(ctx.cfg.network, a.k, a.j, a.q, ctx.spec_nested);
}

void write_outputs(Context& ctx, const std::string& command, const Table& table) {
    const bool to_stdout = ctx.opts.out_path.empty() || ctx.opts.out_path == "-";
    std::string payload;
    if (ctx.opts.format == "csv") {
        payload = table.csv();
    } else {
        json j;
        j["rows"] = table.as_json();
        j["units"] = ctx.units;
        j["config_hash"] = config_hash(ctx.cfg);
        payload = j.dump(2) + "\n";
    }
    if (to_stdout) {
        std::cout << payload;
        return;
    }
    {
        std::ofstream f(ctx.opts.out_path, std::ios::binary);
        if (!f) throw Error("cannot write '" + ctx.opts.out_path + "'");
        f << payload;
    }
    json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["command"] = command;
    manifest["config_hash"] = config_hash(ctx.cfg);
    manifest["seed"] = ctx.cfg.run.seed;
    manifest["started"] = ctx.started;
    manifest["finished"] = iso_now();
    manifest["outputs"] = json::array({ctx.opts.out_path});
    manifest["units"] = ctx.units;
    if (!ctx.extras.empty()) manifest["extras"] = ctx.extras;
    std::ofstream mf(ctx.opts.out_path + ".manifest.json", std::ios::binary);
    mf << manifest.dump(2) << "\n";
}

std::vector<std::string> alloc_cells(const model::Allocation& a) {
    return {std::to_string(a.k), std::to_string(a.l), std::to_string(a.j), std::to_string(a.q)};
}

int cmd_comm_rate(Context& ctx) {
    Table t;
    t.header = {"k", "l", "j", "q", "rate_exact_thm1", "ase_exact_thm1",
                "rate_approx_misr", "ase_approx_misr", "units"};
    int skipped = 0;
    for (const auto& a : alloc_grid(ctx)) {
        if (!model::validate_allocation(ctx.cfg.network, a).feasible) {
            ++skipped;
            continue;
        }
        const auto ex = comm::rc_exact(ctx.cfg.network, a, ctx.spec_single);
        const auto ap = comm::rc_approx(ctx.cfg.network, a.k, a.l, a.j, a.q, ctx.spec_single);
        auto row = alloc_cells(a);
        const double s = ctx.unit_scale;
        row.insert(row.end(), {fmt(ex.rate_nats * s), fmt(ex.ase * s), fmt(ap.rate_nats * s),
                               fmt(ap.ase * s), ctx.units});
        t.rows.push_back(std::move(row));
    }
    ctx.extras["skipped_infeasible"] = skipped;
    write_outputs(ctx, "comm-rate", t);
    return 0;
}

int cmd_sense_rate(Context& ctx) {
    Table t;
    t.header = {"k", "l", "j", "q", "method", "rate_analytic", "ase_analytic",
                "rate_no_hole_baseline", "units"};
    int skipped = 0;
    for (const auto& a : alloc_grid(ctx)) {
        if (!model::validate_allocation(ctx.cfg.network, a).feasible) {
            ++skipped;
            continue;
        }
        const auto r = sense_rate_for(ctx, a);
        auto row = alloc_cells(a);
        const double s = ctx.unit_scale;
        std::string baseline;
        if (a.q == 1)
            baseline = fmt(sense_rate_for(ctx, a, false).rate_nats * s);
        row.insert(row.end(), {sense::to_string(r.method), fmt(r.rate_nats * s), fmt(r.ase * s),
                               baseline, ctx.units});
        t.rows.push_back(std::move(row));
    }
    ctx.extras["skipped_infeasible"] = skipped;
    write_outputs(ctx, "sense-rate", t);
    return 0;
}

int cmd_ase_sweep(Context& ctx) {
    Table t;
    t.header = {"k", "l", "j", "q", "comm_ase_exact", "comm_ase_approx",
                "sense_ase", "sense_method", "units"};
    int skipped = 0;
    for (const auto& a : alloc_grid(ctx)) {
        if (!model::validate_allocation(ctx.cfg.network, a).feasible) {
            ++skipped;
            continue;
        }
        const auto ex = comm::rc_exact(ctx.cfg.network, a, ctx.spec_single);
        const auto ap = comm::rc_approx(ctx.cfg.network, a.k, a.l, a.j, a.q, ctx.spec_single);
        const auto se = sense_rate_for(ctx, a);
        auto row = alloc_cells(a);
        const double s = ctx.unit_scale;
        row.insert(row.end(), {fmt(ex.ase * s), fmt(ap.ase * s), fmt(se.ase * s),
                               sense::to_string(se.method), ctx.units});
        t.rows.push_back(std::move(row));
    }
    ctx.extras["skipped_infeasible"] = skipped;
    write_outputs(ctx, "ase-sweep", t);
    return 0;
}

int cmd_mc(Context& ctx) {
    Table t;
    t.header = {"mode", "k", "l", "j", "q", "mc_mean", "mc_ci95", "n", "seed", "units"};
    const auto opts = mc_options(ctx);
    int skipped = 0;
    for (const auto& a : alloc_grid(ctx)) {
        if (!model::validate_allocation(ctx.cfg.network, a).feasible) {
            ++skipped;
            continue;
        }
        const mc::McEstimate est = ctx.opts.mode == "comm"
                                       ? mc::mc_comm_rate(ctx.cfg.network, a, opts)
                                       : mc::mc_sense_rate(ctx.cfg.network, a, opts);
        std::vector<std::string> row = {ctx.opts.mode};
        const auto ac = alloc_cells(a);
        row.insert(row.end(), ac.begin(), ac.end());
        const double s = ctx.unit_scale;
        row.insert(row.end(), {fmt(est.mean * s), fmt(est.half_width_95 * s),
                               std::to_string(est.n_realizations), std::to_string(est.seed),
                               ctx.units});
        t.rows.push_back(std::move(row));
    }
    const double rw = opts.r_window_km > 0 ? opts.r_window_km
                                           : mc::default_window_km(ctx.cfg.network);
    ctx.extras["window_km"] = rw;
    ctx.extras["interference_tail_bound"] =
        mc::interference_tail_bound(ctx.cfg.network, ctx.cfg.alloc.k, rw);
    ctx.extras["skipped_infeasible"] = skipped;
    write_outputs(ctx, "mc " + ctx.opts.mode, t);
    return 0;
}

int cmd_validate(Context& ctx) {
    Table t;
    const auto opts = mc_options(ctx);
    const double s = ctx.unit_scale;
    int skipped = 0;
    if (ctx.opts.mode == "comm") {
        t.header = {"k", "l", "j", "q", "rc_exact", "rc_approx", "mc_mean", "mc_ci",
                    "rel_err_exact", "rel_err_approx", "units"};
        for (const auto& a : alloc_grid(ctx)) {
            if (!model::validate_allocation(ctx.cfg.network, a).feasible) {
                ++skipped;
                continue;
            }
            const auto ex = comm::rc_exact(ctx.cfg.network, a, ctx.spec_single);
            const auto ap = comm::rc_approx(ctx.cfg.network, a.k, a.l, a.j, a.q, ctx.spec_single);
            const auto est = mc::mc_comm_rate(ctx.cfg.network, a, opts);
            auto row = alloc_cells(a);
            row.insert(row.end(),
                       {fmt(ex.rate_nats * s), fmt(ap.rate_nats * s), fmt(est.mean * s),
                        fmt(est.half_width_95 * s),
                        fmt(std::abs(ex.rate_nats - est.mean) / est.mean),
                        fmt(std::abs(ap.rate_nats - est.mean) / est.mean), ctx.units});
            t.rows.push_back(std::move(row));
        }
    } else {
        t.header = {"k", "l", "j", "q", "rs_analytic", "rs_no_hole", "mc_mean", "mc_ci",
                    "rel_err_analytic", "rel_err_no_hole", "units"};
        for (const auto& a : alloc_grid(ctx)) {
            if (!model::validate_allocation(ctx.cfg.network, a).feasible) {
                ++skipped;
                continue;
            }
            const auto an = sense_rate_for(ctx, a);
            const auto est = mc::mc_sense_rate(ctx.cfg.network, a, opts);
            std::string base, base_err;
            if (a.q == 1) {
                const auto nb = sense_rate_for(ctx, a, false);
                base = fmt(nb.rate_nats * s);
                base_err = fmt(std::abs(nb.rate_nats - est.mean) / est.mean);
            }
            auto row = alloc_cells(a);
            row.insert(row.end(),
                       {fmt(an.rate_nats * s), base, fmt(est.mean * s), fmt(est.half_width_95 * s),
                        fmt(std::abs(an.rate_nats - est.mean) / est.mean), base_err, ctx.units});
            t.rows.push_back(std::move(row));
        }
    }
    ctx.extras["skipped_infeasible"] = skipped;
    write_outputs(ctx, "validate " + ctx.opts.mode, t);
    return 0;
}

int cmd_region(Context& ctx) {
    Table t;
    t.header = {"provenance", "k", "l", "j", "q", "comm_ase", "sense_ase", "units"};
    const auto boundary = opt::boundary_sweep(ctx.cfg.network, ctx.spec_nested);
    const auto cc = opt::comm_corner(ctx.cfg.network, ctx.spec_nested);
    const auto sc = opt::sense_corner(ctx.cfg.network, ctx.spec_nested);
    const auto ts = opt::time_share_bound(cc, sc, 50);
    const double s = ctx.unit_scale;
    auto emit = [&](const opt::RegionPoint& p) {
        std::vector<std::string> row = {opt::to_string(p.provenance)};
        const auto ac = alloc_cells(p.alloc);
        row.insert(row.end(), ac.begin(), ac.end());
        row.insert(row.end(), {fmt(p.comm_ase * s), fmt(p.sense_ase * s), ctx.units});
        t.rows.push_back(std::move(row));
    };
    for (const auto& p : boundary.frontier) emit(p);
    for (const auto& p : ts.frontier) emit(p);
    write_outputs(ctx, "region", t);
    return 0;
}

int cmd_sum_ase(Context& ctx) {
    Table t;
    t.header = {"rho", "t_ase", "comm_ase", "sense_ase", "k", "l", "j", "q", "units"};
    std::vector<double> rhos;
    if (!ctx.opts.sweep_text.empty()) {
        const Sweep sw = parse_sweep(ctx.opts.sweep_text);
        if (sw.param != "rho") throw Error("sum-ase sweeps only 'rho'");
        rhos = sw.values;
    } else {
        rhos.push_back(ctx.opts.rho.value_or(0.5));
    }
    const auto boundary = opt::boundary_sweep(ctx.cfg.network, ctx.spec_nested);
    const double s = ctx.unit_scale;
    for (double rho : rhos) {
        const auto res = opt::solve_p1(boundary, rho);
        std::vector<std::string> row = {fmt(rho), fmt(res.t_ase * s),
                                        fmt(res.best_point.comm_ase * s),
                                        fmt(res.best_point.sense_ase * s)};
        const auto ac = alloc_cells(res.best_point.alloc);
        row.insert(row.end(), ac.begin(), ac.end());
        row.push_back(ctx.units);
        t.rows.push_back(std::move(row));
    }
    write_outputs(ctx, "sum-ase", t);
    return 0;
}

} // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"cooperative ISAC network analysis toolkit"};
    app.require_subcommand(1);

    CommonOpts o;
    auto* comm_rate = app.add_subcommand("comm-rate", "analytic communication rate and ASE");
    add_common(comm_rate, o);
    auto* sense_rate = app.add_subcommand("sense-rate", "analytic radar rate and ASE");
    add_common(sense_rate, o);
    auto* ase_sweep = app.add_subcommand("ase-sweep", "joint comm/sense ASE sweep");
    add_common(ase_sweep, o);
    auto* mc_cmd = app.add_subcommand("mc", "channel-level Monte Carlo estimate");
    mc_cmd->add_option("mode", o.mode, "comm or sense")
        ->required()
        ->check(CLI::IsMember({"comm", "sense"}));
    add_common(mc_cmd, o);
    auto* validate = app.add_subcommand("validate", "analytic-vs-MC relative error tables");
    validate->add_option("mode", o.mode, "comm or sense")
        ->required()
        ->check(CLI::IsMember({"comm", "sense"}));
    add_common(validate, o);
    auto* region = app.add_subcommand("region", "S-C region boundary and time-share segment");
    add_common(region, o, false);
    auto* sum_ase = app.add_subcommand("sum-ase", "weighted-sum ASE optimum");
    sum_ase->add_option("--rho", o.rho, "comm weight in [0,1]");
    add_common(sum_ase, o, false);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        Context ctx = make_context(o);
        ctx.started = iso_now();
        if (comm_rate->parsed()) return cmd_comm_rate(ctx);
        if (sense_rate->parsed()) return cmd_sense_rate(ctx);
        if (ase_sweep->parsed()) return cmd_ase_sweep(ctx);
        if (mc_cmd->parsed()) return cmd_mc(ctx);
        if (validate->parsed()) return cmd_validate(ctx);
        if (region->parsed()) return cmd_region(ctx);
        if (sum_ase->parsed()) return cmd_sum_ase(ctx);
        return 2;
    } catch (const Error& e) {
        json err;
        err["error"]["type"] = error_kind(e);
        err["error"]["message"] = e.what();
        std::cout << err.dump() << "\n";
        return 1;
    }
}

} // namespace isac::io
