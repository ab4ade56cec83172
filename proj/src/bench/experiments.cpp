#include "isac/bench/experiments.hpp"

#include "isac/comm_sep.hpp"
#include "isac/crb_metrics.hpp"
#include "isac/estimators.hpp"
#include "isac/opt_et.hpp"
#include "isac/opt_pt.hpp"
#include "isac/parallel.hpp"
#include "isac/rng.hpp"
#include "isac/sep_projection.hpp"
#include "isac/structured.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace isac::bench {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kSerDraws = 10000;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string point(std::initializer_list<std::pair<const char*, std::string>> kv) {
    std::string s;
    for (const auto& [k, v] : kv) {
        if (!s.empty())
            s += ';';
        s += k;
        s += '=';
        s += v;
    }
    return s;
}

// Rows produced by one job, plus abort bookkeeping.
struct JobOutput {
    std::vector<ResultRow> rows;
    bool aborted = false;
    std::string message;
};

struct RowSink {
    const char* experiment;
    std::string pt;
    std::uint64_t seed;
    bool timing;
    JobOutput* out;

    void add(const std::string& metric, double value, double se = kNaN, double wall_ms = kNaN) {
        out->rows.push_back({experiment, pt, metric, value, se, seed, timing ? wall_ms : kNaN});
    }
};

CVec full_power_start(int n, double power, std::uint64_t seed) {
    Rng rng(seed);
    CVec x = rng.cnormal_vec(n);
    return x * (std::sqrt(power) / x.norm());
}

double max_ser(const Scenario& sc, const AdmmResult& r, std::uint64_t seed) {
    if (sc.users() == 0)
        return 0.0;
    const RVec ser = empirical_ser(unvec(r.x, sc.dims.n_t, sc.dims.l), sc.h, sc.symbols, r.d, sc.sigma_w,
                                   kSerDraws, seed);
    return ser.maxCoeff();
}

bool sep_feasible(const Scenario& sc, const AdmmResult& r) {
    if (sc.users() == 0)
        return true;
    const double res = r.trace.residual.empty() ? 0.0 : r.trace.residual.back();
    const CMat hx = unvec(htilde_apply(sc.h, r.x), sc.users(), sc.dims.l);
    return sep_constraints_satisfied(r.u, r.d, sc.sep, 1e-9).ok &&
           sep_constraints_satisfied(hx, r.d, sc.sep, std::sqrt(res) + 1e-9).ok;
}

void admm_final_rows(RowSink& s, const Scenario& sc, Variant v, const AdmmResult& r, double wall_ms) {
    const double res = r.trace.residual.empty() ? kNaN : r.trace.residual.back();
    s.add("final_residual", res);
    s.add("final_crb", variant_crb(sc, v, r.x));
    s.add("outer_iterations", r.outer_iterations);
    s.add("converged", r.converged ? 1.0 : 0.0);
    s.add("power", r.x.squaredNorm());
    s.add("sep_feasible", sep_feasible(sc, r) ? 1.0 : 0.0);
    s.add("ser_max", max_ser(sc, r, derive_seed(s.seed, 77)));
    if (s.timing)
        s.add("cpu_time_s", wall_ms / 1000.0, kNaN, wall_ms);
}

void mark_abort(JobOutput& o, const std::string& where, const std::string& why) {
    o.aborted = true;
    o.message = where + ": " + why;
}

// ---- experiment bodies: one job per point ----

JobOutput convergence_job(const ExperimentConfig& c, const RunOptions& opt, Variant v, double eps) {
    JobOutput o;
    RowSink s{"convergence", point({{"variant", variant_name(v)}, {"epsilon", format_number(eps)}}), c.seed,
              opt.with_timing, &o};
    try {
        const Scenario sc = with_epsilon(make_scenario(c.scenario, c.seed), eps);
        const auto t0 = Clock::now();
        const AdmmResult r = admm_run(sc, v, c.admm_for(v), admm_initialize(sc, derive_seed(c.seed, 1)));
        const double wall = ms_since(t0);
        for (std::size_t i = 0; i < r.trace.residual.size(); ++i) {
            RowSink it = s;
            it.pt = s.pt + ";iter=" + std::to_string(i + 1);
            it.add("residual", r.trace.residual[i], kNaN, r.trace.wall_ms[i]);
            it.add("objective", r.trace.objective[i], kNaN, r.trace.wall_ms[i]);
            it.add("rho", r.trace.rho[i], kNaN, r.trace.wall_ms[i]);
        }
        admm_final_rows(s, sc, v, r, wall);
        if (r.aborted)
            mark_abort(o, s.pt, r.message);
    } catch (const std::exception& e) {
        mark_abort(o, s.pt, e.what());
    }
    return o;
}

JobOutput tradeoff_job(const ExperimentConfig& c, const RunOptions& opt, Variant v, double eps) {
    JobOutput o;
    RowSink s{"tradeoff", point({{"variant", variant_name(v)}, {"epsilon", format_number(eps)}}), c.seed,
              opt.with_timing, &o};
    try {
        const Scenario sc = with_epsilon(make_scenario(c.scenario, c.seed), eps);
        const auto t0 = Clock::now();
        const AdmmResult r = admm_run(sc, v, c.admm_for(v), admm_initialize(sc, derive_seed(c.seed, 1)));
        admm_final_rows(s, sc, v, r, ms_since(t0));
        if (r.aborted)
            mark_abort(o, s.pt, r.message);
    } catch (const std::exception& e) {
        mark_abort(o, s.pt, e.what());
    }
    return o;
}

JobOutput timing_job(const ExperimentConfig& c, const RunOptions& opt, Variant v, int instance) {
    JobOutput o;
    const std::uint64_t seed = derive_seed(c.seed, 10, static_cast<std::uint64_t>(instance));
    RowSink s{"timing", point({{"variant", variant_name(v)}, {"instance", std::to_string(instance)}}), seed,
              opt.with_timing, &o};
    try {
        const Scenario sc = make_scenario(c.scenario, seed);
        const auto t0 = Clock::now();
        const AdmmResult r = admm_run(sc, v, c.admm_for(v), admm_initialize(sc, derive_seed(seed, 1)));
        admm_final_rows(s, sc, v, r, ms_since(t0));
        if (r.aborted)
            mark_abort(o, s.pt, r.message);
    } catch (const std::exception& e) {
        mark_abort(o, s.pt, e.what());
    }
    return o;
}

JobOutput pt_sweep_job(const ExperimentConfig& c, const RunOptions& opt, Variant v, int snr_index) {
    JobOutput o;
    const double snr = c.snr_db[snr_index];
    RowSink s{"pt_sweep", point({{"snr_db", format_number(snr)}, {"variant", variant_name(v)}}), c.seed,
              opt.with_timing, &o};
    try {
        if (v != Variant::PT && v != Variant::PT_INF)
            throw std::invalid_argument("pt_sweep supports PT and PT_INF variants");
        const Scenario sc = with_sensing_snr(make_scenario(c.scenario, c.seed), snr);
        PtProblem pb;
        pb.dims = sc.dims;
        pb.target = sc.pt;
        pb.sigma_v_sq = sc.sigma_v_sq;
        pb.power = sc.power;
        pb.h = CMat(0, sc.dims.n_t);
        pb.resolution = v == Variant::PT ? Resolution::OneBit : Resolution::Infinite;
        const CVec x0 = full_power_start(sc.dims.tx_len(), sc.power, derive_seed(c.seed, 2));
        const auto t0 = Clock::now();
        const InnerResult r = solve_x_pt(pb, x0, Penalty{0.0, CVec(0)}, c.inner_tol, c.inner_max_iter);
        const double design_ms = ms_since(t0);
        s.add("crb_onebit", crb_pt(r.x, sc.dims, sc.pt, sc.sigma_v_sq));
        s.add("crb_infinite", crb_pt_infinite_resolution(r.x, sc.dims, sc.pt, sc.sigma_v_sq));
        const MseSummary m = run_trials_pt(r.x, sc.dims, sc.pt, sc.sigma_v_sq, c.trials,
                                           derive_seed(c.seed, 3, static_cast<std::uint64_t>(snr_index)));
        s.add("mse_mle", m.mean, m.std_error);
        s.add("failed_trials", m.n_failed);
        if (s.timing)
            s.add("design_time_s", design_ms / 1000.0, kNaN, design_ms);
    } catch (const std::exception& e) {
        mark_abort(o, s.pt, e.what());
    }
    return o;
}

JobOutput et_sweep_job(const ExperimentConfig& c, const RunOptions& opt, Variant v, int snr_index) {
    JobOutput o;
    const double snr = c.snr_db[snr_index];
    RowSink s{"et_sweep", point({{"snr_db", format_number(snr)}, {"variant", variant_name(v)}}), c.seed,
              opt.with_timing, &o};
    try {
        if (v != Variant::ET && v != Variant::ET_QU)
            throw std::invalid_argument("et_sweep supports ET and ET_QU variants");
        const Scenario sc = with_sensing_snr(make_scenario(c.scenario, c.seed), snr);
        EtProblem pb;
        pb.dims = sc.dims;
        pb.c_aa = sc.et.c_aa;
        pb.sigma_v_sq = sc.sigma_v_sq;
        pb.power = sc.power;
        pb.h = CMat(0, sc.dims.n_t);
        const CVec x0 = full_power_start(sc.dims.tx_len(), sc.power, derive_seed(c.seed, 2));
        const auto t0 = Clock::now();
        const InnerResult r = v == Variant::ET
                                  ? solve_x_et(pb, x0, Penalty{0.0, CVec(0)}, c.inner_tol, c.inner_max_iter, 0.0)
                                  : solve_x_et_qu(pb, x0, Penalty{0.0, CVec(0)}, c.inner_tol, c.inner_max_iter, 0.0);
        const double design_ms = ms_since(t0);
        const CMat x = unvec(r.x, sc.dims.n_t, sc.dims.l);
        const double tr = sc.et.c_aa.trace().real();
        s.add("crb_onebit_norm", crb_et(x, sc.et.c_aa, sc.sigma_v_sq) / tr);
        s.add("mse_unquantized_norm", mse_et_quantization_unaware(x, sc.et.c_aa, sc.sigma_v_sq) / tr);
        const MseSummary m = run_trials_et(x, sc.et, sc.sigma_v_sq, c.trials,
                                           derive_seed(c.seed, 3, static_cast<std::uint64_t>(snr_index)));
        s.add("nmse_blmmse", m.mean, m.std_error);
        s.add("failed_trials", m.n_failed);
        if (s.timing)
            s.add("design_time_s", design_ms / 1000.0, kNaN, design_ms);
    } catch (const std::exception& e) {
        mark_abort(o, s.pt, e.what());
    }
    return o;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(base ^ splitmix64(a + 0x51ed2701ULL)) + b);
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt) {
    cfg.validate();
    std::vector<std::function<JobOutput()>> jobs;
    for (Variant v : cfg.variants) {
        switch (cfg.kind) {
            case ExperimentKind::Convergence:
                for (double e : cfg.epsilon)
                    jobs.push_back([&, v, e] { return convergence_job(cfg, opt, v, e); });
                break;
            case ExperimentKind::Tradeoff:
                for (double e : cfg.epsilon)
                    jobs.push_back([&, v, e] { return tradeoff_job(cfg, opt, v, e); });
                break;
            case ExperimentKind::Timing:
                for (int i = 0; i < cfg.instances; ++i)
                    jobs.push_back([&, v, i] { return timing_job(cfg, opt, v, i); });
                break;
            case ExperimentKind::PtSweep:
                for (int i = 0; i < static_cast<int>(cfg.snr_db.size()); ++i)
                    jobs.push_back([&, v, i] { return pt_sweep_job(cfg, opt, v, i); });
                break;
            case ExperimentKind::EtSweep:
                for (int i = 0; i < static_cast<int>(cfg.snr_db.size()); ++i)
                    jobs.push_back([&, v, i] { return et_sweep_job(cfg, opt, v, i); });
                break;
        }
    }
    std::vector<JobOutput> outs(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), opt.threads, [&](int i) { outs[i] = jobs[i](); });

    ExperimentResult res;
    res.table.with_timing = opt.with_timing;
    for (auto& o : outs) {
        for (auto& r : o.rows)
            res.table.rows.push_back(std::move(r));
        if (o.aborted) {
            ++res.aborted;
            res.messages.push_back(o.message);
        }
    }
    std::ostringstream os;
    os << kind_name(cfg.kind) << ": " << jobs.size() << " points, " << res.table.rows.size() << " rows, "
       << res.aborted << " aborted";
    res.summary = os.str();
    return res;
}

}  // namespace isac::bench
