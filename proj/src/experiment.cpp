#include "rabeam/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rabeam/rab.hpp"

namespace rabeam {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t cell_stream(std::uint64_t seed, int snr_index, int run)
{
    // The sample covariance stream is shared by every (p,q) cell of a run, so
    // it is keyed by (seed, snr, run) only.
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(snr_index + 1)));
    h = splitmix64(h ^ (0xc2b2ae3d27d4eb4fULL * static_cast<std::uint64_t>(run + 1)));
    return h;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double x) { return 10.0 * std::log10(x); }

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream iss(s);
    while (std::getline(iss, cur, sep))
        out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep)
        out.emplace_back();
    return out;
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: key '" + key + "' expects a number, got '" + value + "'");
    }
}

long parse_long(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: key '" + key + "' expects an integer, got '" + value +
                                 "'");
    }
}

ExtRational parse_order(const std::string& key, const std::string& value)
{
    const auto r = ExtRational::parse(value);
    if (!r)
        throw std::runtime_error("config: key '" + key + "' expects a norm order, got '" + value +
                                 "'");
    return *r;
}

ScatteredSource::Density parse_density(const std::string& key, const std::string& value)
{
    if (value == "gaussian")
        return ScatteredSource::Density::Gaussian;
    if (value == "uniform")
        return ScatteredSource::Density::Uniform;
    throw std::runtime_error("config: key '" + key + "' expects gaussian or uniform, got '" +
                             value + "'");
}

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

constexpr const char* kCsvHeader =
    "snr_db,p,q,run,sinr_db,worst_case_sinr_db,opt_bound_db,iterations,cpu_ms,status";

struct SnrContext {
    double snr_db = 0.0;
    HermitianMatrix r_s;
    HermitianMatrix r_ipn;
    HermitianMatrix r_total;
    CMatrix q_mat;
    double eta = 0.0;
    double opt_bound_db = 0.0;
};

SnrContext make_snr_context(const ExperimentConfig& cfg, double snr_db)
{
    const int n = cfg.scenario.ula.n;
    ScatteredSource sig = cfg.scenario.signal_true;
    sig.power = db_to_linear(snr_db) * cfg.scenario.noise_power;
    ScatteredSource presumed = cfg.scenario.signal_presumed;
    presumed.power = sig.power;

    HermitianMatrix r_s = scattered_covariance(cfg.scenario.ula, sig);
    HermitianMatrix r_sp = scattered_covariance(cfg.scenario.ula, presumed);
    CMatrix ipn = cfg.scenario.noise_power * CMatrix::Identity(n, n);
    for (const auto& src : cfg.scenario.interferers)
        ipn += scattered_covariance(cfg.scenario.ula, src).matrix();
    HermitianMatrix r_ipn(ipn);
    HermitianMatrix r_total(r_s.matrix() + ipn);

    CMatrix q = gram_factor(r_sp).q;
    const double eta = cfg.eta_factor * induced_norm(q, ExtRational(2), ExtRational(2)).value;
    const double opt = optimal_sinr(r_s, r_ipn);
    return SnrContext{snr_db, std::move(r_s), std::move(r_ipn), std::move(r_total), std::move(q),
                      eta, linear_to_db(opt)};
}

ResultRow run_cell(const ExperimentConfig& cfg, const SnrContext& ctx, int snr_index,
                   const PqPair& pq, int run)
{
    ResultRow row;
    row.snr_db = ctx.snr_db;
    row.p = pq.p;
    row.q = pq.q;
    row.run = run;
    row.opt_bound_db = ctx.opt_bound_db;

    std::mt19937_64 rng(cell_stream(cfg.seed, snr_index, run));
    try {
        HermitianMatrix r_sample = sample_covariance(ctx.r_total, cfg.scenario.snapshots, rng);
        const double gamma = cfg.gamma_factor * r_sample.matrix().norm();

        RabProblem problem{r_sample, ctx.q_mat, gamma, UncertaintySpec(pq.p, pq.q, ctx.eta), {}};
        if (cfg.constraint_mode == ConstraintMode::RobustNorm) {
            CMatrix p_mat = gram_factor(r_sample).q;
            const double eta1 =
                cfg.eta1_factor * induced_norm(p_mat, ExtRational(2), ExtRational(2)).value;
            problem.robust =
                RabProblem::RobustNorm{std::move(p_mat), UncertaintySpec(cfg.p1, cfg.q1, eta1)};
        }

        const auto t0 = std::chrono::steady_clock::now();
        RabResult res = solve_sequential(problem, StoppingRule{cfg.alpha, 300});
        const auto t1 = std::chrono::steady_clock::now();
        row.cpu_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        row.iterations = static_cast<int>(res.trace.entries.size());
        row.status = to_string(res.trace.stop);
        row.sinr_db = linear_to_db(sinr(res.w, ctx.r_s, ctx.r_ipn));
        row.worst_case_sinr_db = linear_to_db(worst_case_sinr(problem, res.w));
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        row.sinr_db = std::numeric_limits<double>::quiet_NaN();
        row.worst_case_sinr_db = std::numeric_limits<double>::quiet_NaN();
        row.iterations = 0;
        row.cpu_ms = 0.0;
    }
    return row;
}

} // namespace

ExperimentConfig default_experiment_config()
{
    ExperimentConfig cfg;
    cfg.scenario.ula = ULAConfig{10, 0.5};
    cfg.scenario.signal_true = {ScatteredSource::Density::Gaussian, 30.0, 4.0, 1.0};
    cfg.scenario.signal_presumed = {ScatteredSource::Density::Gaussian, 34.0, 6.0, 1.0};
    cfg.scenario.interferers = {{ScatteredSource::Density::Uniform, 10.0, 10.0, 10.0}};
    cfg.scenario.noise_power = 1.0;
    cfg.scenario.snapshots = 50;
    cfg.snr_list_db = {0.0, 10.0, 20.0, 30.0, 40.0};
    cfg.pq_list = {{ExtRational(2), ExtRational(1)},
                   {ExtRational(2), ExtRational(3, 2)},
                   {ExtRational(2), ExtRational(2)},
                   {ExtRational(2), ExtRational(4)},
                   {ExtRational(2), ExtRational::infinity()}};
    return cfg;
}

ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig cfg = default_experiment_config();
    double noise_db = 0.0;
    double inr_db = 10.0;

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not key=value: '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config: empty key on line " + std::to_string(lineno));

        if (key == "sensors") {
            cfg.scenario.ula.n = static_cast<int>(parse_long(key, value));
        } else if (key == "spacing") {
            cfg.scenario.ula.spacing = parse_double(key, value);
        } else if (key == "noise_db") {
            noise_db = parse_double(key, value);
        } else if (key == "snapshots") {
            cfg.scenario.snapshots = static_cast<int>(parse_long(key, value));
        } else if (key == "signal_density") {
            cfg.scenario.signal_true.density = parse_density(key, value);
        } else if (key == "signal_center_deg") {
            cfg.scenario.signal_true.center_deg = parse_double(key, value);
        } else if (key == "signal_spread_deg") {
            cfg.scenario.signal_true.spread_deg = parse_double(key, value);
        } else if (key == "presumed_density") {
            cfg.scenario.signal_presumed.density = parse_density(key, value);
        } else if (key == "presumed_center_deg") {
            cfg.scenario.signal_presumed.center_deg = parse_double(key, value);
        } else if (key == "presumed_spread_deg") {
            cfg.scenario.signal_presumed.spread_deg = parse_double(key, value);
        } else if (key == "interference_density") {
            cfg.scenario.interferers.at(0).density = parse_density(key, value);
        } else if (key == "interference_center_deg") {
            cfg.scenario.interferers.at(0).center_deg = parse_double(key, value);
        } else if (key == "interference_spread_deg") {
            cfg.scenario.interferers.at(0).spread_deg = parse_double(key, value);
        } else if (key == "inr_db") {
            inr_db = parse_double(key, value);
        } else if (key == "snr_list_db") {
            cfg.snr_list_db.clear();
            for (const auto& tok : split(value, ','))
                cfg.snr_list_db.push_back(parse_double(key, tok));
        } else if (key == "pq_list") {
            cfg.pq_list.clear();
            for (const auto& tok : split(value, ',')) {
                const auto colon = tok.find(':');
                if (colon == std::string::npos)
                    throw std::runtime_error("config: pq_list entries are p:q, got '" + tok + "'");
                cfg.pq_list.push_back({parse_order(key, trim(tok.substr(0, colon))),
                                       parse_order(key, trim(tok.substr(colon + 1)))});
            }
        } else if (key == "eta_factor") {
            cfg.eta_factor = parse_double(key, value);
        } else if (key == "gamma_factor") {
            cfg.gamma_factor = parse_double(key, value);
        } else if (key == "runs") {
            cfg.runs = static_cast<int>(parse_long(key, value));
        } else if (key == "alpha") {
            cfg.alpha = parse_double(key, value);
        } else if (key == "constraint_mode") {
            if (value == "quadratic")
                cfg.constraint_mode = ConstraintMode::Quadratic;
            else if (value == "robust_norm")
                cfg.constraint_mode = ConstraintMode::RobustNorm;
            else
                throw std::runtime_error(
                    "config: constraint_mode expects quadratic or robust_norm, got '" + value +
                    "'");
        } else if (key == "p1") {
            cfg.p1 = parse_order(key, value);
        } else if (key == "q1") {
            cfg.q1 = parse_order(key, value);
        } else if (key == "eta1_factor") {
            cfg.eta1_factor = parse_double(key, value);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parse_long(key, value));
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_long(key, value));
        } else if (key == "out_csv") {
            cfg.out_csv = value;
        } else if (key == "out_svg") {
            cfg.out_svg = value;
        } else {
            throw std::runtime_error("config: unknown key '" + key + "' on line " +
                                     std::to_string(lineno));
        }
    }

    cfg.scenario.noise_power = db_to_linear(noise_db);
    cfg.scenario.interferers.at(0).power = db_to_linear(inr_db) * cfg.scenario.noise_power;

    if (cfg.scenario.ula.n < 2)
        throw std::runtime_error("config: sensors must be at least 2");
    if (cfg.scenario.snapshots < 1)
        throw std::runtime_error("config: snapshots must be positive");
    if (cfg.snr_list_db.empty())
        throw std::runtime_error("config: snr_list_db must be nonempty");
    if (cfg.pq_list.empty())
        throw std::runtime_error("config: pq_list must be nonempty");
    if (cfg.runs < 1)
        throw std::runtime_error("config: runs must be positive");
    if (cfg.eta_factor < 0.0 || cfg.gamma_factor < 0.0 || cfg.eta1_factor < 0.0)
        throw std::runtime_error("config: norm-budget factors must be nonnegative");
    if (cfg.alpha < 0.0)
        throw std::runtime_error("config: alpha must be nonnegative");
    if (cfg.threads < 1)
        throw std::runtime_error("config: threads must be positive");
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open '" + path + "'");
    return parse_config(in);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg)
{
    if (cfg.runs < 1)
        throw std::invalid_argument("run_experiment: runs must be positive");
    if (cfg.snr_list_db.empty() || cfg.pq_list.empty())
        throw std::invalid_argument("run_experiment: empty sweep");
    if (cfg.threads < 1)
        throw std::invalid_argument("run_experiment: threads must be positive");

    std::vector<SnrContext> contexts;
    contexts.reserve(cfg.snr_list_db.size());
    for (double snr : cfg.snr_list_db)
        contexts.push_back(make_snr_context(cfg, snr));

    const std::size_t n_pq = cfg.pq_list.size();
    const std::size_t n_runs = static_cast<std::size_t>(cfg.runs);
    const std::size_t total = contexts.size() * n_pq * n_runs;
    std::vector<ResultRow> rows(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= total)
                return;
            const std::size_t si = i / (n_pq * n_runs);
            const std::size_t pi = (i / n_runs) % n_pq;
            const int run = static_cast<int>(i % n_runs);
            rows[i] = run_cell(cfg, contexts[si], static_cast<int>(si), cfg.pq_list[pi], run);
        }
    };

    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.threads),
                                                        std::max<std::size_t>(total, 1));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t k = 0; k < n_threads; ++k)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    return rows;
}

void emit_csv(const std::vector<ResultRow>& rows, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    out << kCsvHeader << "\n";
    for (const auto& r : rows) {
        out << fmt_double(r.snr_db) << ',' << r.p.str() << ',' << r.q.str() << ',' << r.run << ','
            << fmt_double(r.sinr_db) << ',' << fmt_double(r.worst_case_sinr_db) << ','
            << fmt_double(r.opt_bound_db) << ',' << r.iterations << ',' << fmt_double(r.cpu_ms)
            << ',' << csv_field(r.status) << "\n";
    }
    if (!out)
        throw std::runtime_error("emit_csv: write to '" + path + "' failed");
}

std::vector<ResultRow> parse_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("parse_csv: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("parse_csv: empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kCsvHeader)
        throw std::runtime_error("parse_csv: unexpected header '" + line + "'");

    std::vector<ResultRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != 10)
            throw std::runtime_error("parse_csv: line " + std::to_string(lineno) + " has " +
                                     std::to_string(f.size()) + " fields, expected 10");
        ResultRow r;
        r.snr_db = std::stod(f[0]);
        const auto p = ExtRational::parse(f[1]);
        const auto q = ExtRational::parse(f[2]);
        if (!p || !q)
            throw std::runtime_error("parse_csv: bad norm order on line " +
                                     std::to_string(lineno));
        r.p = *p;
        r.q = *q;
        r.run = static_cast<int>(std::stol(f[3]));
        r.sinr_db = std::stod(f[4]);
        r.worst_case_sinr_db = std::stod(f[5]);
        r.opt_bound_db = std::stod(f[6]);
        r.iterations = static_cast<int>(std::stol(f[7]));
        r.cpu_ms = std::stod(f[8]);
        r.status = f[9];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<std::string> emit_svg_lines(const std::vector<ResultRow>& rows, SvgMetric metric,
                                        const std::string& path)
{
    std::vector<std::string> warnings;

    struct Series {
        std::string label;
        std::map<double, std::pair<double, int>> acc; // snr -> (sum, count)
    };
    std::vector<Series> series;
    auto series_for = [&](const ResultRow& r) -> Series& {
        const std::string label = "p=" + r.p.str() + ", q=" + r.q.str();
        for (auto& s : series)
            if (s.label == label)
                return s;
        series.push_back({label, {}});
        return series.back();
    };

    for (const auto& r : rows) {
        const double v = metric == SvgMetric::MeanSinrDb ? r.sinr_db : r.cpu_ms;
        auto& s = series_for(r);
        if (std::isfinite(v)) {
            auto& slot = s.acc[r.snr_db];
            slot.first += v;
            slot.second += 1;
        } else {
            s.acc.try_emplace(r.snr_db, 0.0, 0);
        }
    }

    struct Polyline {
        std::string label;
        std::vector<std::pair<double, double>> pts;
    };
    std::vector<Polyline> lines;
    for (const auto& s : series) {
        Polyline pl{s.label, {}};
        for (const auto& [snr, slot] : s.acc)
            if (slot.second > 0)
                pl.pts.push_back({snr, slot.first / slot.second});
        if (pl.pts.empty()) {
            warnings.push_back("series " + s.label + ": no finite data, skipped");
            continue;
        }
        lines.push_back(std::move(pl));
    }

    double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& pl : lines) {
        for (const auto& [x, y] : pl.pts) {
            if (first) {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            } else {
                xmin = std::min(xmin, x);
                xmax = std::max(xmax, x);
                ymin = std::min(ymin, y);
                ymax = std::max(ymax, y);
            }
        }
    }
    if (xmax - xmin < 1e-12) {
        xmin -= 1.0;
        xmax += 1.0;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 1.0;
        ymax += 1.0;
    }

    const double width = 840.0, height = 560.0;
    const double left = 72.0, right = 660.0, top = 40.0, bottom = 500.0;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
    auto py = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
    const std::string y_label =
        metric == SvgMetric::MeanSinrDb ? "mean output SINR (dB)" : "mean solve time (ms)";

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("emit_svg_lines: cannot open '" + path + "' for writing");
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
        << num(height) << "\" viewBox=\"0 0 " << num(width) << " " << num(height) << "\">\n";
    out << "  <rect x=\"0\" y=\"0\" width=\"" << num(width) << "\" height=\"" << num(height)
        << "\" fill=\"white\"/>\n";

    out << "  <g stroke=\"black\" stroke-width=\"1\">\n";
    out << "    <line x1=\"" << num(left) << "\" y1=\"" << num(bottom) << "\" x2=\"" << num(right)
        << "\" y2=\"" << num(bottom) << "\"/>\n";
    out << "    <line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left)
        << "\" y2=\"" << num(bottom) << "\"/>\n";
    out << "  </g>\n";

    const int n_ticks = 5;
    out << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (int i = 0; i < n_ticks; ++i) {
        const double xv = xmin + (xmax - xmin) * i / (n_ticks - 1);
        const double yv = ymin + (ymax - ymin) * i / (n_ticks - 1);
        out << "    <line x1=\"" << num(px(xv)) << "\" y1=\"" << num(bottom) << "\" x2=\""
            << num(px(xv)) << "\" y2=\"" << num(bottom + 5) << "\" stroke=\"black\"/>\n";
        out << "    <text x=\"" << num(px(xv)) << "\" y=\"" << num(bottom + 20)
            << "\" text-anchor=\"middle\">" << xml_escape(num(xv)) << "</text>\n";
        out << "    <line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(yv)) << "\" x2=\""
            << num(left) << "\" y2=\"" << num(py(yv)) << "\" stroke=\"black\"/>\n";
        out << "    <text x=\"" << num(left - 9) << "\" y=\"" << num(py(yv) + 4)
            << "\" text-anchor=\"end\">" << xml_escape(num(yv)) << "</text>\n";
    }
    out << "    <text x=\"" << num((left + right) / 2) << "\" y=\"" << num(bottom + 42)
        << "\" text-anchor=\"middle\" font-size=\"14\">SNR (dB)</text>\n";
    out << "    <text x=\"18\" y=\"" << num((top + bottom) / 2)
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << num((top + bottom) / 2) << ")\">" << xml_escape(y_label) << "</text>\n";
    out << "  </g>\n";

    for (std::size_t k = 0; k < lines.size(); ++k) {
        const char* color = palette[k % (sizeof(palette) / sizeof(palette[0]))];
        out << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t j = 0; j < lines[k].pts.size(); ++j) {
            if (j)
                out << ' ';
            out << num(px(lines[k].pts[j].first)) << ',' << num(py(lines[k].pts[j].second));
        }
        out << "\"/>\n";
        for (const auto& [x, y] : lines[k].pts)
            out << "  <circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        const double ly = top + 8.0 + 20.0 * static_cast<double>(k);
        out << "  <line x1=\"" << num(right + 14) << "\" y1=\"" << num(ly) << "\" x2=\""
            << num(right + 44) << "\" y2=\"" << num(ly) << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "  <text x=\"" << num(right + 50) << "\" y=\"" << num(ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(lines[k].label)
            << "</text>\n";
    }

    out << "</svg>\n";
    if (!out)
        throw std::runtime_error("emit_svg_lines: write to '" + path + "' failed");
    return warnings;
}

} // namespace rabeam
