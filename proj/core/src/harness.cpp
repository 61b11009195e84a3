#include "dgff/harness.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <sstream>

#include <json.hpp>
#include <openssl/evp.h>

#include "dgff/brw.hpp"
#include "dgff/chaos.hpp"
#include "dgff/error.hpp"
#include "dgff/extremes.hpp"
#include "dgff/green.hpp"
#include "dgff/network.hpp"
#include "dgff/parallel.hpp"
#include "dgff/rwre.hpp"

namespace dgff {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------- config

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T, class F>
T parse_number(const std::string& key, const std::string& text, F conv)
{
    try {
        std::size_t pos = 0;
        T v = conv(text, &pos);
        require(pos == text.size(), ErrorKind::Validation, "parameter " + key + ": trailing characters in '" + text + "'");
        return v;
    } catch (const std::logic_error&) {
        fail(ErrorKind::Validation, "parameter " + key + ": not a number: '" + text + "'");
    }
}

} // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in)
{
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        require(eq != std::string::npos, ErrorKind::Validation, "config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        require(!key.empty(), ErrorKind::Validation, "config line " + std::to_string(lineno) + ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const
{
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

double ExperimentConfig::get_double(const std::string& key, double fallback) const
{
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    double v = parse_number<double>(key, it->second, [](const std::string& s, std::size_t* p) { return std::stod(s, p); });
    require(std::isfinite(v), ErrorKind::Validation, "parameter " + key + " must be finite");
    return v;
}

long long ExperimentConfig::get_int(const std::string& key, long long fallback) const
{
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    return parse_number<long long>(key, it->second, [](const std::string& s, std::size_t* p) { return std::stoll(s, p); });
}

std::vector<long long> ExperimentConfig::get_int_list(const std::string& key, const std::vector<long long>& fallback) const
{
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    std::vector<long long> out;
    std::stringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty())
            out.push_back(parse_number<long long>(key, tok, [](const std::string& s, std::size_t* p) { return std::stoll(s, p); }));
    }
    require(!out.empty(), ErrorKind::Validation, "parameter " + key + " is an empty list");
    return out;
}

std::string ExperimentConfig::output_path(const std::string& name) const
{
    fs::path p(name);
    return p.is_absolute() ? p.string() : (fs::path(out_dir) / p).string();
}

ExperimentConfig load_config(std::istream& in)
{
    ExperimentConfig cfg;
    for (auto& [k, v] : parse_key_values(in)) {
        if (k == "experiment") cfg.experiment = v;
        else if (k == "seed") cfg.seed = static_cast<std::uint64_t>(parse_number<unsigned long long>(k, v, [](const std::string& s, std::size_t* p) { return std::stoull(s, p); }));
        else if (k == "threads") cfg.threads = static_cast<int>(parse_number<long long>(k, v, [](const std::string& s, std::size_t* p) { return std::stoll(s, p); }));
        else if (k == "out-dir" || k == "out_dir") cfg.out_dir = v;
        else cfg.params[k] = v;
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path)
{
    std::ifstream in(path);
    require(in.good(), ErrorKind::Io, "cannot open config file " + path);
    return load_config(in);
}

// ------------------------------------------------------------------ hashing

std::string git_blob_sha1(std::string_view content)
{
    std::string header = "blob " + std::to_string(content.size());
    header.push_back('\0');
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    require(ctx != nullptr, ErrorKind::Io, "cannot allocate digest context");
    bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
              EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
              EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
              EVP_DigestFinal_ex(ctx, md, &len) == 1;
    EVP_MD_CTX_free(ctx);
    require(ok, ErrorKind::Io, "SHA-1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

// --------------------------------------------------------------- field io

void write_field_binary(std::ostream& out, const Field& f)
{
    std::int64_t hdr[2] = {f.domain().scale(), static_cast<std::int64_t>(f.size())};
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    out.write(reinterpret_cast<const char*>(f.values().data()), static_cast<std::streamsize>(sizeof(double) * f.size()));
}

std::vector<Field> read_fields_binary(std::istream& in, const LatticeDomain& domain)
{
    std::vector<Field> out;
    std::int64_t hdr[2];
    while (in.read(reinterpret_cast<char*>(hdr), sizeof hdr)) {
        require(hdr[1] == static_cast<std::int64_t>(domain.size()), ErrorKind::Validation, "field record does not match the domain size");
        Eigen::VectorXd v(static_cast<Eigen::Index>(hdr[1]));
        require(static_cast<bool>(in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(sizeof(double) * v.size()))),
                ErrorKind::Io, "truncated field record");
        out.emplace_back(domain, std::move(v));
    }
    return out;
}

void write_field_csv(std::ostream& out, const Field& f, std::size_t replica, bool header)
{
    if (header) out << "replica,index,x,y,value\n";
    out.precision(17);
    for (std::size_t i = 0; i < f.domain().size(); ++i) {
        const Vertex& v = f.domain().vertex(i);
        out << replica << ',' << i << ',' << v.x << ',' << v.y << ',' << f[static_cast<Eigen::Index>(i)] << '\n';
    }
}

// -------------------------------------------------------------- experiments

namespace {

class Writer {
public:
    explicit Writer(const ExperimentConfig& cfg) : cfg_(cfg) {}

    void write(const std::string& name, const std::string& content)
    {
        std::string path = cfg_.output_path(name);
        fs::path parent = fs::path(path).parent_path();
        if (!parent.empty()) fs::create_directories(parent);
        std::ofstream out(path, std::ios::binary);
        require(out.good(), ErrorKind::Io, "cannot write " + path);
        out << content;
        out.close();
        require(!out.fail(), ErrorKind::Io, "failed writing " + path);
        outputs.push_back({path, git_blob_sha1(content), content.size()});
    }

    std::vector<OutputFile> outputs;

private:
    const ExperimentConfig& cfg_;
};

json summary_json(const EstimatorSummary& s)
{
    json j;
    j["n"] = s.n;
    j["mean"] = s.mean;
    j["variance"] = s.variance;
    j["se"] = s.se ? json(*s.se) : json(nullptr);
    if (!s.quantiles.empty()) {
        json q = json::array();
        for (auto& [p, v] : s.quantiles) q.push_back({p, v});
        j["quantiles"] = q;
    }
    if (s.ci) j["ci"] = {s.ci->first, s.ci->second};
    return j;
}

int positive_int(const ExperimentConfig& cfg, const std::string& key, long long fallback, long long max = 1LL << 30)
{
    long long v = cfg.get_int(key, fallback);
    require(v >= 1 && v <= max, ErrorKind::Validation, "parameter " + key + " must lie in [1, " + std::to_string(max) + "]");
    return static_cast<int>(v);
}

Rng replica_rng(const ExperimentConfig& cfg, std::size_t r)
{
    return SeedStream(cfg.seed).stream(r, stream_tag(cfg.experiment));
}

LatticeDomain config_domain(const ExperimentConfig& cfg, const std::string& fallback)
{
    return parse_domain_spec(cfg.get("domain", fallback));
}

std::string fmt(double x)
{
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

json run_green(const ExperimentConfig& cfg, Writer& w)
{
    LatticeDomain d = config_domain(cfg, "box:16");
    require(d.size() <= 4096, ErrorKind::Validation, "dense Green dump limited to 4096 vertices");
    GreenOperator g = green_matrix(d);
    std::ostringstream out;
    out.precision(17);
    for (Eigen::Index i = 0; i < g.matrix().rows(); ++i) {
        for (Eigen::Index j = 0; j < g.matrix().cols(); ++j) out << (j ? "," : "") << g.matrix()(i, j);
        out << '\n';
    }
    w.write(cfg.get("dump", "G.csv"), out.str());
    json j;
    j["vertices"] = d.size();
    j["poisson_residual"] = poisson_residual(g);
    j["max_diagonal"] = g.matrix().diagonal().maxCoeff();
    return j;
}

json run_sample(const ExperimentConfig& cfg, Writer& w)
{
    LatticeDomain d = config_domain(cfg, "box:16");
    const int reps = positive_int(cfg, "reps", 1);
    const std::string name = cfg.get("out", "fields.bin");
    const bool csv = fs::path(name).extension() == ".csv";
    FieldSampler sampler(d);
    std::vector<Field> fields(static_cast<std::size_t>(reps), Field(d));
    parallel_for(fields.size(), cfg.threads, [&](std::size_t r) {
        Rng rng = replica_rng(cfg, r);
        fields[r] = sampler.sample(rng);
    });
    std::ostringstream out;
    for (std::size_t r = 0; r < fields.size(); ++r) {
        if (csv) write_field_csv(out, fields[r], r, r == 0);
        else write_field_binary(out, fields[r]);
    }
    w.write(name, out.str());
    json j;
    j["vertices"] = d.size();
    j["replicas"] = reps;
    j["format"] = csv ? "csv" : "bin";
    return j;
}

json run_levelset(const ExperimentConfig& cfg, Writer& w)
{
    LatticeDomain d = config_domain(cfg, "box:64");
    const double lambda = cfg.get_double("lambda", 0.3);
    require(lambda > 0.0 && lambda < 1.0, ErrorKind::Validation, "lambda must lie in (0,1)");
    const int reps = positive_int(cfg, "reps", 100);
    FieldSampler sampler(d);
    std::vector<double> sizes(static_cast<std::size_t>(reps)), mass(static_cast<std::size_t>(reps));
    std::string first;
    parallel_for(sizes.size(), cfg.threads, [&](std::size_t r) {
        Rng rng = replica_rng(cfg, r);
        Field h = sampler.sample(rng);
        PointMeasure pm = intermediate_measure(h, lambda);
        sizes[r] = static_cast<double>(pm.atoms.size());
        mass[r] = pm.total_mass();
        if (r == 0) first = pm.to_json_lines();
    });
    std::ostringstream out;
    out << "replica,level_set_size,mass\n";
    for (std::size_t r = 0; r < sizes.size(); ++r) out << r << ',' << sizes[r] << ',' << fmt(mass[r]) << '\n';
    w.write(cfg.get("out", "levelset.csv"), out.str());
    w.write(cfg.get("measure", "levelset_measure.jsonl"), first);
    json j;
    j["lambda"] = lambda;
    j["a_N"] = a_N(d.scale(), lambda);
    j["K_N"] = K_N(d.scale(), a_N(d.scale(), lambda));
    j["size"] = summary_json(estimate(sizes));
    j["mass"] = summary_json(estimate(mass));
    return j;
}

json run_levelset_exponent(const ExperimentConfig& cfg, Writer& w)
{
    const double lambda = cfg.get_double("lambda", 0.2);
    require(lambda > 0.0 && lambda < 1.0, ErrorKind::Validation, "lambda must lie in (0,1)");
    auto Ns = cfg.get_int_list("Ns", {64, 128, 256, 512});
    const int reps = positive_int(cfg, "reps", 200);
    std::vector<double> lx, ly;
    std::ostringstream out;
    out << "N,mean_size,se\n";
    for (std::size_t i = 0; i < Ns.size(); ++i) {
        require(Ns[i] >= 4 && Ns[i] <= 2048, ErrorKind::Validation, "N must lie in [4, 2048]");
        const int N = static_cast<int>(Ns[i]);
        LatticeDomain d = make_box(N);
        FieldSampler sampler(d);
        const double a = a_N(N, lambda);
        std::vector<double> sizes(static_cast<std::size_t>(reps));
        const SeedStream seeds = SeedStream(cfg.seed).child(static_cast<std::uint64_t>(N));
        parallel_for(sizes.size(), cfg.threads, [&](std::size_t r) {
            Rng rng = seeds.stream(r, stream_tag(cfg.experiment));
            sizes[r] = static_cast<double>(level_set(sampler.sample(rng), a).size());
        });
        auto s = estimate(sizes);
        require(s.mean > 0.0, ErrorKind::Validation, "empty level sets; increase N or reps");
        lx.push_back(std::log(static_cast<double>(N)));
        ly.push_back(std::log(s.mean));
        out << N << ',' << fmt(s.mean) << ',' << (s.se ? fmt(*s.se) : std::string("")) << '\n';
    }
    w.write(cfg.get("out", "levelset_exponent.csv"), out.str());
    LinearFit f = linear_fit(lx, ly);
    json j;
    j["lambda"] = lambda;
    j["slope"] = f.slope;
    j["slope_se"] = f.slope_se;
    j["ci"] = {f.slope - 1.96 * f.slope_se, f.slope + 1.96 * f.slope_se};
    j["target"] = 2.0 * (1.0 - lambda * lambda);
    return j;
}

json run_maxstat(const ExperimentConfig& cfg, Writer& w)
{
    LatticeDomain d = config_domain(cfg, "box:64");
    const int reps = positive_int(cfg, "reps", 100);
    const double N = d.scale();
    const double r = cfg.get_double("radius", default_local_radius(N));
    const int window = positive_int(cfg, "window", 5, 64);
    const double depth = cfg.get_double("depth", 3.0);
    FieldSampler sampler(d);
    std::vector<double> maxima(static_cast<std::size_t>(reps));
    std::vector<Vertex> arg(static_cast<std::size_t>(reps));
    std::string first;
    parallel_for(maxima.size(), cfg.threads, [&](std::size_t k) {
        Rng rng = replica_rng(cfg, k);
        Field h = sampler.sample(rng);
        FieldMax m = field_max(h);
        maxima[k] = m.value;
        arg[k] = d.vertex(static_cast<std::size_t>(m.index));
        if (k == 0) first = structured_measure(h, r, window, depth).to_json_lines();
    });
    std::ostringstream out;
    out << "replica,max,centered,x,y\n";
    for (std::size_t k = 0; k < maxima.size(); ++k)
        out << k << ',' << fmt(maxima[k]) << ',' << fmt(maxima[k] - m_N(N)) << ',' << arg[k].x << ',' << arg[k].y << '\n';
    w.write(cfg.get("out", "maxima.csv"), out.str());
    w.write(cfg.get("measure", "structured_measure.jsonl"), first);
    MaxStats s = max_stats(maxima, N, arg);
    json j;
    j["N"] = N;
    j["m_N"] = m_N(N);
    j["max"] = summary_json(s.max);
    j["median"] = s.median;
    j["centered_median"] = s.centered_median;
    return j;
}

json run_brw(const ExperimentConfig& cfg, Writer& w)
{
    const int b = positive_int(cfg, "b", 4, 64);
    const int n = positive_int(cfg, "n", 10, 64);
    const int reps = positive_int(cfg, "reps", 1000);
    require(b >= 2, ErrorKind::Validation, "b must be >= 2");
    BrwMaxStats s = brw_max_stats(b, n, reps, SeedStream(cfg.seed), cfg.threads);
    std::ostringstream out;
    out << "replica,max,centered\n";
    for (std::size_t k = 0; k < s.maxima.size(); ++k) out << k << ',' << fmt(s.maxima[k]) << ',' << fmt(s.maxima[k] - s.m_tilde) << '\n';
    w.write(cfg.get("out", "stats.csv"), out.str());
    json j;
    j["b"] = b;
    j["n"] = n;
    j["m_tilde"] = s.m_tilde;
    j["centered"] = summary_json(s.centered);
    return j;
}

json run_chaos(const ExperimentConfig& cfg, Writer& w)
{
    const double lambda = cfg.get_double("lambda", 0.3);
    require(lambda > 0.0 && lambda < 1.0, ErrorKind::Validation, "lambda must lie in (0,1)");
    const int p = positive_int(cfg, "resolution-log2", 7, 9);
    const int n = static_cast<int>(cfg.get_int("levels", 6));
    const std::string mode = cfg.get("mode", "martingale");
    require(n >= 0 && n <= p, ErrorKind::Validation, "levels must lie in [0, resolution-log2]");
    const int m = static_cast<int>(cfg.get_int("cells", std::min(n, p)));
    require(m >= 0 && m <= p, ErrorKind::Validation, "cells must lie in [0, resolution-log2]");
    ChaosField f(p);
    Rng rng = replica_rng(cfg, 0);
    json j;
    j["lambda"] = lambda;
    j["levels"] = n;
    j["mode"] = mode;
    std::optional<ChaosMeasure> mu;
    if (mode == "martingale") {
        mu = martingale_chaos(f, n, chaos_alpha() * lambda, rng);
    } else if (mode == "seneta-heyde") {
        mu = seneta_heyde(martingale_chaos(f, n, chaos_alpha(), rng));
    } else if (mode == "hierarchical") {
        require(n < p, ErrorKind::Validation, "hierarchical mode needs levels < resolution-log2");
        auto y = hierarchical_chaos(f, n, lambda, rng);
        j["second_moment_regime"] = y.second_moment_regime;
        j["expected_mass"] = hierarchical_chaos_expected_mass(f, lambda);
        mu = y.measure;
    } else {
        fail(ErrorKind::Validation, "unknown chaos mode '" + mode + "'");
    }
    w.write(cfg.get("out", "chaos.csv"), mu->to_csv(m));
    j["total_mass"] = mu->total_mass();
    j["beta"] = mu->beta();
    return j;
}

std::vector<int> vertex_set_file(const std::string& path, const Network& net)
{
    std::ifstream in(path);
    require(in.good(), ErrorKind::Io, "cannot open vertex set " + path);
    auto v = read_vertex_set(in, net);
    require(!v.empty(), ErrorKind::Validation, "vertex set " + path + " is empty");
    return v;
}

json decomposition_json(const Network& net, const FlowDecomposition& d)
{
    json items = json::array();
    for (const auto& it : d.items) {
        json e = json::array();
        for (std::size_t k = 0; k < it.edges.size(); ++k) {
            const auto& ed = net.edge(static_cast<std::size_t>(it.edges[k]));
            e.push_back({{"u", net.label(ed.u)}, {"v", net.label(ed.v)}, {"split", it.split[k]}});
        }
        items.push_back({{"alpha", it.alpha}, {"edges", e}});
    }
    return {{"kind", d.kind == FlowDecomposition::Paths ? "paths" : "cutsets"},
            {"reconstruction", d.reconstruction()},
            {"alpha_sum", d.alpha_sum()},
            {"items", items}};
}

json run_resist(const ExperimentConfig& cfg, Writer& w)
{
    require(cfg.has("net") && cfg.has("src") && cfg.has("dst"), ErrorKind::Validation, "resist needs net, src and dst");
    Network net = read_network_file(cfg.get("net", ""));
    auto A = vertex_set_file(cfg.get("src", ""), net);
    auto B = vertex_set_file(cfg.get("dst", ""), net);
    Resistance r = effective_resistance(net, A, B);
    json j;
    j["R_eff"] = r.R;
    j["C_eff"] = r.C;
    j["node_residual"] = r.solution.node_residual;
    const std::string dec = cfg.get("decompose", "none");
    if (dec != "none") {
        require(A.size() == 1 && B.size() == 1, ErrorKind::Validation, "decompositions need single-vertex terminals");
        json out;
        if (dec == "paths" || dec == "both") out["paths"] = decomposition_json(net, path_decompose(net, A[0], B[0]));
        if (dec == "cuts" || dec == "both") out["cutsets"] = decomposition_json(net, cut_decompose(net, A[0], B[0]));
        require(!out.is_null(), ErrorKind::Validation, "decompose must be none, paths, cuts or both");
        w.write(cfg.get("decomposition-out", "decomposition.json"), out.dump(2) + "\n");
    }
    return j;
}

json run_walk(const ExperimentConfig& cfg, Writer& w)
{
    const double beta = cfg.get_double("beta", 0.6);
    require(beta >= 0.0, ErrorKind::Validation, "beta must be >= 0");
    const int N = positive_int(cfg, "N", 64, 1024);
    const int reps = positive_int(cfg, "reps", 100);
    const long long cap = cfg.get_int("max-steps", 100000000LL);
    require(cap >= 1 && cap <= (1LL << 31) - 1, ErrorKind::Validation, "max-steps out of range");
    const PinnedSampler pinned(make_centered_box(4 * N));
    const LatticeDomain sub = make_centered_box(N + 1);
    struct Row { std::optional<int> exit; int returns; Vertex disp; double expected; };
    std::vector<Row> rows(static_cast<std::size_t>(reps));
    parallel_for(rows.size(), cfg.threads, [&](std::size_t r) {
        Rng rng = replica_rng(cfg, r);
        Field h = pinned.sample(rng);
        Eigen::VectorXd v(static_cast<Eigen::Index>(sub.size()));
        for (std::size_t i = 0; i < sub.size(); ++i) v[static_cast<Eigen::Index>(i)] = h.at(sub.vertex(i));
        WalkKernel k = build_kernel(Field(sub, v), beta);
        std::vector<char> outside(sub.size(), 0);
        std::vector<int> A;
        for (std::size_t i = 0; i < sub.size(); ++i) {
            if (linf_norm(sub.vertex(i)) > N) outside[i] = 1;
            else A.push_back(static_cast<int>(i));
        }
        const int o = sub.index({0, 0});
        WalkSummary s = walk_simulate(k, o, static_cast<int>(cap), rng, &outside);
        rows[r] = {s.exit_time, s.returns, s.displacement, expected_exit_time_solve(k, o, A)};
    });
    std::ostringstream out;
    out << "replica,exit_time,returns,dx,dy,expected_exit_time\n";
    std::vector<double> exits, expected;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto& row = rows[r];
        out << r << ',' << (row.exit ? std::to_string(*row.exit) : std::string("")) << ',' << row.returns << ','
            << row.disp.x << ',' << row.disp.y << ',' << fmt(row.expected) << '\n';
        if (row.exit) exits.push_back(*row.exit);
        expected.push_back(row.expected);
    }
    w.write(cfg.get("out", "walk.csv"), out.str());
    json j;
    j["beta"] = beta;
    j["N"] = N;
    j["theta"] = theta_exponent(beta);
    j["exited"] = exits.size();
    j["expected_exit_time"] = summary_json(estimate(expected));
    if (!exits.empty()) j["exit_time"] = summary_json(estimate(exits));
    return j;
}

using Runner = std::function<json(const ExperimentConfig&, Writer&)>;

const std::map<std::string, Runner>& registry()
{
    static const std::map<std::string, Runner> r = {
        {"green", run_green},       {"sample", run_sample},
        {"levelset", run_levelset}, {"levelset-exponent", run_levelset_exponent},
        {"maxstat", run_maxstat},   {"brw", run_brw},
        {"chaos", run_chaos},       {"resist", run_resist},
        {"walk", run_walk},
    };
    return r;
}

} // namespace

std::vector<std::string> experiment_names()
{
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    auto it = registry().find(cfg.experiment);
    require(it != registry().end(), ErrorKind::UnknownExperiment, "unknown experiment '" + cfg.experiment + "'");
    require(cfg.threads >= 0, ErrorKind::Validation, "threads must be >= 0");
    fs::create_directories(cfg.out_dir);
    Writer w(cfg);
    json summary = it->second(cfg, w);
    summary["experiment"] = cfg.experiment;
    const std::string summary_text = summary.dump(2) + "\n";
    w.write(cfg.experiment + "_summary.json", summary_text);

    json manifest;
    manifest["schema_version"] = kManifestSchema;
    manifest["experiment"] = cfg.experiment;
    manifest["seed"] = cfg.seed;
    manifest["threads"] = cfg.threads;
    manifest["out_dir"] = cfg.out_dir;
    manifest["params"] = cfg.params;
    json outs = json::array();
    for (const auto& o : w.outputs)
        outs.push_back({{"path", fs::path(o.path).lexically_relative(cfg.out_dir).string()}, {"sha1", o.sha1}, {"bytes", o.bytes}});
    manifest["outputs"] = outs;
    // Config echo re-readable by load_config.
    std::ostringstream echo;
    echo << "experiment=" << cfg.experiment << "\nseed=" << cfg.seed << "\nthreads=" << cfg.threads << '\n';
    for (const auto& [k, v] : cfg.params) echo << k << '=' << v << '\n';
    manifest["config"] = echo.str();

    ExperimentResult res;
    res.summary_json = summary_text;
    res.outputs = w.outputs;
    res.manifest_path = cfg.output_path("manifest.json");
    std::ofstream out(res.manifest_path);
    require(out.good(), ErrorKind::Io, "cannot write " + res.manifest_path);
    out << manifest.dump(2) << '\n';
    return res;
}

} // namespace dgff
