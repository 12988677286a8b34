#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "qtwist/arith.hpp"
#include "qtwist/bsd.hpp"
#include "qtwist/coefficients.hpp"
#include "qtwist/config_io.hpp"
#include "qtwist/csv.hpp"
#include "qtwist/error.hpp"
#include "qtwist/height.hpp"
#include "qtwist/lvalue.hpp"
#include "qtwist/models.hpp"
#include "qtwist/scan.hpp"
#include "qtwist/stats.hpp"
#include "qtwist/twist.hpp"
#include "qtwist/weight.hpp"

#ifndef QTWIST_VERSION
#define QTWIST_VERSION "unknown"
#endif

namespace qtwist::cli {
namespace {

namespace fs = std::filesystem;
using qtwist::format_double;

struct Common {
  std::string out_path;
  std::uint64_t seed = 0;
  unsigned workers = 0;
};

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_file(const std::string& path, ErrorKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    if (kind == ErrorKind::config) throw ConfigError("cannot open '" + path + "'");
    throw DomainError("cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Everything a command prints is assembled here first, so a failure midway
// never leaves a half-written file behind.
class Output {
 public:
  Output(const std::vector<std::string>& args, const Common& common, std::ostream& stdout_)
      : common_(common), stdout_(stdout_) {
    std::string cmd = "qtwist";
    for (const auto& a : args) cmd += " " + a;
    header_.push_back("qtwist " QTWIST_VERSION);
    header_.push_back("command: " + cmd);
    config_slot_ = header_.size();
    header_.push_back("config: none");
    header_.push_back("seed: " + std::to_string(common.seed));
    header_.push_back("timestamp: " + utc_now());
    header_.push_back("outputs: " + (common.out_path.empty() ? std::string("stdout") : common.out_path));
  }

  void config(const std::string& path, const std::string& bytes) {
    header_[config_slot_] = "config: " + path + " digest " + digest_hex(bytes);
  }
  void note(const std::string& line) { header_.push_back(line); }
  const std::vector<std::string>& header() const { return header_; }
  std::ostringstream& body() { return body_; }

  void columns(const std::string& line) { body_ << line << '\n'; }
  template <class... T>
  void row(const T&... fields) {
    std::size_t i = 0;
    ((body_ << (i++ ? "," : "") << fields), ...);
    body_ << '\n';
  }

  void commit() {
    std::ostringstream all;
    write_comment_lines(all, header_);
    all << body_.str();
    if (common_.out_path.empty()) {
      stdout_ << all.str();
      return;
    }
    const fs::path target(common_.out_path);
    fs::path tmp = target;
    tmp += ".partial";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw DomainError("cannot write '" + tmp.string() + "'");
      f << all.str();
      if (!f.flush()) throw DomainError("write to '" + tmp.string() + "' failed");
    }
    fs::rename(tmp, target);
  }

 private:
  const Common& common_;
  std::ostream& stdout_;
  std::vector<std::string> header_;
  std::size_t config_slot_ = 0;
  std::ostringstream body_;
};

CurveConfig load_config(const std::string& path, Output& o) {
  const std::string bytes = read_file(path, ErrorKind::config);
  o.config(path, bytes);
  return parse_curve_config(bytes, path);
}

std::vector<TwistRecord> load_scan(const std::string& path) {
  std::istringstream in(read_file(path, ErrorKind::usage));
  return read_scan_csv(in);
}

std::string f(double v) { return format_double(v); }

Provider choose_provider(const CurveConfig& cfg, std::size_t bound, const std::string& name) {
  if (name == "eta") return Provider::eta;
  if (name == "point-count") return Provider::point_count;
  if (name == "hybrid") return Provider::hybrid;
  AnTableOptions defaults;
  return cfg.eta && bound > defaults.point_count_cap ? Provider::eta : Provider::point_count;
}

CoefficientTable build_table(const CurveConfig& cfg, std::size_t bound, const std::string& provider, unsigned workers,
                             Output& o) {
  AnTableOptions opts;
  opts.provider = choose_provider(cfg, bound, provider);
  opts.workers = workers;
  o.note(std::string("coefficients: ") + to_string(opts.provider) + " to " + std::to_string(bound));
  return an_table(cfg, bound, opts);
}

std::vector<std::string> provider_names() { return {"auto", "eta", "point-count", "hybrid"}; }

// Odd primes up to pmax that do not divide N, with their traces.
void residuosity_primes(const CurveConfig& cfg, std::uint32_t pmax, std::vector<std::uint64_t>& primes,
                        std::vector<int>& ap) {
  const auto traces = prime_traces(cfg, pmax);
  const PrimeSieve sieve(pmax);
  for (auto p : sieve.primes()) {
    if (p == 2 || cfg.conductor % p == 0) continue;
    primes.push_back(p);
    ap.push_back(traces[p]);
  }
}

std::vector<std::int64_t> vanishing_set(const std::vector<TwistRecord>& records) {
  std::vector<std::int64_t> out;
  for (const auto& r : records)
    if (r.vanishing == Vanishing::yes) out.push_back(r.d);
  return out;
}

std::array<std::int64_t, 5> parse_model(const std::string& s) {
  const auto parts = split_csv_line(s);
  if (parts.size() != 5) throw DomainError("--model expects a1,a2,a3,a4,a6");
  std::array<std::int64_t, 5> a{};
  for (int i = 0; i < 5; ++i) {
    try {
      a[i] = std::stoll(parts[i]);
    } catch (const std::exception&) {
      throw DomainError("--model: bad coefficient '" + parts[i] + "'");
    }
  }
  return a;
}

// y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3, an integral model of the twist by d.
std::array<std::int64_t, 5> integral_twist_model(const CurveConfig& cfg, std::int64_t d) {
  const Invariants inv = invariants(cfg.a);
  const i128 dd = d;
  const i128 a4 = -27 * inv.c4 * dd * dd, a6 = -54 * inv.c6 * dd * dd * dd;
  constexpr i128 lim = std::numeric_limits<std::int64_t>::max();
  if (a4 > lim || -a4 > lim || a6 > lim || -a6 > lim)
    throw DomainError("twist model coefficients overflow 64 bits; pass --model and --point");
  return {0, 0, 0, static_cast<std::int64_t>(a4), static_cast<std::int64_t>(a6)};
}

int twist_torsion(const CurveConfig& cfg, std::int64_t d, int given) {
  if (given > 0) return given;
  if (d == 1) return cfg.torsion;
  return torsion_order_twist(cfg, d);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quadratic twist L-value statistics for elliptic curves", "qtwist"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QTWIST_VERSION);

  Common common;
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--out", common.out_path, "Write results to this file instead of stdout");
    sc->add_option("--seed", common.seed, "Random seed recorded in the manifest");
    sc->add_option("--workers", common.workers, "Worker threads (default: QTWIST_WORKERS or all cores)");
  };

  std::string curve, input, provider = "auto", parity_name = "both", signs_name = "both";
  std::uint64_t xmax = 0;
  double coarse = 1e-2, refine = 1e-4, eps = 1e-8, fraction = 0.1, k = -1.5;
  int order = 0, bootstrap = 200, torsion = 0;
  std::int64_t d = 1;
  bool classify = false, normalise = false, primes_only = false;

  auto* scan_cmd = app.add_subcommand("scan", "Evaluate L(E_d,1) or L'(E_d,1) over fundamental |d| < xmax");
  scan_cmd->add_option("--curve", curve)->required();
  scan_cmd->add_option("--xmax", xmax)->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 31));
  scan_cmd->add_option("--parity", parity_name)->check(CLI::IsMember({"odd", "even", "both"}));
  scan_cmd->add_option("--signs", signs_name)->check(CLI::IsMember({"positive", "negative", "both"}));
  scan_cmd->add_option("--coarse-eps", coarse)->check(CLI::PositiveNumber);
  scan_cmd->add_option("--refine-eps", refine)->check(CLI::PositiveNumber);
  scan_cmd->add_option("--provider", provider)->check(CLI::IsMember(provider_names()));
  add_common(scan_cmd);

  auto* lvalue_cmd = app.add_subcommand("lvalue", "Central value or derivative of one twist");
  lvalue_cmd->add_option("--curve", curve)->required();
  lvalue_cmd->add_option("--order", order)->check(CLI::Range(0, kMaxOrder));
  lvalue_cmd->add_option("--d", d, "Fundamental discriminant (1 for the curve itself)");
  lvalue_cmd->add_option("--eps", eps, "Absolute error target")->check(CLI::PositiveNumber);
  lvalue_cmd->add_flag("--classify", classify, "Find the first order that does not vanish");
  lvalue_cmd->add_option("--provider", provider)->check(CLI::IsMember(provider_names()));
  add_common(lvalue_cmd);

  std::size_t bound = 100;
  auto* coeffs_cmd = app.add_subcommand("coeffs", "Dirichlet coefficients a_n");
  coeffs_cmd->add_option("--curve", curve)->required();
  coeffs_cmd->add_option("--bound", bound)->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  coeffs_cmd->add_flag("--primes", primes_only, "Only prime indices");
  coeffs_cmd->add_option("--provider", provider)->check(CLI::IsMember(provider_names()));
  add_common(coeffs_cmd);

  auto* dist_cmd = app.add_subcommand("distribution", "Cumulative distribution of nonzero scan values");
  dist_cmd->add_option("--in", input)->required();
  dist_cmd->add_flag("--normalise", normalise, "Divide each value by (log|d|)^r");
  add_common(dist_cmd);

  std::uint64_t xmin = 100;
  int points = 12;
  auto* fitexp_cmd = app.add_subcommand("fit-exponent", "Fit count ~ X^A to vanishing counts");
  fitexp_cmd->add_option("--in", input, "Scan CSV, or a CSV of X,count rows")->required();
  fitexp_cmd->add_option("--xmin", xmin, "Smallest X of the grid built from a scan")->check(CLI::PositiveNumber);
  fitexp_cmd->add_option("--points", points, "Grid size for a scan input")->check(CLI::Range(3, 1000));
  add_common(fitexp_cmd);

  auto* tail_cmd = app.add_subcommand("tail-slope", "Lower-tail exponent of the value distribution");
  tail_cmd->add_option("--in", input, "Scan CSV, or one value per line")->required();
  tail_cmd->add_flag("--normalise", normalise);
  tail_cmd->add_option("--fraction", fraction)->check(CLI::Range(1e-4, 1.0));
  tail_cmd->add_option("--bootstrap", bootstrap)->check(CLI::Range(2, 100000));
  add_common(tail_cmd);

  std::uint32_t pmax = 100;
  auto* res_cmd = app.add_subcommand("residuosity", "Vanishing counts in residue and nonresidue classes");
  res_cmd->add_option("--curve", curve)->required();
  res_cmd->add_option("--in", input, "Scan CSV")->required();
  res_cmd->add_option("--pmax", pmax)->check(CLI::Range(3u, 1u << 24));
  res_cmd->add_option("--k", k);
  add_common(res_cmd);

  std::size_t plant_count = 0;
  auto* fitk_cmd = app.add_subcommand("fit-k", "Fit the residuosity exponent k");
  fitk_cmd->add_option("--curve", curve)->required();
  auto* fitk_in = fitk_cmd->add_option("--in", input, "Scan CSV");
  auto* fitk_plant = fitk_cmd->add_option("--plant", plant_count, "Use a Monte Carlo set of this size instead");
  fitk_in->excludes(fitk_plant);
  fitk_cmd->add_option("--pmax", pmax)->check(CLI::Range(3u, 1u << 24));
  fitk_cmd->add_option("--k", k, "Exponent planted by --plant");
  add_common(fitk_cmd);

  auto* model_cmd = app.add_subcommand("model", "Heuristic models");
  model_cmd->require_subcommand(1);
  HeegnerParams hp;
  hp.trials = 10000;
  auto* heeg_cmd = model_cmd->add_subcommand("heegner", "Squared length of a sum of h random unit vectors");
  heeg_cmd->set_help_flag("--help", "Print this help message and exit");
  heeg_cmd->add_option("--h", hp.h)->required()->check(CLI::PositiveNumber);
  heeg_cmd->add_option("--trials", hp.trials)->check(CLI::PositiveNumber);
  add_common(heeg_cmd);
  GranvilleBox box;
  std::string quadrants = "all";
  auto* gran_cmd = model_cmd->add_subcommand("granville", "Count (u,v,d,w) with d w^2 = v(u^3 + A u v^2 + B v^3)");
  gran_cmd->add_option("--A", box.A);
  gran_cmd->add_option("--B", box.B);
  gran_cmd->add_option("--dmin", box.dmin)->required();
  gran_cmd->add_option("--dmax", box.dmax)->required();
  gran_cmd->add_option("--xmin", box.xmin);
  gran_cmd->add_option("--xmax", box.xmax)->required();
  gran_cmd->add_option("--quadrants", quadrants)->check(CLI::IsMember({"all", "positive"}));
  gran_cmd->add_flag("--fundamental", box.fundamental_only);
  gran_cmd->add_option("--budget", box.budget, "Largest number of (u,v) pairs to visit");
  add_common(gran_cmd);

  std::string scheme = "theta";
  double X = 0, theta = 1.0 / 6.0;
  int rank = 3;
  auto* predict_cmd = app.add_subcommand("predict", "Predicted count of high-rank twists up to X");
  predict_cmd->add_option("--scheme", scheme)->check(CLI::IsMember({"theta", "granville", "even-rank2"}));
  predict_cmd->add_option("--x", X)->required()->check(CLI::PositiveNumber);
  predict_cmd->add_option("--theta", theta);
  predict_cmd->add_option("--r", rank)->check(CLI::Range(2, 100));
  add_common(predict_cmd);

  std::string model_text, point_text;
  std::int64_t search_x = 300, search_e = 20;
  auto* bsd_cmd = app.add_subcommand("bsd", "BSD invariants and the Sha estimate for one twist");
  bsd_cmd->add_option("--curve", curve)->required();
  bsd_cmd->add_option("--d", d);
  bsd_cmd->add_option("--eps", eps)->check(CLI::PositiveNumber);
  bsd_cmd->add_option("--torsion", torsion, "Torsion order, needed when |d| <= 8");
  bsd_cmd->add_option("--model", model_text, "Model carrying --point, as a1,a2,a3,a4,a6");
  bsd_cmd->add_option("--point", point_text, "Rational point x,y for the regulator of an odd twist");
  bsd_cmd->add_option("--search-x", search_x)->check(CLI::PositiveNumber);
  bsd_cmd->add_option("--search-e", search_e)->check(CLI::PositiveNumber);
  bsd_cmd->add_option("--provider", provider)->check(CLI::IsMember(provider_names()));
  add_common(bsd_cmd);

  auto* bsdscan_cmd = app.add_subcommand("bsd-scan", "Sha estimates over even twists with |d| < xmax");
  bsdscan_cmd->add_option("--curve", curve)->required();
  bsdscan_cmd->add_option("--xmax", xmax)->required()->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 24));
  bsdscan_cmd->add_option("--signs", signs_name)->check(CLI::IsMember({"positive", "negative", "both"}));
  bsdscan_cmd->add_option("--eps", eps)->check(CLI::PositiveNumber);
  bsdscan_cmd->add_option("--provider", provider)->check(CLI::IsMember(provider_names()));
  add_common(bsdscan_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::usage);
  }

  try {
    Output o(args, common, out);

    if (*scan_cmd) {
      const auto cfg = load_config(curve, o);
      ScanPolicy policy;
      policy.coarse_eps = coarse;
      policy.refine_eps = refine;
      policy.signs = parse_sign_filter(signs_name);
      if (parity_name != "both") policy.parity = parse_parity(parity_name);
      policy.workers = common.workers;
      const auto M = scan_terms_needed(cfg, xmax, policy);
      const auto table = build_table(cfg, M, provider, common.workers, o);
      const auto res = scan(cfg, table, xmax, policy);
      o.note("xmax: " + std::to_string(xmax) + " (|d| < xmax)");
      o.note("coarse_eps: " + f(coarse) + " refine_eps: " + f(refine));
      o.note("skipped: " + std::to_string(res.skipped.size()) + " (gcd(d, 2N) > 1)");
      o.note("unresolved: " + std::to_string(res.unresolved));
      o.note("negative: " + std::to_string(res.negative));
      write_scan_csv(o.body(), res.records);
    } else if (*lvalue_cmd) {
      const auto cfg = load_config(curve, o);
      const auto tw = make_twist(cfg, d);
      if (classify) {
        const double threshold = 1e-2;
        std::size_t M = 0;
        for (int r = tw.parity == Parity::even ? 0 : 1; r <= kMaxOrder; r += 2)
          M = std::max(M, terms_needed(tw.conductor, r, threshold / 10));
        const auto table = build_table(cfg, M, provider, common.workers, o);
        const auto chi = d == 1 ? std::vector<std::int8_t>{} : character_table(d, M);
        const auto est = classify_rank(SeriesInput{table.view(), chi, tw.conductor}, tw.parity, threshold);
        o.columns("d,rank,resolved,value,error,terms,conductor");
        o.row(d, est.order, est.resolved ? "yes" : "no", f(est.value.value), f(est.value.error), est.value.terms,
              tw.conductor);
      } else {
        const auto M = terms_needed(tw.conductor, order, eps);
        const auto table = build_table(cfg, M, provider, common.workers, o);
        const auto chi = d == 1 ? std::vector<std::int8_t>{} : character_table(d, M);
        const auto v = l_derivative(SeriesInput{table.view(), chi, tw.conductor}, order, eps);
        o.note(std::string("parity: ") + to_string(tw.parity));
        o.columns("d,order,value,error,terms,conductor");
        o.row(d, order, f(v.value), f(v.error), v.terms, tw.conductor);
      }
    } else if (*coeffs_cmd) {
      const auto cfg = load_config(curve, o);
      const auto table = build_table(cfg, bound, provider, common.workers, o);
      o.columns(primes_only ? "p,a_p" : "n,a_n");
      for (std::size_t n = 1; n <= bound; ++n)
        if (!primes_only || is_prime(n)) o.row(n, table[n]);
    } else if (*dist_cmd) {
      const auto records = load_scan(input);
      const auto dist = cumulative_distribution(records, normalise);
      o.note("input: " + input);
      o.note(std::string("normalised: ") + (normalise ? "yes" : "no"));
      o.note("sample_size: " + std::to_string(dist.sample_size));
      o.note("zero_count: " + std::to_string(dist.zero_count));
      o.note("unresolved_count: " + std::to_string(dist.unresolved_count));
      o.columns("x,F");
      for (const auto& p : dist.points) o.row(f(p.x), f(p.F));
    } else if (*fitexp_cmd) {
      const std::string text = read_file(input, ErrorKind::usage);
      std::vector<std::pair<double, double>> counts;
      if (text.find("d,parity,r,value") != std::string::npos) {
        std::istringstream in(text);
        const auto records = read_scan_csv(in);
        std::vector<std::uint64_t> zeros;
        std::uint64_t top = 0;
        for (const auto& r : records) {
          const auto a = static_cast<std::uint64_t>(std::llabs(r.d));
          top = std::max(top, a);
          if (r.vanishing == Vanishing::yes) zeros.push_back(a);
        }
        std::sort(zeros.begin(), zeros.end());
        if (top + 1 <= xmin) throw DomainError("fit-exponent: --xmin is beyond the scan range");
        const double ratio = std::log(static_cast<double>(top + 1) / static_cast<double>(xmin)) / (points - 1);
        for (int i = 0; i < points; ++i) {
          const double Xi = static_cast<double>(xmin) * std::exp(ratio * i);
          const auto n = std::lower_bound(zeros.begin(), zeros.end(), static_cast<std::uint64_t>(std::ceil(Xi))) -
                         zeros.begin();
          if (n > 0) counts.emplace_back(Xi, static_cast<double>(n));
        }
      } else {
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty() || line[0] == '#' || line.find_first_not_of("0123456789.eE+-, ") != std::string::npos)
            continue;
          const auto parts = split_csv_line(line);
          if (parts.size() != 2) throw DomainError("fit-exponent: expected X,count rows");
          counts.emplace_back(std::stod(parts[0]), std::stod(parts[1]));
        }
      }
      for (const auto& [x, c] : counts) o.note("count X=" + f(x) + ": " + f(c));
      const auto fit = fit_power_exponent(counts);
      o.columns("estimate,std_error,points,upper_estimate,upper_std_error");
      o.row(f(fit.estimate), f(fit.std_error), fit.sample_size,
            fit.upper_estimate ? f(*fit.upper_estimate) : std::string("NA"),
            fit.upper_std_error ? f(*fit.upper_std_error) : std::string("NA"));
    } else if (*tail_cmd) {
      const std::string text = read_file(input, ErrorKind::usage);
      FitResult fit;
      if (text.find("d,parity,r,value") != std::string::npos) {
        std::istringstream in(text);
        const auto records = read_scan_csv(in);
        fit = tail_slope(cumulative_distribution(records, normalise), fraction, common.seed, bootstrap);
      } else {
        std::vector<double> v;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty() || line[0] == '#') continue;
          try {
            v.push_back(std::stod(line));
          } catch (const std::exception&) {
            if (v.empty()) continue;  // a column title
            throw DomainError("tail-slope: bad value '" + line + "'");
          }
        }
        fit = tail_slope(v, fraction, common.seed, bootstrap);
      }
      o.columns("estimate,std_error,sample_size,window");
      o.row(f(fit.estimate), f(fit.std_error), fit.sample_size, fit.window);
    } else if (*res_cmd) {
      const auto cfg = load_config(curve, o);
      std::vector<std::uint64_t> primes;
      std::vector<int> ap;
      residuosity_primes(cfg, pmax, primes, ap);
      const auto zeros = vanishing_set(load_scan(input));
      o.note("vanishing: " + std::to_string(zeros.size()));
      const auto rows = residuosity_table(zeros, primes, ap, k);
      o.columns("p,a_p,R,N,E,C");
      for (const auto& r : rows) o.row(r.p, r.ap, r.R, r.N, r.E ? f(*r.E) : std::string("NA"), f(r.C));
    } else if (*fitk_cmd) {
      const auto cfg = load_config(curve, o);
      std::vector<std::uint64_t> primes;
      std::vector<int> ap;
      residuosity_primes(cfg, pmax, primes, ap);
      std::vector<std::int64_t> zeros;
      if (plant_count > 0) {
        zeros = plant_vanishing_set(primes, ap, k, plant_count, common.seed);
        o.note("planted: " + std::to_string(plant_count) + " with k " + f(k));
      } else if (!input.empty()) {
        zeros = vanishing_set(load_scan(input));
      } else {
        throw DomainError("fit-k needs --in or --plant");
      }
      const auto fit = fit_k(residuosity_table(zeros, primes, ap));
      o.columns("estimate,std_error,primes");
      o.row(f(fit.estimate), f(fit.std_error), fit.sample_size);
    } else if (*heeg_cmd) {
      hp.seed = common.seed;
      hp.workers = common.workers;
      const auto st = heegner_sum_model(hp);
      o.columns("h,trials,mean,variance,std_error");
      o.row(st.h, st.trials, f(st.mean), f(st.variance), f(st.std_error));
    } else if (*gran_cmd) {
      box.quadrants = quadrants == "positive" ? Quadrants::positive : Quadrants::all;
      const auto n = granville_count(box);
      o.columns("A,B,dmin,dmax,xmin,xmax,quadrants,count");
      o.row(box.A, box.B, box.dmin, box.dmax, box.xmin, box.xmax, quadrants, n);
    } else if (*predict_cmd) {
      const auto s = parse_prediction_scheme(scheme);
      o.columns("scheme,x,prediction");
      o.row(scheme, f(X), f(rank_count_prediction(X, s, theta, rank)));
    } else if (*bsd_cmd) {
      const auto cfg = load_config(curve, o);
      const auto tw = make_twist(cfg, d);
      const int r = tw.parity == Parity::even ? 0 : 1;
      const auto M = terms_needed(tw.conductor, r, eps);
      const auto table = build_table(cfg, M, provider, common.workers, o);
      const auto chi = d == 1 ? std::vector<std::int8_t>{} : character_table(d, M);
      const auto L = l_derivative(SeriesInput{table.view(), chi, tw.conductor}, r, eps);
      const double omega = d == 1 && cfg.omega ? *cfg.omega : twist_real_period(cfg, d);
      const auto g = tamagawa_twist(cfg, d).product;
      const int T = twist_torsion(cfg, d, torsion);
      BsdInvariants b;
      if (r == 0) {
        b = sha_estimate_even(L.value, omega, g, T);
      } else {
        const auto model = model_text.empty() ? integral_twist_model(cfg, d) : parse_model(model_text);
        std::optional<HeightResult> gen;
        if (!point_text.empty()) {
          const auto xy = split_csv_line(point_text);
          if (xy.size() != 2) throw DomainError("--point expects x,y");
          gen = canonical_height(model, {xy[0], xy[1]});
        } else {
          // Smallest height among the points found; an upper bound for the
          // regulator when the search misses the generator.
          for (const auto& P : search_points(model, search_x, search_e)) {
            const auto h = canonical_height(model, P);
            if (h.torsion_order == 0 && (!gen || h.canonical < gen->canonical)) gen = h;
          }
          if (!gen) throw DomainError("no point of infinite order found; widen --search-x/--search-e or pass --point");
        }
        o.note("generator: (" + gen->x + ", " + gen->y + ")");
        b = sha_estimate_odd(L.value, omega, g, T, *gen);
      }
      o.columns("d,parity,L,error,omega,tamagawa,torsion,regulator,sha,nearest_square,residual");
      o.row(d, to_string(tw.parity), f(L.value), f(L.error), f(b.omega), b.tamagawa, b.torsion, f(b.regulator),
            f(b.sha), b.nearest_square, f(b.residual));
    } else if (*bsdscan_cmd) {
      const auto cfg = load_config(curve, o);
      const auto M = terms_needed(cfg.conductor * xmax * xmax, 0, eps);
      const auto table = build_table(cfg, M, provider, common.workers, o);
      const PrimeSieve sieve(static_cast<std::uint32_t>(M));
      std::size_t nonzero = 0, square = 0, vanishing = 0, skipped = 0;
      o.columns("d,L,error,omega,tamagawa,torsion,sha,nearest_square,residual,status");
      for (auto dd : enumerate_fundamental(xmax, parse_sign_filter(signs_name))) {
        if (std::gcd(dd, static_cast<std::int64_t>(2 * cfg.conductor)) != 1 || std::llabs(dd) <= 8 ||
            twist_parity(cfg, dd) != Parity::even) {
          ++skipped;
          continue;
        }
        const auto tw = make_twist(cfg, dd);
        const auto Md = terms_needed(tw.conductor, 0, eps);
        const auto chi = character_table(dd, Md, sieve);
        const auto L = l_derivative(SeriesInput{table.view().first(Md + 1), chi, tw.conductor}, 0, eps);
        const auto b = sha_estimate_even(L.value, twist_real_period(cfg, dd), tamagawa_twist(cfg, dd).product,
                                         torsion_order_twist(cfg, dd));
        const char* status = b.suspect_higher_rank ? "vanishing" : "ok";
        if (b.suspect_higher_rank) {
          ++vanishing;
        } else {
          ++nonzero;
          if (b.nearest_square > 0 && b.residual <= 0.01) ++square;
        }
        o.row(dd, f(L.value), f(L.error), f(b.omega), b.tamagawa, b.torsion, f(b.sha), b.nearest_square,
              f(b.residual), status);
      }
      o.note("skipped: " + std::to_string(skipped) + " (odd parity, |d| <= 8 or gcd(d, 2N) > 1)");
      o.note("vanishing: " + std::to_string(vanishing));
      o.note("within 1% of a square: " + std::to_string(square) + "/" + std::to_string(nonzero));
    }
    o.commit();
    return 0;
  } catch (const Error& e) {
    err << "qtwist: error: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "qtwist: error: " << e.what() << '\n';
    return static_cast<int>(ErrorKind::usage);
  }
}

}  // namespace qtwist::cli
