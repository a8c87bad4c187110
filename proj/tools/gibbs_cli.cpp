// gibbs: command-line front end for the gibbs library.
//
// Exit codes: 0 success, 1 domain error, 2 numeric failure, 3 verification failure, 64 usage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbs/gibbs.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitVerify = 3;
constexpr int kExitUsage = 64;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// numeric controls shared by every subcommand
struct Numerics {
  gibbs::SeriesControl series;
  gibbs::QuadratureControl quad;
  gibbs::TruncationControl trunc;

  void add_to(CLI::App* app) {
    app->add_option("--series-abs-tol", series.abs_tol, "series absolute tolerance")->capture_default_str();
    app->add_option("--series-rel-tol", series.rel_tol, "series relative tolerance")->capture_default_str();
    app->add_option("--series-max-terms", series.max_terms, "series term cap")->capture_default_str();
    app->add_option("--quad-abs-tol", quad.abs_tol, "quadrature absolute tolerance")->capture_default_str();
    app->add_option("--quad-rel-tol", quad.rel_tol, "quadrature relative tolerance")->capture_default_str();
    app->add_option("--quad-max-subdivisions", quad.max_subdivisions, "quadrature subdivision cap")
        ->capture_default_str();
    app->add_option("--trunc-eps", trunc.eps, "stick-breaking truncation mass")->capture_default_str();
    app->add_option("--max-atoms", trunc.max_atoms, "stick-breaking atom cap")->capture_default_str();
  }
  void validate() const {
    series.validate();
    quad.validate();
    trunc.validate();
  }
};

void show_formula(bool on, const std::string& text) {
  if (on) std::cerr << "formula: " << text << '\n';
}

std::vector<double> grid(double from, double to, int points, bool log_scale) {
  gibbs::require(points >= 1, "grid: --points must be >= 1");
  gibbs::require(from <= to, "grid: --from must not exceed --to");
  if (log_scale) gibbs::require(from > 0, "grid: a log grid needs --from > 0");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) {
    double u = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    g[i] = log_scale ? std::exp(std::log(from) + u * (std::log(to) - std::log(from))) : from + u * (to - from);
  }
  return g;
}

void write_pmf(const gibbs::BlockCountPmf& p, const std::string& format, const ordered_json& meta) {
  if (format == "json") {
    ordered_json j = meta;
    std::vector<double> v(p.p.begin() + 1, p.p.end());
    j["pmf"] = v;
    std::cout << j.dump() << '\n';
    return;
  }
  std::cout << "k,probability\n";
  for (int k = 1; k <= p.n; ++k) std::cout << k << ',' << fmt(p.p[k]) << '\n';
}

ordered_json report_json(const gibbs::IdentityReport& r) {
  ordered_json j;
  j["id"] = r.id;
  j["test"] = r.test;
  j["n_samples"] = r.n_samples;
  j["statistic"] = r.statistic;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  j["wall_time"] = r.wall_time;
  j["perturb"] = r.perturb;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

ordered_json partition_json(const gibbs::SetPartition& p) {
  ordered_json j;
  j["labels"] = p.block_of;
  j["sizes"] = p.sizes();
  j["k"] = p.k();
  return j;
}

ordered_json masses_json(const gibbs::MassPartition& m, std::size_t atoms) {
  ordered_json j;
  std::vector<double> top(m.masses.begin(), m.masses.begin() + std::min(atoms, m.masses.size()));
  double rest = 0;
  for (std::size_t i = top.size(); i < m.masses.size(); ++i) rest += m.masses[i];
  j["masses"] = top;
  j["rank"] = m.masses.size();
  j["remaining_mass"] = rest;
  j["truncation_tail"] = m.truncation_tail;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gibbs-type random partitions: exact laws, samplers and identity checks"};
  app.require_subcommand(1, 1);
  bool formula = false;
  app.add_flag("--show-formula", formula, "print the formula behind the computed quantity to stderr");
  Numerics num;

  // specfun ---------------------------------------------------------------
  auto* sf = app.add_subcommand("specfun", "special functions");
  std::string sf_fn;
  double sf_alpha = 0.5, sf_omega = 0.5, sf_nu = 0.5, sf_lambda = 0, sf_rho = 0.5, sf_mu = 1, sf_kappa = 1, sf_q = 0.5,
         sf_theta = 0;
  int sf_n = 1, sf_k = 1;
  std::string sf_format = "text";
  sf->add_option("function", sf_fn, "ml | mittag | prabhakar | hermite | stirling | neg-moment")
      ->required()
      ->check(CLI::IsMember({"ml", "mittag", "prabhakar", "hermite", "stirling", "neg-moment"}));
  sf->add_option("--alpha", sf_alpha)->capture_default_str();
  sf->add_option("--omega", sf_omega)->capture_default_str();
  sf->add_option("--nu", sf_nu)->capture_default_str();
  sf->add_option("--lambda", sf_lambda)->capture_default_str();
  sf->add_option("--rho", sf_rho)->capture_default_str();
  sf->add_option("--mu", sf_mu)->capture_default_str();
  sf->add_option("--kappa", sf_kappa)->capture_default_str();
  sf->add_option("--q", sf_q)->capture_default_str();
  sf->add_option("--theta", sf_theta)->capture_default_str();
  sf->add_option("--n", sf_n)->capture_default_str();
  sf->add_option("--k", sf_k)->capture_default_str();
  sf->add_option("--format", sf_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  num.add_to(sf);

  // density ---------------------------------------------------------------
  auto* de = app.add_subcommand("density", "density grids as CSV (t,value)");
  std::string de_kind = "stable";
  double de_alpha = 0.5, de_theta = 0, de_nu = 1, de_omega = 1, de_from = 0.05, de_to = 5;
  int de_points = 100;
  bool de_log = false;
  de->add_option("--kind", de_kind, "stable | tilted | ml | lamperti | cond | frac-integral")
      ->check(CLI::IsMember({"stable", "tilted", "ml", "lamperti", "cond", "frac-integral"}))
      ->capture_default_str();
  de->add_option("--alpha", de_alpha)->capture_default_str();
  de->add_option("--theta", de_theta)->capture_default_str();
  de->add_option("--nu", de_nu)->capture_default_str();
  de->add_option("--omega", de_omega)->capture_default_str();
  de->add_option("--from", de_from)->capture_default_str();
  de->add_option("--to", de_to)->capture_default_str();
  de->add_option("--points", de_points)->capture_default_str();
  de->add_flag("--log-grid", de_log, "geometric grid");
  num.add_to(de);

  // gibbs-weight ----------------------------------------------------------
  auto* gw = app.add_subcommand("gibbs-weight", "conditional Gibbs weights over t, or a full weight table");
  double gw_alpha = 0.5, gw_from = 0.1, gw_to = 5, gw_t = 1, gw_theta = 0, gw_lambda = 1, gw_s = 1;
  int gw_n = 2, gw_k = 1, gw_points = 50, gw_nmax = 10;
  bool gw_log = false;
  std::string gw_route = "quadrature", gw_table;
  gw->add_option("--alpha", gw_alpha)->capture_default_str();
  gw->add_option("--n", gw_n)->capture_default_str();
  gw->add_option("--k", gw_k)->capture_default_str();
  gw->add_option("--from", gw_from)->capture_default_str();
  gw->add_option("--to", gw_to)->capture_default_str();
  gw->add_option("--points", gw_points)->capture_default_str();
  gw->add_flag("--log-grid", gw_log);
  gw->add_option("--route", gw_route, "quadrature | hermite | auto")
      ->check(CLI::IsMember({"quadrature", "hermite", "auto"}))
      ->capture_default_str();
  gw->add_option("--table", gw_table, "export a table instead: pd | ml | conditional | hermite")
      ->check(CLI::IsMember({"pd", "ml", "conditional", "hermite"}));
  gw->add_option("--n-max", gw_nmax)->capture_default_str();
  gw->add_option("--t", gw_t, "t for --table conditional")->capture_default_str();
  gw->add_option("--theta", gw_theta)->capture_default_str();
  gw->add_option("--lambda", gw_lambda)->capture_default_str();
  gw->add_option("--s", gw_s, "local time for --table hermite")->capture_default_str();
  num.add_to(gw);

  // eppf ------------------------------------------------------------------
  auto* ep = app.add_subcommand("eppf", "EPPF of one block-size vector; JSON on stdin or --input");
  std::string ep_input = "-";
  ep->add_option("--input", ep_input, "JSON file, '-' for stdin")->capture_default_str();
  num.add_to(ep);

  // blocks ----------------------------------------------------------------
  auto* bl = app.add_subcommand("blocks", "law of the number of blocks K_n");
  std::string bl_model = "pd", bl_format = "csv", bl_weights;
  double bl_alpha = 0.5, bl_theta = 0, bl_lambda = 1, bl_delta = 0.5, bl_s = 1;
  int bl_n = 10;
  bl->add_option("--model", bl_model, "pd | ml | hermite | coag | quarter | gibbs")
      ->check(CLI::IsMember({"pd", "ml", "hermite", "coag", "quarter", "gibbs"}))
      ->capture_default_str();
  bl->add_option("--alpha", bl_alpha)->capture_default_str();
  bl->add_option("--theta", bl_theta)->capture_default_str();
  bl->add_option("--lambda", bl_lambda)->capture_default_str();
  bl->add_option("--delta", bl_delta)->capture_default_str();
  bl->add_option("--s", bl_s)->capture_default_str();
  bl->add_option("--n", bl_n)->capture_default_str();
  bl->add_option("--weights", bl_weights, "CSV weight table (n,k,log_V) for --model gibbs");
  bl->add_option("--format", bl_format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  num.add_to(bl);

  // sample ----------------------------------------------------------------
  auto* sa = app.add_subcommand("sample", "random draws as JSON lines");
  std::string sa_model = "crp", sa_rate = "ml";
  std::uint64_t sa_seed = 0;
  std::size_t sa_reps = 1, sa_atoms = 20;
  double sa_alpha = 0.5, sa_theta = 0.5, sa_delta = 0.5, sa_s = 1, sa_lambda = 1;
  int sa_n = 10, sa_R = 5;
  sa->add_option("--model", sa_model, "crp | gem | frag | coag | two-stage | mlmc | brownian-cond | mixed-poisson")
      ->check(CLI::IsMember({"crp", "gem", "frag", "coag", "two-stage", "mlmc", "brownian-cond", "mixed-poisson"}))
      ->capture_default_str();
  sa->add_option("--seed", sa_seed)->capture_default_str();
  sa->add_option("--replicates", sa_reps)->capture_default_str();
  sa->add_option("--alpha", sa_alpha)->capture_default_str();
  sa->add_option("--theta", sa_theta)->capture_default_str();
  sa->add_option("--delta", sa_delta)->capture_default_str();
  sa->add_option("--s", sa_s)->capture_default_str();
  sa->add_option("--lambda", sa_lambda)->capture_default_str();
  sa->add_option("--n", sa_n)->capture_default_str();
  sa->add_option("--R", sa_R, "chain length for mlmc")->capture_default_str();
  sa->add_option("--atoms", sa_atoms, "largest masses printed for frag and coag")->capture_default_str();
  sa->add_option("--rate", sa_rate, "mixed-poisson rate: stable | ml")
      ->check(CLI::IsMember({"stable", "ml"}))
      ->capture_default_str();
  num.add_to(sa);

  // verify ----------------------------------------------------------------
  auto* ve = app.add_subcommand("verify", "Monte-Carlo and exact identity checks");
  std::vector<std::string> ve_ids;
  bool ve_all = false, ve_list = false, ve_neg = false;
  std::size_t ve_samples = 100000;
  std::uint64_t ve_seed = 0;
  unsigned ve_jobs = 1;
  std::string ve_json;
  ve->add_option("--id", ve_ids, "identity id (repeatable)");
  ve->add_flag("--all", ve_all, "run the whole catalog");
  ve->add_flag("--list", ve_list, "list catalog ids and formulas");
  ve->add_flag("--negative-controls", ve_neg, "run perturbed controls; succeeds when every control fails");
  ve->add_option("--samples", ve_samples)->capture_default_str();
  ve->add_option("--seed", ve_seed)->capture_default_str();
  ve->add_option("--jobs", ve_jobs, "worker threads")->capture_default_str();
  ve->add_option("--json", ve_json, "write the JSON report here");
  double ve_perturb = 0;
  ve->add_option("--perturb", ve_perturb, "shift the perturbed side of each --id check by this amount")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    num.validate();

    if (sf->parsed()) {
      double v = 0;
      std::string text;
      if (sf_fn == "ml") {
        v = std::exp(gibbs::log_gen_ml(sf_alpha, sf_omega, sf_nu, sf_lambda, num.series, num.quad));
        text = "E^{(omega/alpha)}_{alpha,omega+nu}(-lambda) = sum_l (-lambda)^l (omega/alpha)_l / (l! Gamma(alpha l + omega + nu)) * Gamma(omega+nu)";
      } else if (sf_fn == "mittag") {
        v = gibbs::prabhakar_ml(sf_alpha, sf_mu, 1.0, sf_lambda, num.series);
        text = "E_{alpha,mu}(-lambda) = sum_l (-lambda)^l / Gamma(alpha l + mu)";
      } else if (sf_fn == "prabhakar") {
        v = gibbs::prabhakar_ml(sf_rho, sf_mu, sf_kappa, sf_lambda, num.series);
        text = "E^kappa_{rho,mu}(-lambda) = sum_l (kappa)_l (-lambda)^l / (l! Gamma(rho l + mu))";
      } else if (sf_fn == "hermite") {
        v = gibbs::hermite_h(sf_q, sf_lambda, num.series);
        text = "h_{-2q}(lambda) = 2^{-q} U(q, 1/2, lambda^2/2)";
      } else if (sf_fn == "stirling") {
        v = gibbs::gen_stirling(sf_alpha, sf_n, sf_k);
        text = "S_alpha(n+1,k) = S_alpha(n,k-1) + (n - k alpha) S_alpha(n,k), S_alpha(1,1) = 1";
      } else {
        v = gibbs::neg_moment_stable(sf_alpha, sf_theta);
        text = "E[S_alpha^{-theta}] = Gamma(theta/alpha + 1) / Gamma(theta + 1)";
      }
      show_formula(formula, text);
      if (sf_format == "json") {
        ordered_json j;
        j["function"] = sf_fn;
        j["value"] = v;
        std::cout << j.dump() << '\n';
      } else {
        std::cout << fmt(v) << '\n';
      }
      return 0;
    }

    if (de->parsed()) {
      auto g = grid(de_from, de_to, de_points, de_log);
      std::map<std::string, std::string> texts = {
          {"stable", "f_alpha(t): Zolotarev integral, series in the far tail"},
          {"tilted", "f_{alpha,theta}(t) = t^{-theta} f_alpha(t) / E[S_alpha^{-theta}]"},
          {"ml", "density of S^{-alpha}_{alpha,theta}"},
          {"lamperti", "density of S_alpha / S'_alpha"},
          {"cond", "f^{(nu)}_{alpha,omega}(t): density of S_{alpha,omega} / beta_{omega,nu}"},
          {"frac-integral", "I^nu f_alpha(t) = (1/Gamma(nu)) int_0^t (t-u)^{nu-1} f_alpha(u) du"}};
      show_formula(formula, texts[de_kind]);
      std::cout << "t,value\n";
      for (double t : g) {
        double v = 0;
        if (de_kind == "stable") v = gibbs::stable_pdf(de_alpha, t, num.quad);
        else if (de_kind == "tilted") v = gibbs::tilted_pdf(de_alpha, de_theta, t, num.quad);
        else if (de_kind == "ml") v = gibbs::ml_pdf(de_alpha, de_theta, t, num.quad);
        else if (de_kind == "lamperti") v = gibbs::lamperti_pdf(de_alpha, t);
        else if (de_kind == "cond") v = gibbs::cond_density(de_alpha, de_nu, de_omega, t, num.quad);
        else v = gibbs::frac_integral(de_alpha, de_nu, t, num.quad);
        std::cout << fmt(t) << ',' << fmt(v) << '\n';
      }
      return 0;
    }

    if (gw->parsed()) {
      if (!gw_table.empty()) {
        std::map<std::string, std::string> texts = {
            {"pd", "V_{n,k} = prod_{i=1}^{k-1}(theta + i alpha) / (theta + 1)_{n-1}"},
            {"ml", "V_{n,k} = V^{PD}_{n,k} E^{(theta/alpha+k)}_{alpha,theta+n}(-lambda) / E^{(theta/alpha+1)}_{alpha,theta+1}(-lambda)"},
            {"conditional", "V_{n,k} = alpha^k t^{-n} I^{n-k alpha} f_alpha(t) / f_alpha(t)"},
            {"hermite", "V_{n,k} = 2^{n-k} s^{k-1} h_{-(2n-k-1)}(s)"}};
        show_formula(formula, texts[gw_table]);
        if (gw_table == "pd") gibbs::pd_weight_table(gw_alpha, gw_theta, gw_nmax).write_csv(std::cout);
        else if (gw_table == "ml")
          gibbs::ml_weight_table(gw_alpha, gw_theta, gw_lambda, gw_nmax, num.series).write_csv(std::cout);
        else if (gw_table == "conditional") {
          auto route = gw_route == "hermite" ? gibbs::WeightRoute::hermite
                       : gw_route == "auto"  ? gibbs::WeightRoute::automatic
                                             : gibbs::WeightRoute::quadrature;
          gibbs::conditional_weight_table(gw_alpha, gw_t, gw_nmax, num.quad, route).write_csv(std::cout);
        } else
          gibbs::hermite_weight_table(gw_s, gw_nmax, num.series).write_csv(std::cout);
        return 0;
      }
      auto route = gw_route == "hermite" ? gibbs::WeightRoute::hermite
                   : gw_route == "auto"  ? gibbs::WeightRoute::automatic
                                         : gibbs::WeightRoute::quadrature;
      show_formula(formula, "G^{(n,k)}_alpha(t) = alpha^k t^{-n} I^{n-k alpha} f_alpha(t) / f_alpha(t)");
      std::cout << "t,value\n";
      for (double t : grid(gw_from, gw_to, gw_points, gw_log))
        std::cout << fmt(t) << ',' << fmt(gibbs::gibbs_weight(gw_alpha, gw_n, gw_k, t, num.quad, route)) << '\n';
      return 0;
    }

    if (ep->parsed()) {
      ordered_json in;
      try {
        if (ep_input == "-") in = ordered_json::parse(std::cin);
        else {
          std::ifstream f(ep_input);
          gibbs::require(static_cast<bool>(f), "eppf: cannot open " + ep_input);
          in = ordered_json::parse(f);
        }
      } catch (const ordered_json::parse_error& e) {
        throw gibbs::domain_error(std::string("eppf: malformed JSON input: ") + e.what());
      }
      try {
        gibbs::require(in.contains("sizes"), "eppf: input needs \"sizes\"");
        gibbs::BlockSizes b(in.at("sizes").get<std::vector<int>>());
        b.validate();
        std::string model = in.value("model", std::string("pd"));
        double alpha = in.value("alpha", 0.5), theta = in.value("theta", 0.0);
        double v = 0;
        std::string text;
        if (model == "pd") {
          v = gibbs::eppf_pd(alpha, theta, b);
          text = "p(n_1..n_k) = prod_{i=1}^{k-1}(theta + i alpha) / (theta+1)_{n-1} prod_j (1-alpha)_{n_j-1}";
        } else if (model == "ml") {
          v = gibbs::eppf_ml(alpha, theta, in.value("lambda", 1.0), b, num.series);
          text = "p_{alpha,theta}(n) E^{(theta/alpha+k)}_{alpha,theta+n}(-lambda) / E^{(theta/alpha+1)}_{alpha,theta+1}(-lambda)";
        } else if (model == "hermite") {
          v = gibbs::eppf_hermite(in.value("s", 1.0), b, num.series);
          text = "2^{n-k} s^{k-1} h_{-(2n-k-1)}(s) prod_j (1/2)_{n_j-1}";
        } else if (model == "frag") {
          double delta = in.value("delta", 0.5);
          auto base = gibbs::pd_weight_table(alpha * delta, theta, b.n());
          v = gibbs::eppf_frag(alpha, delta, base, b);
          text = "EPPF of Frag_{alpha,-alpha delta} applied to a PD(alpha delta, theta) base";
        } else if (model == "mlmc") {
          v = gibbs::eppf_mlmc_ml(alpha, theta, in.value("lambda", 1.0), in.value("r", 1), b, num.series);
          text = "EPPF of the r-th MLMC level given the Mittag-Leffler conditioning at lambda";
        } else if (model == "gibbs") {
          std::ifstream f(in.value("weights", std::string()));
          gibbs::require(static_cast<bool>(f), "eppf: cannot open the weights file");
          auto table = gibbs::GibbsWeightTable::read_csv(f, alpha);
          v = gibbs::eppf_gibbs(table, b);
          text = "V_{n,k} prod_j (1-alpha)_{n_j-1}";
        } else {
          throw gibbs::domain_error("eppf: unknown model " + model);
        }
        show_formula(formula, text);
        ordered_json out;
        out["model"] = model;
        out["sizes"] = b.sizes;
        out["log_eppf"] = v;
        out["eppf"] = std::exp(v);
        std::cout << out.dump() << '\n';
      } catch (const ordered_json::exception& e) {
        throw gibbs::domain_error(std::string("eppf: bad field in input: ") + e.what());
      }
      return 0;
    }

    if (bl->parsed()) {
      ordered_json meta;
      meta["model"] = bl_model;
      meta["n"] = bl_n;
      gibbs::BlockCountPmf p{};
      std::string text;
      if (bl_model == "pd") {
        p = gibbs::blocks_pmf(bl_alpha, bl_theta, bl_n);
        text = "P(K_n=k) = V_{n,k} S_alpha(n,k)";
      } else if (bl_model == "ml") {
        p = gibbs::blocks_pmf_ml(bl_alpha, bl_theta, bl_lambda, bl_n, num.series);
        text = "P(K_n=k) = P^{(n)}_{alpha,theta}(k) E^{(theta/alpha+k)}_{alpha,theta+n}(-lambda) / E^{(theta/alpha+1)}_{alpha,theta+1}(-lambda)";
      } else if (bl_model == "hermite") {
        p = gibbs::blocks_pmf_hermite(bl_s, bl_n, num.series);
        text = "P(K_n=k) = 2^{n-k} s^{k-1} h_{-(2n-k-1)}(s) S_{1/2}(n,k)";
      } else if (bl_model == "coag") {
        p = gibbs::blocks_pmf_coag(bl_alpha, bl_delta, bl_theta, bl_n);
        text = "P_{alpha delta,theta}(k) = sum_l P^{(n)}_{alpha,theta}(l) P^{(l)}_{delta,theta/alpha}(k)";
      } else if (bl_model == "quarter") {
        p = gibbs::blocks_pmf_quarter(bl_n);
        text = "alpha = 1/4, theta = 0 closed form";
      } else {
        std::ifstream f(bl_weights);
        gibbs::require(static_cast<bool>(f), "blocks: --weights file missing or unreadable");
        p = gibbs::blocks_pmf_gibbs(gibbs::GibbsWeightTable::read_csv(f, bl_alpha), bl_n);
        text = "P(K_n=k) = V_{n,k} S_alpha(n,k)";
      }
      show_formula(formula, text);
      write_pmf(p, bl_format, meta);
      return 0;
    }

    if (sa->parsed()) {
      gibbs::require(sa_reps >= 1, "sample: --replicates must be >= 1");
      for (std::size_t i = 0; i < sa_reps; ++i) {
        gibbs::RngStream rng(sa_seed, i);
        ordered_json j;
        j["replicate"] = i;
        if (sa_model == "crp") {
          j.update(partition_json(gibbs::crp(sa_alpha, sa_theta, sa_n, rng)));
        } else if (sa_model == "gem") {
          j.update(partition_json(gibbs::gem_partition(sa_alpha, sa_theta, sa_n, rng)));
        } else if (sa_model == "two-stage") {
          auto base = gibbs::crp(sa_alpha * sa_delta, sa_theta, sa_n, rng);
          j.update(partition_json(gibbs::two_stage_partition(base, sa_alpha, sa_delta, rng)));
        } else if (sa_model == "brownian-cond") {
          j.update(partition_json(gibbs::brownian_cond_partition(sa_s, sa_n, rng)));
        } else if (sa_model == "frag") {
          auto base = gibbs::sample_pd(sa_alpha * sa_delta, sa_theta, rng, num.trunc);
          j.update(masses_json(gibbs::frag_all(base, sa_alpha, sa_delta, rng, num.trunc), sa_atoms));
        } else if (sa_model == "coag") {
          auto base = gibbs::sample_pd(sa_alpha, sa_theta, rng, num.trunc);
          j.update(masses_json(gibbs::coag(base, sa_delta, sa_theta / sa_alpha, rng), sa_atoms));
        } else if (sa_model == "mlmc") {
          j["z"] = gibbs::mlmc_chain(sa_alpha, sa_theta, sa_R, rng);
        } else {
          std::function<double(gibbs::RngStream&)> rate;
          if (sa_rate == "stable") rate = [&](gibbs::RngStream& r) { return gibbs::sample_stable(sa_alpha, r); };
          else rate = [&](gibbs::RngStream& r) { return gibbs::sample_ml(sa_alpha, sa_theta, r); };
          auto d = gibbs::mixed_poisson(rate, sa_lambda, rng);
          j["rate"] = d.rate;
          j["count"] = d.count();
          j["times"] = d.times;
        }
        std::cout << j.dump() << '\n';
      }
      return 0;
    }

    if (ve->parsed()) {
      if (ve_list) {
        for (const auto& s : gibbs::list_identities())
          std::cout << s.id << '\t' << gibbs::to_string(s.test) << '\t' << s.formula << '\n';
        return 0;
      }
      gibbs::require(ve_all || !ve_ids.empty(), "verify: give --id or --all");
      gibbs::require(ve_samples >= 1000, "verify: --samples must be >= 1000");
      gibbs::require(ve_perturb == 0 || (!ve_all && !ve_neg), "verify: --perturb applies to --id runs without controls");
      std::vector<gibbs::IdentityReport> reports;
      if (ve_all) {
        reports = gibbs::run_suite("", ve_samples, ve_seed, ve_jobs, ve_neg);
      } else {
        for (const auto& id : ve_ids) gibbs::find_identity(id);
        for (const auto& id : ve_ids) {
          const auto& spec = gibbs::find_identity(id);
          gibbs::IdentityReport r;
          try {
            r = gibbs::run_identity(id, ve_samples, ve_seed, ve_neg ? spec.control_perturb : ve_perturb);
          } catch (const gibbs::domain_error&) {
            throw;
          } catch (const std::exception& e) {
            r.id = id;
            r.test = gibbs::to_string(spec.test);
            r.seed = ve_seed;
            r.perturb = ve_neg ? spec.control_perturb : ve_perturb;
            r.statistic = std::numeric_limits<double>::quiet_NaN();
            r.error = e.what();
          }
          reports.push_back(r);
        }
      }
      bool ok = true;
      ordered_json arr = ordered_json::array();
      for (const auto& r : reports) {
        bool good = ve_neg ? !r.pass && r.error.empty() : r.pass;
        ok = ok && good;
        std::cerr << (good ? "ok   " : "FAIL ") << r.id << "  " << r.test << "  statistic=" << fmt(r.statistic)
                  << "  threshold=" << fmt(r.threshold) << (r.error.empty() ? "" : "  error: " + r.error) << '\n';
        arr.push_back(report_json(r));
      }
      ordered_json doc;
      doc["samples"] = ve_samples;
      doc["seed"] = ve_seed;
      doc["negative_controls"] = ve_neg;
      doc["all_pass"] = ok;
      doc["reports"] = arr;
      if (!ve_json.empty()) {
        std::ofstream f(ve_json);
        gibbs::require(static_cast<bool>(f), "verify: cannot write " + ve_json);
        f << doc.dump(2) << '\n';
      } else {
        std::cout << doc.dump(2) << '\n';
      }
      return ok ? 0 : kExitVerify;
    }
  } catch (const gibbs::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const gibbs::numeric_error& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
