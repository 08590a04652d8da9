#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "gl2sup/arch_whittaker.hpp"
#include "gl2sup/bessel.hpp"
#include "gl2sup/cosets.hpp"
#include "gl2sup/eigenvalues.hpp"
#include "gl2sup/global_assembly.hpp"
#include "gl2sup/global_spec.hpp"
#include "gl2sup/local_newform.hpp"

namespace gl2sup::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) { return format_number(x); }

std::string status(bool ok) { return ok ? "pass" : "FAIL"; }

void apply_overrides(const RunConfig& rc, NewformSpecGlobal& spec) {
  if (rc.tolerance) spec.config.tolerance = *rc.tolerance;
  if (rc.jmax) spec.config.kappa_cutoff = *rc.jmax;
  if (rc.smax) spec.config.smax = *rc.smax;
  spec.config.seed = rc.seed;
}

NewformSpecGlobal load(const RunConfig& rc, const std::string& path) {
  NewformSpecGlobal spec = load_spec(path);
  apply_overrides(rc, spec);
  return spec;
}

std::unique_ptr<EigenvalueSource> eigenvalues_for(const NewformSpecGlobal& spec) {
  if (spec.lambda_file) {
    try {
      return std::make_unique<TableEigenvalues>(TableEigenvalues::from_file(*spec.lambda_file));
    } catch (const EigenvalueFormatError& e) {
      throw InputError(*spec.lambda_file + ": " + e.what());
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
  }
  return std::make_unique<DivisorEigenvalues>();
}

const std::string& single_spec(const RunConfig& rc) {
  if (rc.spec_paths.size() != 1) throw UsageError("this command needs exactly one --spec");
  return rc.spec_paths.front();
}

// verify-local ------------------------------------------------------------

std::vector<PrincipalSeriesLocal> local_suite_reps(const RunConfig& rc) {
  std::vector<PrincipalSeriesLocal> reps;
  if (!rc.spec_paths.empty()) {
    for (const auto& path : rc.spec_paths)
      for (const auto& d : load(rc, path).primes)
        if (d.rep) reps.push_back(*d.rep);
    return reps;
  }
  for (auto [p, a1, a2] : {std::tuple{3, 2, 0}, {5, 2, 0}, {3, 3, 0}, {3, 2, 1}, {5, 2, 1}, {3, 3, 1}})
    reps.push_back(make_principal_series(p, a1, a2));
  return reps;
}

int verify_local(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  double tol = rc.tolerance.value_or(1e-8);
  out << "p,a1,a2,regime,points,exact_checked,bound_checked,mismatches,max_abs_error,alpha,alpha_deviation,status\n";
  bool all = true;
  for (const auto& rep : local_suite_reps(rc)) {
    WhittakerOracle pi(rep), pi_tilde(rep.contragredient());
    int n = rep.n();
    auto cmp = compare_with_closed_form(pi, -n - n / 2, 3, tol);
    auto alpha = alpha_modulus(pi, pi_tilde, -n - 4, 2);
    bool ok = cmp.ok() && std::abs(alpha.alpha - 1.0) <= tol && alpha.max_deviation <= tol;
    for (const auto& d : cmp.details) err << rep.to_string() << ": " << d << "\n";
    out << rep.prime() << ',' << rep.a1() << ',' << rep.a2() << ',' << to_string(rep.regime()) << ',' << cmp.points
        << ',' << cmp.exact_checked << ',' << cmp.bound_checked << ',' << cmp.mismatches << ','
        << fmt(cmp.max_abs_error) << ',' << fmt(alpha.alpha) << ',' << fmt(alpha.max_deviation) << ','
        << status(ok) << "\n";
    all = all && ok;
  }
  return all ? kExitPass : kExitFail;
}

// verify-cosets -----------------------------------------------------------

int verify_cosets(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (!rc.p || !rc.n) throw UsageError("verify-cosets needs --p and --n");
  std::uint64_t p = *rc.p;
  int n = *rc.n;
  if (!is_prime(p)) throw InputError("--p must be prime");
  if (n < 1 || n > 8) throw InputError("--n must lie in [1, 8]");
  out << "suite,p,n,checked,failures,status\n";
  bool all = true;
  auto row = [&](const char* suite, std::size_t checked, std::size_t failures) {
    out << suite << ',' << p << ',' << n << ',' << checked << ',' << failures << ',' << status(failures == 0) << "\n";
    all = all && failures == 0;
  };

  auto cover = verify_disjoint_cover(p, n, 500, rc.seed);
  for (const auto& f : cover.failures) err << "cover: " << f << "\n";
  row("reduce_to_triple", cover.samples, cover.samples - cover.covered + cover.failures.size());
  row("disjointness", cover.pairs_checked, cover.overlaps);

  std::size_t checked = 0, failures = 0;
  for (int m = -6; m <= 2; ++m)
    for (const auto& t : canonical_index_set(p, n, m)) {
      ++checked;
      try {
        mirror(p, t);
      } catch (const std::logic_error& e) {
        ++failures;
        err << "mirror " << t.to_string() << ": " << e.what() << "\n";
      }
    }
  row("mirror", checked, failures);

  std::mt19937_64 rng(rc.seed);
  checked = failures = 0;
  for (int e = 0; e <= n; ++e)
    for (int i = 0; i < 100; ++i) {
      LocalMatrix g = random_gl2_zp(p, rng) * LocalMatrix::a(p, prime_power(p, e));
      ++checked;
      try {
        classify_translate(g, n, e);
      } catch (const std::logic_error& ex) {
        ++failures;
        err << "translate e=" << e << ": " << ex.what() << "\n";
      }
    }
  row("translate", checked, failures);
  return all ? kExitPass : kExitFail;
}

// verify-arch -------------------------------------------------------------

int verify_arch(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  using cd = std::complex<double>;
  double tol = rc.tolerance.value_or(1e-6);
  out << "suite,case,value,limit,status\n";
  bool all = true;
  auto row = [&](const std::string& suite, const std::string& label, double value, double limit) {
    bool ok = std::isfinite(value) && value <= limit;
    out << suite << ',' << label << ',' << fmt(value) << ',' << fmt(limit) << ',' << status(ok) << "\n";
    all = all && ok;
  };

  const std::vector<cd> orders{0.0, 0.25, 0.5, cd(0, 0.3), cd(0.5, 0.2)};
  const char* labels[] = {"nu=0", "nu=1/4", "nu=1/2", "nu=0.3i", "nu=0.5+0.2i"};
  for (std::size_t k = 0; k < orders.size(); ++k) {
    double worst = 0.0;
    for (int i = 0; i < 60; ++i) {
      double u = 0.05 * std::pow(30.0 / 0.05, i / 59.0);
      cd fast = bessel_k_scaled(orders[k], u), slow = bessel_k_quadrature_scaled(orders[k], u);
      worst = std::max(worst, std::abs(fast - slow) / std::abs(slow));
    }
    row("bessel_vs_quadrature", labels[k], worst, tol);
  }
  double half = 0.0;
  for (double u : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0}) {
    double exact = std::sqrt(std::numbers::pi / (2.0 * u)) * std::exp(-u);
    half = std::max(half, std::abs(bessel_k(0.5, u).real() - exact) / exact);
  }
  row("half_integer_closed_form", "nu=1/2", half, 1e-8);
  double even = 0.0;
  for (cd nu : orders)
    for (double u : {0.2, 1.0, 3.0, 12.0})
      even = std::max(even, std::abs(bessel_k(-nu, u) - bessel_k(nu, u)) / std::abs(bessel_k(nu, u)));
  row("evenness", "all", even, 1e-8);
  for (cd nu : {cd(0.0), cd(0.5), cd(0, 0.3)}) {
    std::size_t bad = 0;
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 200; ++i) {
      double u = 0.1 * std::pow(200.0, i / 199.0);
      double v = std::abs(bessel_k(nu, u));
      if (!(v < prev)) ++bad;
      prev = v;
    }
    std::ostringstream label;
    label << "nu=" << nu.real() << (nu.imag() != 0 ? "+" + std::to_string(nu.imag()) + "i" : "");
    row("monotone", label.str(), static_cast<double>(bad), 0.0);
  }

  std::vector<std::pair<std::string, std::pair<ArchimedeanType, double>>> types{
      {"holomorphic_k=2", {ArchimedeanType::holomorphic(2), 0.1}},
      {"holomorphic_k=12", {ArchimedeanType::holomorphic(12), 0.1}},
      {"principal_tempered", {ArchimedeanType::principal(cd(0, 2.5), cd(0, -2.5)), 0.1}},
      {"principal_d=0.9", {ArchimedeanType::principal(0.45, -0.45), 0.49}},
      {"principal_m1!=m2", {ArchimedeanType::principal(0.2, -0.2, 1, 0), 0.1}},
  };
  for (const auto& path : rc.spec_paths) types.push_back({"spec", {load(rc, path).arch, 0.1}});
  for (const auto& [label, te] : types) {
    auto rep = decay_majorant_check(te.first, te.second);
    double drift = rep.constant_coarse > 0 ? std::abs(rep.constant_fine - rep.constant_coarse) / rep.constant_coarse
                                           : std::numeric_limits<double>::infinity();
    if (!rep.ok) err << "decay " << label << ": C = " << rep.constant_coarse << " / " << rep.constant_fine << "\n";
    row("decay_majorant", label, rep.ok ? drift : std::numeric_limits<double>::infinity(), 0.1);
  }
  return all ? kExitPass : kExitFail;
}

// support -----------------------------------------------------------------

std::vector<DomainPoint> points_for(const NewformSpecGlobal& spec) {
  return sample_domain_points(spec, spec.config.max_points, spec.config.seed);
}

int support(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  NewformSpecGlobal spec = load(rc, single_spec(rc));
  GlobalContext ctx(spec);
  auto points = points_for(spec);
  std::int64_t bound = spec.config.support_numerator_bound;
  std::function<std::pair<SupportCheck, std::vector<SupportProgression>>(std::size_t)> fn = [&](std::size_t i) {
    const auto& pt = points[i];
    auto prof = ramification_profile(spec, pt);
    std::vector<SupportProgression> progs;
    std::uint64_t reach = static_cast<std::uint64_t>(bound);
    for (auto s : smooth_numbers(prof.high_equal, reach))
      for (auto u : smooth_numbers(prof.low, reach / s)) {
        auto prog = support_progression(ctx, pt, prof, s, u);
        if (!prog.empty()) progs.push_back(std::move(prog));
      }
    return std::pair{compare_support(ctx, pt, bound), std::move(progs)};
  };
  auto results = parallel_map<std::pair<SupportCheck, std::vector<SupportProgression>>>(points.size(), rc.parallel, fn);
  out << "point_id,x,y,S,s,u,scale,modulus,coprimality_modulus,residues,brute,progression,missing,extra,status\n";
  bool all = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& [check, progs] = results[i];
    bool ok = check.sound();
    if (!ok) err << "point " << i << " " << points[i].to_string() << ": " << check.missing << " support points missed\n";
    all = all && ok;
    for (const auto& prog : progs) {
      std::string res;
      for (auto r : prog.residues) res += (res.empty() ? "" : " ") + std::to_string(r);
      out << i << ',' << fmt(points[i].x) << ',' << fmt(points[i].y) << ',' << points[i].conjugation_set() << ','
          << prog.s << ',' << prog.u << ',' << prog.scale.get_str() << ',' << prog.modulus << ','
          << prog.coprimality_modulus << ',' << res << ',' << check.brute << ',' << check.progression << ','
          << check.missing << ',' << check.extra << ',' << status(ok) << "\n";
    }
  }
  return all ? kExitPass : kExitFail;
}

// scan --------------------------------------------------------------------

int scan_command(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  NewformSpecGlobal spec = load(rc, single_spec(rc));
  auto lambda = eigenvalues_for(spec);
  GlobalContext ctx(spec);
  auto points = points_for(spec);
  auto rows = scan(ctx, points, *lambda, default_truncation(spec), rc.parallel);
  out << "point_id,x,y,S,L,N2,majorant,maxram_bound,cs_bound,upper,lower,tail_certificate,status\n";
  bool all = true;
  for (const auto& r : rows) {
    std::vector<std::string> why;
    if (!std::isfinite(r.majorant)) why.push_back("majorant not finite");
    if (!std::isfinite(r.tail_certificate)) why.push_back("tail not certified");
    if (r.majorant > r.cs_bound * (1.0 + spec.config.tolerance) + spec.config.tolerance)
      why.push_back("majorant exceeds the Cauchy-Schwarz bound");
    for (const auto& w : why) err << "point " << r.point_id << " " << r.point.to_string() << ": " << w << "\n";
    all = all && why.empty();
    out << r.point_id << ',' << fmt(r.point.x) << ',' << fmt(r.point.y) << ',' << r.point.conjugation_set() << ','
        << r.L << ',' << r.N2 << ',' << fmt(r.majorant) << ',' << (r.maxram ? fmt(*r.maxram) : "") << ','
        << fmt(r.cs_bound) << ',' << fmt(r.upper) << ',' << (r.lower ? fmt(*r.lower) : "") << ','
        << fmt(r.tail_certificate) << ',' << status(why.empty()) << "\n";
  }
  return all ? kExitPass : kExitFail;
}

// compare -----------------------------------------------------------------

int compare(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  if (rc.spec_paths.empty()) throw UsageError("compare needs at least one --spec");
  out << "spec,N,C,upper,lower,trivial_upper,upper_over_lower,exponent_identity,sup_majorant,sup_ratio,"
         "max_over_trivial,status\n";
  bool all = true;
  for (const auto& path : rc.spec_paths) {
    NewformSpecGlobal spec = load(rc, path);
    auto lambda = eigenvalues_for(spec);
    GlobalContext ctx(spec);
    auto points = points_for(spec);
    auto rows = scan(ctx, points, *lambda, default_truncation(spec), rc.parallel);
    auto cmp = theorem_comparators(spec);
    double sup = 0.0, ratio = 0.0;
    for (const auto& r : rows) {
      sup = std::max(sup, r.majorant);
      ratio = std::max(ratio, r.majorant / (std::sqrt(static_cast<double>(r.L)) + std::sqrt(static_cast<double>(r.N2))));
    }
    std::string identity = "n/a";
    bool ok = std::isfinite(sup);
    if (cmp.lower_exponents) {
      bool square = std::all_of(spec.primes.begin(), spec.primes.end(), [](const PrimeData& d) { return d.n % 2 == 0; });
      auto diff = exponent_difference(cmp.upper_exponents, *cmp.lower_exponents);
      bool holds = diff == level_power(spec, spec.delta + 2 * spec.config.epsilon);
      identity = holds ? "holds" : "differs";
      if (square && !holds) {
        ok = false;
        err << path << ": upper/lower is not N^(delta + 2 eps)\n";
      }
    }
    all = all && ok;
    out << path << ',' << spec.N << ',' << spec.C << ',' << fmt(cmp.upper) << ','
        << (cmp.lower ? fmt(*cmp.lower) : "") << ',' << fmt(cmp.trivial_upper) << ','
        << (cmp.lower ? fmt(cmp.upper / *cmp.lower) : "") << ',' << identity << ',' << fmt(sup) << ','
        << fmt(ratio) << ',' << fmt(sup / cmp.trivial_upper) << ',' << status(ok) << "\n";
  }
  return all ? kExitPass : kExitFail;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(12) << x;
  return os.str();
}

std::optional<RunConfig> parse_arguments(int argc, const char* const* argv, std::ostream& err, int& exit_code) {
  CLI::App app{"gl2sup: sup-norm majorants for GL(2) newforms"};
  app.require_subcommand(1);
  RunConfig rc;
  double tol = 0, jmax = 0;
  std::uint64_t smax = 0;
  auto common = [&](CLI::App* sub, bool spec_required) {
    auto* opt = sub->add_option("--spec", rc.spec_paths, "spec file (JSON)");
    if (spec_required) opt->required();
    sub->add_option("--out", rc.output_path, "output CSV (default stdout)");
    sub->add_option("--tol", tol, "tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--jmax", jmax, "cutoff on the kappa argument 2 pi |q| y");
    sub->add_option("--smax", smax, "truncation of the smooth-number sums");
    sub->add_option("--parallel", rc.parallel, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--seed", rc.seed, "sampling seed");
  };
  auto* local = app.add_subcommand("verify-local", "oracle vs closed-form local newform tables");
  common(local, false);
  auto* cosets = app.add_subcommand("verify-cosets", "double coset, mirror and translate suites");
  common(cosets, false);
  cosets->add_option("--p", rc.p, "prime")->required();
  cosets->add_option("--n", rc.n, "conductor exponent")->required();
  auto* arch = app.add_subcommand("verify-arch", "K-Bessel and decay suites");
  common(arch, false);
  auto* supp = app.add_subcommand("support", "support progression tables");
  common(supp, true);
  auto* scn = app.add_subcommand("scan", "majorant scan over the generating domain");
  common(scn, true);
  auto* cmp = app.add_subcommand("compare", "comparator ratios across specs");
  common(cmp, true);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    exit_code = app.exit(e, o, e2);
    err << o.str() << e2.str();
    if (exit_code != 0) exit_code = kExitInput;
    return std::nullopt;
  }
  if (local->parsed()) rc.command = Command::VerifyLocal;
  if (cosets->parsed()) rc.command = Command::VerifyCosets;
  if (arch->parsed()) rc.command = Command::VerifyArch;
  if (supp->parsed()) rc.command = Command::Support;
  if (scn->parsed()) rc.command = Command::Scan;
  if (cmp->parsed()) rc.command = Command::Compare;
  auto* sub = app.get_subcommands().front();
  if (sub->count("--tol")) rc.tolerance = tol;
  if (sub->count("--jmax")) rc.jmax = jmax;
  if (sub->count("--smax")) rc.smax = smax;
  if (rc.jmax && *rc.jmax < 4.0) {
    err << "--jmax must be at least 4 (a tenth of the default 40)\n";
    exit_code = kExitInput;
    return std::nullopt;
  }
  if (rc.smax && *rc.smax < 1000) {
    err << "--smax must be at least 1000 (a tenth of the default 10000)\n";
    exit_code = kExitInput;
    return std::nullopt;
  }
  return rc;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ostringstream buffer;
  int code;
  try {
    switch (config.command) {
      case Command::VerifyLocal: code = verify_local(config, buffer, err); break;
      case Command::VerifyCosets: code = verify_cosets(config, buffer, err); break;
      case Command::VerifyArch: code = verify_arch(config, buffer, err); break;
      case Command::Support: code = support(config, buffer, err); break;
      case Command::Scan: code = scan_command(config, buffer, err); break;
      case Command::Compare: code = compare(config, buffer, err); break;
      default: code = kExitInput;
    }
  } catch (const MissingEigenvalue& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const UnsupportedRegimeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (config.output_path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream f(config.output_path, std::ios::binary);
    if (!f) {
      err << "error: cannot write " << config.output_path << "\n";
      return kExitInput;
    }
    f << buffer.str();
  }
  return code;
}

}  // namespace gl2sup::cli
