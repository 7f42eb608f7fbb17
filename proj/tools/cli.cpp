#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "fermi_qfi/errors.hpp"
#include "fermi_qfi/hall.hpp"
#include "fermi_qfi/verify.hpp"

namespace fqfi::cli {
namespace {

const char* const kCommands[] = {"hall-sweep", "bench-gaas", "verify", "scaling"};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// key = value lines, '#' starts a comment; each becomes --key=value.
std::vector<std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file: " + path);
  std::vector<std::string> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") {
      throw UsageError(path + ":" + std::to_string(number) + ": invalid key");
    }
    out.push_back("--" + key + "=" + value);
  }
  return out;
}

// Config values go in front of the command-line options so that flags win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  auto sub = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
    return std::find(std::begin(kCommands), std::end(kCommands), a) != std::end(kCommands);
  });
  if (sub == args.end()) throw UsageError("--config needs a command");
  std::vector<std::string> out(args.begin(), sub + 1);
  const auto extra = read_config(path);
  out.insert(out.end(), extra.begin(), extra.end());
  out.insert(out.end(), sub + 1, args.end());
  return out;
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw UsageError("cannot open output file: " + path);
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw UsageError("failed writing output");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string optional_number(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string{};
}

// ------------------------------------------------------------ hall-sweep

struct SweepOptions {
  Fig1Config fig;
  double meff_ratio = gaas::mass_ratio;
  std::string out;
  std::string format = "csv";
};

int hall_sweep(const SweepOptions& o, std::ostream& out, std::ostream& err) {
  Fig1Config config = o.fig;
  config.m_eff = o.meff_ratio * si::electron_mass;
  const auto rows = fig1_surface(config);
  const auto valid = std::count_if(rows.begin(), rows.end(), [](const Fig1Row& r) { return r.valid; });

  Output sink(o.out, out);
  std::ostream& os = *sink;
  if (o.format == "csv") {
    os << "B_tesla,w_m,L_m,N,M,f,mbar,qfi_si,sigmaB_tesla,valid\n";
    if (valid > 0) {
      for (const auto& r : rows) {
        os << format_number(r.B) << ',' << format_number(r.w) << ',' << format_number(r.L) << ','
           << r.N << ',' << r.M << ',' << r.f << ',' << r.mbar << ',' << optional_number(r.qfi)
           << ',' << optional_number(r.sigmaB) << ',' << (r.valid ? "true" : "false") << '\n';
      }
    }
  } else {
    os << "{\n  \"columns\": [\"B_tesla\", \"w_m\", \"L_m\", \"N\", \"M\", \"f\", \"mbar\", "
          "\"qfi_si\", \"sigmaB_tesla\", \"valid\"],\n  \"rows\": [";
    bool first = true;
    if (valid > 0) {
      for (const auto& r : rows) {
        os << (first ? "\n" : ",\n") << "    {\"B_tesla\": " << format_number(r.B)
           << ", \"w_m\": " << format_number(r.w) << ", \"L_m\": " << format_number(r.L)
           << ", \"N\": " << r.N << ", \"M\": " << r.M << ", \"f\": " << r.f
           << ", \"mbar\": " << r.mbar
           << ", \"qfi_si\": " << (r.qfi ? json_number(*r.qfi) : "null")
           << ", \"sigmaB_tesla\": " << (r.sigmaB ? json_number(*r.sigmaB) : "null")
           << ", \"valid\": " << (r.valid ? "true" : "false") << "}";
        first = false;
      }
    }
    os << (first ? "]\n}\n" : "\n  ]\n}\n");
  }
  sink.finish();
  if (valid == 0) {
    err << "warning: no grid point satisfies w > max(L, l_B); data section is empty\n";
    return kEmpty;
  }
  return kOk;
}

// ------------------------------------------------------------ bench-gaas

struct BenchOptions {
  double B = gaas::field;
  double w = gaas::width;
  double L = gaas::length;
  double meff_ratio = gaas::mass_ratio;
  double n2d = gaas::density;
};

int bench_gaas(const BenchOptions& o, std::ostream& out) {
  const double m_eff = o.meff_ratio * si::electron_mass;
  const auto g = geometry_from_density(o.L, o.w, o.B, m_eff, o.n2d);
  const auto single = sensitivity(g, 1.0);
  const auto bandwidth = sensitivity(g, 1e10);
  const auto cyclotron = sensitivity(g, 1e12);

  out << "GaAs quantum-Hall magnetometer\n"
      << "  m_eff/m_e        " << o.meff_ratio << "\n"
      << "  n_2D [1/m^2]     " << o.n2d << "\n"
      << "  B [T]            " << o.B << "\n"
      << "  w x L [m]        " << o.w << " x " << o.L << "\n"
      << "  l_B [m]          " << g.l_B << "\n"
      << "  omega [rad/s]    " << g.omega << "\n"
      << "  N, M, f, mbar    " << g.N << ", " << g.M << ", " << g.f << ", " << g.mbar << "\n"
      << "  QFI [s^2]        " << single.qfi << "\n"
      << "  sigma_B, Me=1            " << single.sigmaB << " T\n"
      << "  sigma_B, Me=1e10 (10 GHz) " << bandwidth.sigmaB << " T/Hz^1/2\n"
      << "  sigma_B, Me=1e12 (cyclotron limit) " << cyclotron.sigmaB << " T/Hz^1/2\n"
      << "  cyclotron bound on Me per second ~ omega * 1 s = " << g.omega << "\n";
  if (!g.strong_field) out << "  warning: l_B is not small compared with w\n";
  if (!g.narrow) out << "  warning: L >= w, the roles of w and L should be exchanged\n";
  out << "--- machine-readable ---\n"
      << "{\"B_tesla\": " << format_number(o.B) << ", \"w_m\": " << format_number(o.w)
      << ", \"L_m\": " << format_number(o.L) << ", \"meff_ratio\": " << format_number(o.meff_ratio)
      << ", \"n2d\": " << format_number(o.n2d) << ", \"l_B_m\": " << format_number(g.l_B)
      << ", \"omega\": " << format_number(g.omega) << ", \"N\": " << g.N << ", \"M\": " << g.M
      << ", \"f\": " << g.f << ", \"mbar\": " << g.mbar
      << ", \"qfi_si\": " << format_number(single.qfi)
      << ", \"sigmaB_Me1\": " << format_number(single.sigmaB)
      << ", \"sigmaB_Me1e10\": " << format_number(bandwidth.sigmaB)
      << ", \"sigmaB_Me1e12\": " << format_number(cyclotron.sigmaB)
      << ", \"strong_field\": " << (g.strong_field ? "true" : "false")
      << ", \"narrow\": " << (g.narrow ? "true" : "false") << "}\n";
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyCmd {
  std::string suite = "all";
  std::uint64_t seed = VerifyOptions{}.seed;
  bool inject_fault = false;
};

int verify(const VerifyCmd& o, std::ostream& out, std::ostream& err) {
  if (!is_known_suite(o.suite)) {
    err << "unknown suite '" << o.suite << "' (expected all, fock, bogoliubov, qfi or hall)\n";
    return kUsage;
  }
  const auto results = run_verification({o.suite, o.seed, o.inject_fault});
  int failed = 0;
  for (const auto& r : results) {
    out << (r.pass ? "PASS" : "FAIL") << "  [" << r.suite << "] " << r.name
        << "  residual=" << format_number(r.residual) << "  tol=" << format_number(r.tolerance)
        << '\n';
    failed += r.pass ? 0 : 1;
  }
  out << results.size() - failed << "/" << results.size() << " checks passed (seed " << o.seed
      << ")\n";
  return failed == 0 ? kOk : kVerifyFailed;
}

// --------------------------------------------------------------- scaling

struct ScalingOptions {
  double lambda = 0.75;
  double N_min = 1e3;
  double N_max = 1e6;
  int N_points = 13;
  int f = 1;
  double nu = 1.0;
  double meff_ratio = gaas::mass_ratio;
  double n2d = gaas::density;
  std::string out;
  std::string format = "csv";
};

int scaling(const ScalingOptions& o, std::ostream& out) {
  if (!(o.lambda >= 0.5 && o.lambda <= 1.0)) throw DomainError("lambda must lie in [1/2, 1]");
  if (o.f < 1) throw DomainError("f must be at least 1");
  if (o.N_points < 2) throw DomainError("scaling fit needs at least two N values");
  const double m_eff = o.meff_ratio * si::electron_mass;
  // Field chosen so that ν = N/M = f + 1/2; then n_2D fixes μν = 2π/(f + 1/2).
  const double filling = o.f + 0.5;
  const double l2 = filling / (2.0 * std::numbers::pi * o.n2d);
  const double B = si::hbar / (si::elementary_charge * l2);
  const double lb = std::sqrt(l2);
  const double mu = 2.0 * std::numbers::pi / (filling * o.nu);

  struct Row {
    HallGeometry g;
    double qfi;
    double leading;
  };
  std::vector<Row> rows;
  for (double n_real : log_grid(o.N_min, o.N_max, o.N_points)) {
    const auto N = static_cast<std::int64_t>(std::llround(n_real));
    const double L = o.nu * std::pow(static_cast<double>(N), 1.0 - o.lambda) * lb;
    const double w = mu * std::pow(static_cast<double>(N), o.lambda) * lb;
    const auto g = geometry_from_count(L, w, B, m_eff, N);
    rows.push_back({g, qfi_hall_closed(g),
                    scaling_leading(static_cast<double>(N), o.lambda, mu, o.nu,
                                    static_cast<double>(g.f), g.omega)});
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.g.N));
    const double y = std::log(r.qfi);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double theory = 1.0 + 2.0 * o.lambda;

  Output sink(o.out, out);
  std::ostream& os = *sink;
  if (o.format == "csv") {
    os << "N,M,f,mbar,L_m,w_m,B_tesla,qfi_si,qfi_leading_si\n";
    for (const auto& r : rows) {
      os << r.g.N << ',' << r.g.M << ',' << r.g.f << ',' << r.g.mbar << ','
         << format_number(r.g.L) << ',' << format_number(r.g.w) << ',' << format_number(r.g.B)
         << ',' << format_number(r.qfi) << ',' << format_number(r.leading) << '\n';
    }
    os << "# lambda=" << format_number(o.lambda) << " fitted_slope=" << format_number(slope)
       << " theory_slope=" << format_number(theory) << '\n';
  } else {
    os << "{\n  \"lambda\": " << format_number(o.lambda) << ",\n  \"fitted_slope\": "
       << format_number(slope) << ",\n  \"theory_slope\": " << format_number(theory)
       << ",\n  \"rows\": [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      os << (i ? ",\n" : "\n") << "    {\"N\": " << r.g.N << ", \"M\": " << r.g.M
         << ", \"f\": " << r.g.f << ", \"mbar\": " << r.g.mbar
         << ", \"L_m\": " << format_number(r.g.L) << ", \"w_m\": " << format_number(r.g.w)
         << ", \"B_tesla\": " << format_number(r.g.B) << ", \"qfi_si\": " << format_number(r.qfi)
         << ", \"qfi_leading_si\": " << format_number(r.leading) << "}";
    }
    os << "\n  ]\n}\n";
  }
  sink.finish();
  if (!o.out.empty() && o.out != "-") {
    out << "fitted slope " << format_number(slope) << ", theory 1+2*lambda = "
        << format_number(theory) << '\n';
  }
  return kOk;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  if (ec != std::errc{}) return "nan";
  return {buf, end};
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum Fisher information of fermionic states and quantum-Hall magnetometry",
               "fermi_qfi"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  auto add_config = [&](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--config", config_path, "key = value file; command-line flags win");
  };
  const std::vector<std::string> formats{"csv", "json"};

  SweepOptions sweep;
  auto* sw = app.add_subcommand("hall-sweep", "sensitivity surface over (B, w)");
  add_config(sw);
  sw->add_option("--L", sweep.fig.L, "length along x [m]")->check(CLI::PositiveNumber);
  sw->add_option("--w-min", sweep.fig.w_min, "[m]")->check(CLI::PositiveNumber);
  sw->add_option("--w-max", sweep.fig.w_max, "[m]")->check(CLI::PositiveNumber);
  sw->add_option("--w-points", sweep.fig.w_points)->check(CLI::PositiveNumber);
  sw->add_option("--B-min", sweep.fig.B_min, "[T]")->check(CLI::PositiveNumber);
  sw->add_option("--B-max", sweep.fig.B_max, "[T]")->check(CLI::PositiveNumber);
  sw->add_option("--B-points", sweep.fig.B_points)->check(CLI::PositiveNumber);
  sw->add_option("--meff-ratio", sweep.meff_ratio, "m_eff / m_e")->check(CLI::PositiveNumber);
  sw->add_option("--n2d", sweep.fig.n2d, "areal density [1/m^2]")->check(CLI::PositiveNumber);
  sw->add_option("--Me", sweep.fig.Me, "number of measurements")->check(CLI::Range(1.0, 1e300));
  sw->add_option("--out", sweep.out, "output path (stdout when absent)");
  sw->add_option("--format", sweep.format)->check(CLI::IsMember(formats));

  BenchOptions bench;
  auto* bg = app.add_subcommand("bench-gaas", "GaAs benchmark");
  add_config(bg);
  bg->add_option("--B", bench.B, "[T]")->check(CLI::PositiveNumber);
  bg->add_option("--w", bench.w, "[m]")->check(CLI::PositiveNumber);
  bg->add_option("--L", bench.L, "[m]")->check(CLI::PositiveNumber);
  bg->add_option("--meff-ratio", bench.meff_ratio)->check(CLI::PositiveNumber);
  bg->add_option("--n2d", bench.n2d)->check(CLI::PositiveNumber);

  VerifyCmd ver;
  auto* vf = app.add_subcommand("verify", "oracle verification suites");
  add_config(vf);
  vf->add_option("--suite", ver.suite, "all|fock|bogoliubov|qfi|hall");
  vf->add_option("--seed", ver.seed);
  vf->add_flag("--inject-fault", ver.inject_fault,
               "flip the sign of the n' = n+2 overlap term (negative test)");

  ScalingOptions sc;
  auto* sl = app.add_subcommand("scaling", "QFI scaling with N at fixed density");
  add_config(sl);
  sl->add_option("--lambda", sc.lambda, "w ~ N^lambda, L ~ N^(1-lambda)");
  sl->add_option("--N-min", sc.N_min)->check(CLI::PositiveNumber);
  sl->add_option("--N-max", sc.N_max)->check(CLI::PositiveNumber);
  sl->add_option("--N-points", sc.N_points)->check(CLI::PositiveNumber);
  sl->add_option("--f", sc.f, "completely filled Landau levels")->check(CLI::PositiveNumber);
  sl->add_option("--nu", sc.nu, "L = nu N^(1-lambda) l_B")->check(CLI::PositiveNumber);
  sl->add_option("--meff-ratio", sc.meff_ratio)->check(CLI::PositiveNumber);
  sl->add_option("--n2d", sc.n2d)->check(CLI::PositiveNumber);
  sl->add_option("--out", sc.out);
  sl->add_option("--format", sc.format)->check(CLI::IsMember(formats));

  try {
    const auto args = expand_config(raw_args);
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (sw->parsed()) return hall_sweep(sweep, out, err);
    if (bg->parsed()) return bench_gaas(bench, out);
    if (vf->parsed()) return verify(ver, out, err);
    if (sl->parsed()) return scaling(sc, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace fqfi::cli
