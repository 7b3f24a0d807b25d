#include "threshold_lab/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <variant>

#include "threshold_lab/exact_moments.hpp"
#include "threshold_lab/monte_carlo.hpp"
#include "threshold_lab/threshold_bounds.hpp"
#include "threshold_lab/verify.hpp"

namespace threshold_lab::cli {

namespace {

enum class Format { Csv, Json, Jsonl };

using Cell = std::variant<long long, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string format_double(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  if (digits >= 17) {
    // Shortest representation that round-trips.
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
  }
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

std::string csv_field(const Cell& c, int digits) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v, digits);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v.find_first_of(",\"\n") == std::string::npos ? v : "\"" + v + "\"";
        } else {
          return std::to_string(v);
        }
      },
      c);
}

nlohmann::ordered_json json_value(const Cell& c, int digits) {
  return std::visit(
      [&](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;  // JSON has no infinities
          return digits >= 17 ? v : std::stod(format_double(v, digits));
        } else {
          return v;
        }
      },
      c);
}

// single: emit JSON as one object rather than an array of one.
void emit(const Table& t, Format format, int digits, std::ostream& os, bool single = false) {
  auto object = [&](const std::vector<Cell>& row) {
    nlohmann::ordered_json j;
    for (std::size_t i = 0; i < t.columns.size(); ++i) j[t.columns[i]] = json_value(row[i], digits);
    return j;
  };
  switch (format) {
    case Format::Csv:
      for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
      os << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i], digits);
        os << '\n';
      }
      break;
    case Format::Json: {
      if (single && t.rows.size() == 1) {
        os << object(t.rows.front()).dump(2) << '\n';
      } else {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : t.rows) arr.push_back(object(row));
        os << arr.dump(2) << '\n';
      }
      break;
    }
    case Format::Jsonl:
      for (const auto& row : t.rows) os << object(row).dump() << '\n';
      break;
  }
}

// Writes to `path`, or to `fallback` when the path is empty.
void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  body(file);
  file.flush();
  if (!file) throw IoError("write to '" + path + "' failed");
}

int resolve_threads(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("THRESHOLD_LAB_THREADS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

const std::map<std::string, Format> kFormats{
    {"csv", Format::Csv}, {"json", Format::Json}, {"jsonl", Format::Jsonl}};

struct Globals {
  int threads_flag = 0;
  int digits = 17;
  int threads() const { return resolve_threads(threads_flag); }
};

void add_bounds(CLI::App& app, const Globals& g, std::function<int()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("bounds", "Lower/upper density bounds per k (CSV columns: "
                                           "k,lower,upper,hessian_bound,tangency_bound,binding,gap)");
  struct Opts {
    int k_min = 3, k_max = 12;
    double tol = kDefaultBoundsTol;
    Format format = Format::Csv;
    std::string out_path;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--k-min", o->k_min, "Smallest k (>= 3)");
  cmd->add_option("--k-max", o->k_max, "Largest k (<= 20)");
  cmd->add_option("--tol", o->tol, "Bisection tolerance in r")->check(CLI::PositiveNumber);
  cmd->add_option("--format", o->format, "csv | json | jsonl")->transform(CLI::CheckedTransformer(kFormats));
  cmd->add_option("--out", o->out_path, "Output path (default: stdout)");
  cmd->callback([&, o] {
    action = [&, o] {
      if (o->k_min < 3 || o->k_max > 20 || o->k_min > o->k_max) {
        throw UsageError("bounds: need 3 <= --k-min <= --k-max <= 20");
      }
      Table t{{"k", "lower", "upper", "hessian_bound", "tangency_bound", "binding", "gap"}, {}};
      for (const auto& row : bounds_table(o->k_min, o->k_max, o->tol, g.threads())) {
        t.rows.push_back({(long long)row.k, row.lower, row.upper, row.hessian_bound, row.tangency_bound,
                          to_string(row.binding), row.gap()});
      }
      with_output(o->out_path, out, [&](std::ostream& os) { emit(t, o->format, g.digits, os); });
      return kOk;
    };
  });
}

void add_gmax(CLI::App& app, const Globals& g, std::function<int()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("gmax", "Maximize g_nae (dims 1) or g_r over the overlap simplex (dims 3)");
  struct Opts {
    int k = 3;
    double r = 1.0;
    int dims = 3;
    int grid = 64;
    int starts = 16;
    std::optional<double> exclusion;
    Format format = Format::Csv;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--k", o->k, "Uniformity k")->required();
  cmd->add_option("--r", o->r, "Edge density r")->required();
  cmd->add_option("--dims", o->dims, "1 or 3")->check(CLI::IsMember({1, 3}));
  cmd->add_option("--grid", o->grid, "Grid points per axis (dims 3, >= 32)");
  cmd->add_option("--starts", o->starts, "Random restarts (dims 3, >= 8)");
  cmd->add_option("--exclusion", o->exclusion,
                  "Neighborhood of the symmetric point excluded from secondary_max "
                  "(default 1e-3 in alpha for dims 1, 0.01 L1 in (alpha, beta) for dims 3)");
  cmd->add_option("--format", o->format, "csv | json | jsonl")->transform(CLI::CheckedTransformer(kFormats));
  cmd->callback([&, o] {
    action = [&, o] {
      const Params p{o->k, o->r};
      p.validate();
      Table t;
      if (o->dims == 1) {
        const GnaeReport rep = maximize_gnae(p, o->exclusion.value_or(kTangencyExclusion));
        t.columns = {"k", "r", "dims", "argmax_alpha", "value", "log_value", "secondary_alpha", "secondary_max",
                     "log_secondary_max"};
        t.rows.push_back({(long long)p.k, p.r, 1LL, rep.argmax, rep.value, rep.log_value, rep.secondary_argmax,
                          rep.secondary_max, rep.log_secondary_max});
      } else {
        GrOptions opt;
        opt.grid_per_axis = o->grid;
        opt.n_starts = o->starts;
        if (o->exclusion) opt.exclusion_radius = *o->exclusion;
        const GrReport rep = maximize_gr(p, opt);
        t.columns = {"k", "r", "dims", "alpha", "beta", "gamma", "value", "log_value", "secondary_alpha",
                     "secondary_beta", "secondary_gamma", "secondary_max", "log_secondary_max", "n_starts",
                     "local_maxima"};
        t.rows.push_back({(long long)p.k, p.r, 3LL, rep.argmax.alpha, rep.argmax.beta, rep.argmax.gamma, rep.value,
                          rep.log_value, rep.secondary_argmax.alpha, rep.secondary_argmax.beta,
                          rep.secondary_argmax.gamma, rep.secondary_max, rep.log_secondary_max,
                          (long long)rep.n_starts, (long long)rep.local_maxima.size()});
      }
      emit(t, o->format, g.digits, out, true);
      return kOk;
    };
  });
}

void add_moments(CLI::App& app, const Globals& g, std::function<int()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("moments", "First/second moments of the number of 2-colorings");
  struct Opts {
    int k = 3;
    int n = 0;
    std::optional<double> r;
    std::optional<long> m;
    std::string mode = "exact";
    Format format = Format::Csv;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--k", o->k, "Uniformity k")->required();
  cmd->add_option("--n", o->n, "Vertices (<= 400)")->required();
  auto* r_opt = cmd->add_option("--r", o->r, "Edge density; m = round(r n)");
  auto* m_opt = cmd->add_option("--m", o->m, "Edge count");
  r_opt->excludes(m_opt);
  cmd->add_option("--mode", o->mode, "exact | asym")->check(CLI::IsMember({"exact", "asym"}));
  cmd->add_option("--format", o->format, "csv | json | jsonl")->transform(CLI::CheckedTransformer(kFormats));
  cmd->callback([&, o] {
    action = [&, o] {
      if (!o->r && !o->m) throw UsageError("moments: one of --r or --m is required");
      if (o->r && !(*o->r > 0.0)) throw UsageError("moments: --r must be positive");
      const long m = o->m ? *o->m : edges_for(*o->r, o->n);
      const MomentMode mode = o->mode == "exact" ? MomentMode::Exact : MomentMode::Asymptotic;
      const MomentReport rep = compute_moments(o->n, o->k, m, mode, g.threads());
      Table t{{"k", "n", "m", "r", "mode", "log_first", "log_second", "log_ratio", "first", "second",
               "prob_lower_bound"},
              {}};
      std::vector<Cell> row{(long long)o->k, (long long)o->n, (long long)m, double(m) / o->n, to_string(mode),
                            rep.log_first, rep.log_second, rep.log_ratio, std::exp(rep.log_first),
                            std::exp(rep.log_second), rep.probability_lower_bound()};
      if (mode == MomentMode::Asymptotic && o->n >= 4) {
        t.columns.push_back("log_ratio_sum");
        row.push_back(asym_ratio_sum(o->n, {o->k, double(m) / o->n}, g.threads()));
      }
      t.rows.push_back(std::move(row));
      emit(t, o->format, g.digits, out, true);
      return kOk;
    };
  });
}

void add_simulate(CLI::App& app, const Globals& g, std::function<int()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("simulate", "Monte Carlo colorability curve: JSONL records plus CSV summary "
                                             "(columns r,m,p_hat,ci)");
  struct Opts {
    int k = 3, n = 60;
    double r_min = 1.0, r_max = 3.0;
    int steps = 5, trials = 200;
    std::uint64_t seed = 1;
    std::string out_path = "simulate.jsonl";
    std::string summary_path;
    bool timing = false;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--k", o->k, "Uniformity k");
  cmd->add_option("--n", o->n, "Vertices");
  cmd->add_option("--r-min", o->r_min, "Smallest density");
  cmd->add_option("--r-max", o->r_max, "Largest density");
  cmd->add_option("--steps", o->steps, "Grid points from r-min to r-max (>= 1)");
  cmd->add_option("--trials", o->trials, "Trials per grid point (>= 1)");
  cmd->add_option("--seed", o->seed, "Master seed");
  cmd->add_option("--out", o->out_path, "JSONL record path ('-' for stdout)");
  cmd->add_option("--summary", o->summary_path, "CSV summary path (default: stdout)");
  cmd->add_flag("--timing", o->timing, "Record wall-clock elapsed_ms (makes output run-dependent)");
  cmd->callback([&, o] {
    action = [&, o] {
      if (o->steps < 1) throw UsageError("simulate: --steps must be >= 1");
      if (o->trials < 1) throw UsageError("simulate: --trials must be >= 1");
      if (!(o->r_min > 0.0) || o->r_max < o->r_min || (o->steps > 1 && !(o->r_max > o->r_min))) {
        throw UsageError("simulate: need 0 < --r-min < --r-max (or equal with --steps 1)");
      }
      if (o->k < 3 || o->k > o->n) throw UsageError("simulate: need 3 <= --k <= --n");
      std::vector<double> grid;
      for (int i = 0; i < o->steps; ++i) {
        grid.push_back(o->steps == 1 ? o->r_min : o->r_min + (o->r_max - o->r_min) * i / (o->steps - 1));
      }
      McOptions mo;
      mo.threads = g.threads();
      mo.record_timing = o->timing;
      // Open the record file before the (possibly long) run so a bad path fails fast.
      std::ofstream file;
      if (o->out_path != "-") {
        file.open(o->out_path);
        if (!file) throw IoError("cannot open '" + o->out_path + "' for writing");
      }
      const McCurve curve = mc_curve(o->k, grid, o->n, o->trials, o->seed, mo);
      std::ostream& rec_os = o->out_path == "-" ? out : file;
      write_jsonl(rec_os, curve.records);
      rec_os.flush();
      if (!rec_os) throw IoError("write to '" + o->out_path + "' failed");
      Table t{{"r", "m", "p_hat", "ci"}, {}};
      for (const auto& pt : curve.points) t.rows.push_back({pt.r, (long long)pt.m, pt.p_hat, pt.ci_halfwidth});
      with_output(o->summary_path, out, [&](std::ostream& os) { emit(t, Format::Csv, g.digits, os); });
      return kOk;
    };
  });
}

void add_verify(CLI::App& app, const Globals& g, std::function<int()>& action, std::ostream& out) {
  auto* cmd = app.add_subcommand("verify", "Run the invariant suite; exit 1 on any failure");
  auto level = std::make_shared<std::string>("fast");
  cmd->add_option("--level", *level, "fast | full")->check(CLI::IsMember({"fast", "full"}));
  cmd->callback([&, level] {
    action = [&, level] {
      const auto results = run_verify(*level == "full" ? VerifyLevel::Full : VerifyLevel::Fast,
                                      CoreHooks::defaults(), g.threads());
      int failures = 0;
      for (const auto& r : results) {
        out << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << '\n';
        failures += !r.passed;
      }
      out << results.size() - failures << "/" << results.size() << " checks passed\n";
      if (failures) {
        out << "failed:";
        for (const auto& r : results) {
          if (!r.passed) out << "\n  " << r.name;
        }
        out << '\n';
      }
      return failures ? kVerifyFailed : kOk;
    };
  });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"threshold_lab: second-moment bounds and experiments for random hypergraph 2-coloring"};
  app.option_defaults()->always_capture_default();
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "threshold_lab 1.0.0");
  Globals g;
  app.add_option("--threads", g.threads_flag,
                 "Worker threads for simulations and large sums (0: $THRESHOLD_LAB_THREADS or 1)");
  app.add_option("--digits", g.digits, "Significant digits in numeric output (17: shortest exact form)")->check(CLI::Range(1, 17));

  std::function<int()> action;
  add_bounds(app, g, action, out);
  add_gmax(app, g, action, out);
  add_moments(app, g, action, out);
  add_simulate(app, g, action, out);
  add_verify(app, g, action, out);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const UsageError& e) {
    err << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceError& e) {
    err << "resource guard exceeded (" << e.limit() << "): " << e.what() << '\n';
    return kResourceGuard;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const BracketError& e) {
    err << "error: " << e.what() << '\n';
    return kVerifyFailed;
  }
}

}  // namespace threshold_lab::cli
