#include "ambiglab/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ambiglab/serialize.hpp"

namespace ambiglab::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Options {
  std::uint64_t seed = 0;
  int m = 0;
  int n = 0;
  std::string lambda1, lambda2, b, bprime, w;
  std::string family = "auto";
  std::string in, out, grid;
  double tol = std::nan("");
  int trials = 20;
};

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t") - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, sep);)
    if (!trim(item).empty()) parts.push_back(trim(item));
  return parts;
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && !s.empty(), "not an integer: '" + s + "'");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(static_cast<bool>(f), "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  require(static_cast<bool>(f), "cannot write '" + o.out + "'");
  f << text;
}

RealVec to_vec(const std::vector<double>& v) {
  return Eigen::Map<const RealVec>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double tol_or(const Options& o, double fallback) { return std::isnan(o.tol) ? fallback : o.tol; }

std::string join(const RealVec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + format_real(v(i));
  return s;
}

std::string join(const IntVec& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v(i));
  return s;
}

// ---------------------------------------------------------------------------
// Family selection shared by gen and dim.

enum class FamilyKind { Sparse, Coded, Mixed };

FamilyKind resolve_family(const Options& o) {
  if (o.family == "sparse") return FamilyKind::Sparse;
  if (o.family == "coded") return FamilyKind::Coded;
  if (o.family == "mixed") return FamilyKind::Mixed;
  require(o.family == "auto", "unknown --family '" + o.family + "'");
  if (!o.b.empty() || !o.bprime.empty()) return FamilyKind::Coded;
  if (!o.lambda2.empty()) return FamilyKind::Sparse;
  return FamilyKind::Mixed;
}

RealVec code_or_zero(const std::string& text, const IndexSet& lambda) {
  if (text.empty()) return RealVec::Zero(static_cast<Eigen::Index>(lambda.size()));
  return to_vec(parse_real_list(text));
}

GeneratorFamily build_family(const Options& o, FamilyKind kind) {
  const IndexSet l1(parse_index_list(o.lambda1));
  const IndexSet l2(parse_index_list(o.lambda2));
  switch (kind) {
    case FamilyKind::Sparse: return GeneratorFamily::sparse(l1, l2, o.m, o.n);
    case FamilyKind::Mixed: return GeneratorFamily::mixed(l1, o.m, o.n);
    case FamilyKind::Coded:
      return GeneratorFamily::coded(l1, code_or_zero(o.b, l1), l2, code_or_zero(o.bprime, l2), o.m, o.n,
                                    tol_or(o, kDefaultConeTol));
  }
  fail(ErrorCode::InternalConsistency, "unreachable family kind");
}

// ---------------------------------------------------------------------------

int cmd_gen(const Options& o, std::ostream& out) {
  const FamilyKind kind = resolve_family(o);
  AdversarialInstance inst;
  if (kind == FamilyKind::Mixed) {
    require(o.n >= 4 && o.n % 2 == 0, "gen mixed: --n must be even and >= 4");
    Rng rng(derive_seed(o.seed, 0));
    RealVec y(o.n);
    for (int i = 0; i < o.n; ++i) y(i) = rng.normal();
    inst = gen_mixed_instance(IndexSet(parse_index_list(o.lambda1)), o.m, y, derive_seed(o.seed, 1));
  } else {
    const auto family = build_family(o, kind);
    Rng rng(o.seed);
    inst = family.instance(family.sample_point(rng));
  }
  emit(o, to_json(inst).dump(2) + "\n", out);
  return kPass;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const AdversarialInstance inst = instance_from_json(parse_json(read_file(o.in)));
  const VerificationReport report = verify_instance(inst, tol_or(o, kDefaultVerifyTol));
  emit(o, to_json(report).dump(2) + "\n", out);
  return report.pass ? kPass : kFail;
}

int cmd_quotient(const Options& o, std::ostream& out) {
  RealVec w;
  if (!o.in.empty()) {
    const Json j = parse_json(read_file(o.in));
    w = vec_from_json(j.is_object() && j.contains("w") ? j["w"] : j);
  } else {
    require(!o.w.empty(), "quotient: give --in or --w");
    w = to_vec(parse_real_list(o.w));
  }
  emit(o, to_json(decompose(w, tol_or(o, kDefaultQuotientTol))).dump(2) + "\n", out);
  return kPass;
}

int cmd_classify(const Options& o, std::ostream& out) {
  const IndexSet lambda(parse_index_list(o.lambda1));
  const RealVec b = code_or_zero(o.b, lambda);
  emit(o, to_json(classify_pair(lambda, b, o.m, tol_or(o, kDefaultConeTol))).dump(2) + "\n", out);
  return kPass;
}

int cmd_dim(const Options& o, std::ostream& out) {
  const FamilyKind kind = resolve_family(o);
  const auto family = build_family(o, kind);
  DimProbeOptions opts;
  opts.lower_bound = (kind == FamilyKind::Coded);
  opts.threads = thread_cap();
  const DimProbeResult r = estimate_unidentifiable_dim(family, o.trials, o.seed, opts);
  emit(o, to_json(r).dump(2) + "\n", out);
  return r.agreement ? kPass : kFail;
}

// ---------------------------------------------------------------------------
// demo: the integer worked example, its rotational family and the two
// illustrative cone vectors.

const IndexSet kFigLambda{3, 4, 7, 8, 9, 12};
constexpr int kFigD = 14;
const double kFigB[] = {0.5, 0.835, -0.3, -0.5, -0.835, -0.15};
constexpr double kFigC = -1.0;

/// Fixed integer background for the illustrative vectors; nonzero endpoints.
double fig_background(int j) { return static_cast<double>((5 * j) % 9 - 4); }

std::string demo_sparse_csv() {
  std::ostringstream os;
  CsvWriter csv(os, {"index", "value", "constrained"});
  for (int j = 1; j <= kFigD; ++j) {
    const bool c = kFigLambda.contains(j);
    csv.cell(j).cell(c ? 0.0 : fig_background(j)).cell(c ? 1 : 0);
    csv.end_row();
  }
  return os.str();
}

std::string demo_coded_csv() {
  std::ostringstream os;
  CsvWriter csv(os, {"index", "value", "constrained"});
  for (int j = 1; j <= kFigD; ++j) {
    const int pos = kFigLambda.position_of(j);
    csv.cell(j).cell(pos ? kFigC * kFigB[pos - 1] : fig_background(j)).cell(pos ? 1 : 0);
    csv.end_row();
  }
  return os.str();
}

std::string demo_code_csv() {
  std::ostringstream os;
  CsvWriter csv(os, {"position", "index", "b"});
  for (std::size_t i = 0; i < kFigLambda.size(); ++i) {
    csv.cell(static_cast<int>(i + 1)).cell(kFigLambda[i]).cell(kFigB[i]);
    csv.end_row();
  }
  return os.str();
}

int cmd_demo(const Options& o, std::ostream& out) {
  IntVec x1(11), y1(7), x2(11), y2(7);
  x1 << 1, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1;
  y1 << 1, 0, 0, 0, 1, 0, 0;
  x2 << 1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0;
  y2 << 1, 0, 1, 0, 1, 0, 1;
  const IntVec z1 = convolve<std::int64_t>(x1, y1);
  const IntVec z2 = convolve<std::int64_t>(x2, y2);
  const bool noncollinear = !collinear(x1.cast<double>(), x2.cast<double>(), kNoncollinearTol);

  std::ostringstream os;
  os << "[worked example]\n";
  os << "x1 = " << join(x1) << "\n";
  os << "y1 = " << join(y1) << "\n";
  os << "x2 = " << join(x2) << "\n";
  os << "y2 = " << join(y2) << "\n";
  os << "z = x1*y1 = " << join(z1) << "\n";
  os << "x2*y2 = " << join(z2) << "\n";
  os << "x1*y1 == x2*y2: " << (z1 == z2 ? "yes" : "no") << "\n";
  os << "x1, x2 non-collinear: " << (noncollinear ? "yes" : "no") << "\n";

  const double theta = kPi / 5, phi = kPi / 3;
  const RealVec dx1 = x1.cast<double>(), dy1 = y1.cast<double>();
  const RealVec dx2 = x2.cast<double>(), dy2 = y2.cast<double>();
  const auto [p1, p2] = rotational_family(dx1, dy1, dx2, dy2, theta, phi);
  const RealVec zr = rotational_closed_form(dx1, dy1, dx2, dy2, theta, phi);
  os << "\n[rotational family] theta = " << format_real(theta) << ", phi = " << format_real(phi) << "\n";
  os << "x1' = " << join(p1.x) << "\n";
  os << "y1' = " << join(p1.y) << "\n";
  os << "x2' = " << join(p2.x) << "\n";
  os << "y2' = " << join(p2.y) << "\n";
  os << "closed form = " << join(zr) << "\n";
  os << "max |x1'*y1' - closed form| = "
     << format_real((convolve(p1.x, p1.y) - zr).lpNorm<Eigen::Infinity>()) << "\n";
  os << "max |x2'*y2' - closed form| = "
     << format_real((convolve(p2.x, p2.y) - zr).lpNorm<Eigen::Infinity>()) << "\n";

  os << "\n[sparse cone vector] Lambda = " << kFigLambda.to_string() << ", d = " << kFigD << "\n"
     << demo_sparse_csv();
  os << "\n[coded cone vector] c = " << format_real(kFigC) << "\n" << demo_coded_csv();
  os << "\n[code vector b]\n" << demo_code_csv();
  out << os.str();

  if (!o.out.empty()) {
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    const std::pair<const char*, std::string> files[] = {
        {"sparse_vector.csv", demo_sparse_csv()},
        {"coded_vector.csv", demo_coded_csv()},
        {"code_vector.csv", demo_code_csv()}};
    for (const auto& [name, text] : files) {
      std::ofstream f(dir / name, std::ios::binary);
      require(static_cast<bool>(f), "cannot write " + (dir / name).string());
      f << text;
    }
  }
  return z1 == z2 && noncollinear ? kPass : kFail;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepItem {
  int m = 0, n = 0, rep = 0;
  std::string family;
  PairTypeLabel tx = PairTypeLabel::Type0, ty = PairTypeLabel::Type0;
};

struct SweepGrid {
  int m_lo = 5, m_hi = 9, n_lo = 5, n_hi = 9, reps = 1, trials = 0;
  std::string family = "sparse";
};

std::pair<int, int> parse_range(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {to_int(s), to_int(s)};
  return {to_int(s.substr(0, colon)), to_int(s.substr(colon + 1))};
}

SweepGrid parse_grid(const std::string& text, int default_trials) {
  SweepGrid g;
  g.trials = default_trials;
  for (const auto& part : split(text, ',')) {
    const auto eq = part.find('=');
    require(eq != std::string::npos, "--grid: expected key=value, got '" + part + "'");
    const std::string key = trim(part.substr(0, eq)), value = trim(part.substr(eq + 1));
    if (key == "m") {
      std::tie(g.m_lo, g.m_hi) = parse_range(value);
    } else if (key == "n") {
      std::tie(g.n_lo, g.n_hi) = parse_range(value);
    } else if (key == "reps") {
      g.reps = to_int(value);
    } else if (key == "trials") {
      g.trials = to_int(value);
    } else if (key == "family") {
      require(value == "sparse" || value == "coded" || value == "mixed", "--grid: unknown family '" + value + "'");
      g.family = value;
    } else {
      fail(ErrorCode::InvalidArgument, "--grid: unknown key '" + key + "'");
    }
  }
  require(g.m_lo <= g.m_hi && g.n_lo <= g.n_hi && g.reps >= 1 && g.trials >= 0, "--grid: empty or invalid ranges");
  return g;
}

int min_dim(PairTypeLabel t) {
  switch (t) {
    case PairTypeLabel::Type0: return 5;
    case PairTypeLabel::Type1: return 4;
    default: return 3;
  }
}

std::vector<SweepItem> expand(const SweepGrid& g) {
  static const PairTypeLabel kTypes[] = {PairTypeLabel::Type0, PairTypeLabel::Type1, PairTypeLabel::Type2};
  std::vector<SweepItem> items;
  for (int m = g.m_lo; m <= g.m_hi; ++m) {
    for (int n = g.n_lo; n <= g.n_hi; ++n) {
      for (int rep = 0; rep < g.reps; ++rep) {
        if (g.family == "coded") {
          for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b)
              if (m >= min_dim(kTypes[a]) && n >= min_dim(kTypes[b]))
                items.push_back({m, n, rep, g.family, kTypes[a], kTypes[b]});
        } else if (m >= 5 && (g.family == "mixed" ? n >= 3 : n >= 5)) {
          items.push_back({m, n, rep, g.family, PairTypeLabel::Type0,
                           g.family == "mixed" ? PairTypeLabel::Type2 : PairTypeLabel::Type0});
        }
      }
    }
  }
  return items;
}

struct SweepRow {
  std::string lambda1, lambda2, status = "ok";
  int p1 = 0, p2 = 0, claimed = 0, pre = -1, post = -1;
  bool agreement = false, pass = false;
  double conv_residual = std::nan("");
};

SweepRow run_item(const SweepItem& item, std::uint64_t seed, int trials) {
  SweepRow row;
  try {
    Rng rng(derive_seed(seed, 0));
    IndexSet l1, l2;
    RealVec b, bp;
    std::tie(l1, b) = random_side_config(item.tx, item.m, rng);
    if (item.family == "mixed") {
      l2 = IndexSet{2};
      bp = RealVec::Ones(1);
    } else {
      std::tie(l2, bp) = random_side_config(item.ty, item.n, rng);
    }
    row.lambda1 = l1.to_string();
    row.lambda2 = item.family == "mixed" ? "{}" : l2.to_string();
    const auto family = item.family == "sparse"  ? GeneratorFamily::sparse(l1, l2, item.m, item.n)
                        : item.family == "mixed" ? GeneratorFamily::mixed(l1, item.m, item.n)
                                                 : GeneratorFamily::coded(l1, b, l2, bp, item.m, item.n);
    row.p1 = family.x_side().p();
    row.p2 = item.family == "mixed" ? 0 : family.y_side().p();
    row.claimed = family.claimed_dim();

    Rng point_rng(derive_seed(seed, 1));
    const auto inst = family.instance(family.sample_point(point_rng));
    const auto report = verify_instance(inst);
    row.conv_residual = report.conv_residual;
    row.pass = report.pass;

    if (trials > 0) {
      DimProbeOptions opts;
      opts.lower_bound = (item.family == "coded");
      const auto probe = estimate_unidentifiable_dim(family, trials, derive_seed(seed, 2), opts);
      row.pre = probe.measured_pre_quotient;
      row.post = probe.measured_post_quotient;
      row.agreement = probe.agreement;
    }
  } catch (const Error& e) {
    row.status = to_string(e.code());
  }
  return row;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const SweepGrid grid = parse_grid(o.grid, o.trials);
  const std::vector<SweepItem> items = expand(grid);
  std::vector<SweepRow> rows(items.size());

  // Items are independent and seeded by position, so the schedule does not
  // affect the output; rows are merged in item order.
  const int threads = std::max(1, std::min<int>(thread_cap(), static_cast<int>(items.size())));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < items.size(); i = next++)
        rows[i] = run_item(items[i], derive_seed(o.seed, i), grid.trials);
    });
  }
  for (auto& th : pool) th.join();

  std::ostringstream os;
  CsvWriter csv(os, {"item", "m", "n", "rep", "family", "type_x", "type_y", "lambda1", "lambda2", "p1", "p2",
                     "claimed", "measured_pre", "measured_post", "agreement", "conv_residual", "pass", "status"});
  bool all_ok = true;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    const auto& r = rows[i];
    csv.cell(static_cast<long long>(i)).cell(it.m).cell(it.n).cell(it.rep).cell(it.family);
    csv.cell(to_string(it.tx)).cell(it.family == "mixed" ? "unconstrained" : to_string(it.ty));
    csv.cell(r.lambda1).cell(r.lambda2).cell(r.p1).cell(r.p2).cell(r.claimed).cell(r.pre).cell(r.post);
    csv.cell(grid.trials > 0 ? (r.agreement ? "1" : "0") : "").cell(r.conv_residual).cell(r.pass ? 1 : 0);
    csv.cell(r.status);
    csv.end_row();
    all_ok = all_ok && r.status == "ok" && r.pass && (grid.trials == 0 || r.agreement);
  }
  emit(o, os.str(), out);
  return all_ok ? kPass : kFail;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedInput: return kMalformed;
    case ErrorCode::Inconclusive: return kInconclusive;
    default: return kFail;
  }
}

}  // namespace

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& part : split(text, ',')) {
    const auto dash = part.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(to_int(part));
      continue;
    }
    const int lo = to_int(trim(part.substr(0, dash))), hi = to_int(trim(part.substr(dash + 1)));
    require(lo <= hi, "empty index range '" + part + "'");
    for (int j = lo; j <= hi; ++j) out.push_back(j);
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == part.size(), "not a number: '" + part + "'");
    out.push_back(v);
  }
  return out;
}

int thread_cap() {
  if (const char* env = std::getenv("AMBIGLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generators and certificates for unidentifiable blind deconvolution instances", "ambiglab"};
  app.require_subcommand(1);
  Options o;

  auto add_shape = [&](CLI::App* s) {
    s->add_option("--m", o.m, "length of x (or d for classify)");
    s->add_option("--n", o.n, "length of y");
    s->add_option("--lambda1", o.lambda1, "x-side index set, e.g. 3,4,7-9");
    s->add_option("--lambda2", o.lambda2, "y-side index set");
    s->add_option("--b", o.b, "x-side code vector, comma separated");
    s->add_option("--bprime", o.bprime, "y-side code vector, comma separated");
    s->add_option("--family", o.family, "sparse, coded, mixed or auto");
  };

  auto* gen = app.add_subcommand("gen", "generate a certified adversarial instance (JSON)");
  add_shape(gen);
  gen->add_option("--seed", o.seed, "random seed")->required();
  gen->add_option("--tol", o.tol, "classification tolerance");
  gen->add_option("--out", o.out, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "audit an instance file; exit 0 pass, 1 fail");
  verify->add_option("--in", o.in, "instance JSON")->required();
  verify->add_option("--tol", o.tol, "relative tolerance");
  verify->add_option("--out", o.out, "report file (default stdout)");

  auto* quotient = app.add_subcommand("quotient", "list the shift-rotation decompositions of a vector");
  quotient->add_option("--in", o.in, "JSON array or {\"w\": [...]}");
  quotient->add_option("--w", o.w, "vector, comma separated");
  quotient->add_option("--tol", o.tol, "reconstruction tolerance");
  quotient->add_option("--out", o.out, "output file (default stdout)");

  auto* classify = app.add_subcommand("classify", "classify a (Lambda, b) pair");
  classify->add_option("--lambda1", o.lambda1, "index set")->required();
  classify->add_option("--b", o.b, "code vector (default zero)");
  classify->add_option("--m", o.m, "ambient dimension d")->required();
  classify->add_option("--tol", o.tol, "collinearity tolerance");
  classify->add_option("--out", o.out, "output file (default stdout)");

  auto* dim = app.add_subcommand("dim", "probe the ambiguity dimension of a generator family");
  add_shape(dim);
  dim->add_option("--seed", o.seed, "random seed")->required();
  dim->add_option("--trials", o.trials, "number of sample points");
  dim->add_option("--tol", o.tol, "classification tolerance");
  dim->add_option("--out", o.out, "output file (default stdout)");

  auto* demo = app.add_subcommand("demo", "reproduce the worked example and illustrative vectors");
  demo->add_option("--out", o.out, "directory for the CSV files");

  auto* sweep = app.add_subcommand("sweep", "run a campaign over a parameter grid (CSV)");
  sweep->add_option("--seed", o.seed, "random seed")->required();
  sweep->add_option("--grid", o.grid, "e.g. m=5:9,n=5:9,reps=20,family=sparse,trials=10");
  sweep->add_option("--trials", o.trials, "probe trials per item (0 skips the probe)")->default_val(0);
  sweep->add_option("--out", o.out, "CSV file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kFail;
  }

  try {
    if (*gen) return cmd_gen(o, out);
    if (*verify) return cmd_verify(o, out);
    if (*quotient) return cmd_quotient(o, out);
    if (*classify) return cmd_classify(o, out);
    if (*dim) return cmd_dim(o, out);
    if (*demo) return cmd_demo(o, out);
    if (*sweep) return cmd_sweep(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  }
  return kFail;
}

}  // namespace ambiglab::cli
