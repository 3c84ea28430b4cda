#include "coinwalk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace coinwalk {
namespace fs = std::filesystem;
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find(sep, start);
    const auto piece = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (!piece.empty()) out.push_back(piece);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

long parse_long(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ConfigError(key + ": '" + s + "' is not an integer");
  return v;
}

double parse_double(const std::string& s, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty() || !std::isfinite(v)) {
    throw ConfigError(key + ": '" + s + "' is not a finite number");
  }
  return v;
}

std::pair<long, long> parse_range(const std::string& s, const std::string& key) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const long v = parse_long(s, key);
    return {v, v};
  }
  const long lo = parse_long(trim(s.substr(0, dots)), key);
  const long hi = parse_long(trim(s.substr(dots + 2)), key);
  if (hi < lo) throw ConfigError(key + ": empty range '" + s + "'");
  return {lo, hi};
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15e", v);
  return buf;
}

TimeWindow parse_window(const std::string& value, const std::string& key) {
  const auto parts = split(value, ',');
  if (parts.size() != 2) throw ConfigError(key + ": expected 'begin, end'");
  TimeWindow w{parse_long(parts[0], key), parse_long(parts[1], key)};
  if (w.end < w.begin) throw ConfigError(key + ": end precedes begin");
  return w;
}

std::vector<BakerSpec> parse_members(const std::string& value, FloquetAngles angles) {
  std::vector<BakerSpec> out;
  for (const auto& token : split(value, ',')) {
    const auto slash = token.find('/');
    if (slash == std::string::npos) {
      throw ConfigError("members: '" + token + "' is not of the form N/n or even/D");
    }
    const auto left = trim(token.substr(0, slash));
    const auto right = trim(token.substr(slash + 1));
    if (left == "even") {
      const long d = parse_long(right, "members");
      if (d < 2) throw ConfigError("members: even dimension must be >= 2");
      out.push_back(BakerSpec::even(static_cast<std::size_t>(d), angles));
      continue;
    }
    const auto [nlo, nhi] = parse_range(left, "members");
    for (long nq = nlo; nq <= nhi; ++nq) {
      if (right == "N") {
        out.push_back(BakerSpec::qubit(static_cast<int>(nq), static_cast<int>(nq), angles));
        continue;
      }
      const auto [lo, hi] = parse_range(right, "members");
      for (long n = lo; n <= hi; ++n) {
        out.push_back(BakerSpec::qubit(static_cast<int>(nq), static_cast<int>(n), angles));
      }
    }
  }
  return out;
}

std::string member_token(const BakerSpec& spec) {
  if (const auto* q = std::get_if<QubitFamily>(&spec.variant)) {
    return std::to_string(q->num_qubits) + "/" + std::to_string(q->n);
  }
  return "even/" + std::to_string(std::get<GeneralEven>(spec.variant).dim);
}

ExperimentKind parse_kind(const std::string& s) {
  for (auto k : {ExperimentKind::Entropy, ExperimentKind::Variance, ExperimentKind::Wigner}) {
    if (experiment_name(k) == s) return k;
  }
  throw ConfigError("experiment: unknown kind '" + s + "' (entropy, variance, wigner)");
}

std::vector<Observable> default_observables(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Entropy: return {Observable::LinearEntropy};
    case ExperimentKind::Variance: return {Observable::StdDev, Observable::Variance};
    case ExperimentKind::Wigner: return {Observable::WignerDistance};
  }
  return {};
}

bool wants(const ExperimentConfig& c, Observable o) {
  return std::find(c.observables.begin(), c.observables.end(), o) != c.observables.end();
}

int register_bits(std::size_t dim) {
  return static_cast<int>(std::ceil(std::log2(static_cast<double>(dim)) - 1e-12));
}

std::size_t count_in(const ObservableSeries& s, TimeWindow w) {
  return static_cast<std::size_t>(std::count_if(
      s.times.begin(), s.times.end(), [&](long t) { return t >= w.begin && t <= w.end; }));
}

void finalize_summaries(const ExperimentConfig& cfg, MemberResult& r) {
  const std::size_t dim = r.member.dim();
  const int bits = std::max(1, register_bits(dim));
  for (const auto& s : r.series) {
    switch (s.label) {
      case Observable::LinearEntropy: {
        const TimeWindow w = cfg.saturation_window.value_or(
            TimeWindow{static_cast<long>(std::ceil(5.0 * std::log2(static_cast<double>(dim)))),
                       cfg.t_max});
        const std::size_t need = 3 * static_cast<std::size_t>(bits);
        if (count_in(s, w) >= need) r.saturation = entropy_saturation(s, w, need);
        break;
      }
      case Observable::StdDev: {
        const TimeWindow slope_w = cfg.slope_window.value_or(TimeWindow{cfg.t_max / 2, cfg.t_max});
        if (count_in(s, slope_w) >= 10) r.slope = sd_slope(s, slope_w);
        const TimeWindow growth_w =
            cfg.growth_window.value_or(TimeWindow{2, std::max<long>(3, bits)});
        bool positive = true;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (s.times[i] >= growth_w.begin && s.times[i] <= growth_w.end && s.values[i] <= 0.0) {
            positive = false;
          }
        }
        if (positive && growth_w.begin > 0 && count_in(s, growth_w) >= 2) {
          r.growth = growth_exponent(s, growth_w);
        }
        break;
      }
      case Observable::WignerDistance: {
        const TimeWindow w = cfg.late_window.value_or(
            TimeWindow{static_cast<long>(std::ceil(2.0 * static_cast<double>(cfg.t_max) / 3.0)),
                       cfg.t_max});
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (s.times[i] >= w.begin && s.times[i] <= w.end) {
            sum += s.values[i];
            ++n;
          }
        }
        if (n > 0) r.late_distance = sum / static_cast<double>(n);
        break;
      }
      default: break;
    }
  }
}

RunResult run_impl(const ExperimentConfig& cfg, int threads) {
  cfg.validate();
  RunResult result;
  result.config = cfg;
  const auto times = cfg.record_times();
  const std::set<long> grid_times(cfg.grid_times.begin(), cfg.grid_times.end());
  const bool entropy = wants(cfg, Observable::LinearEntropy) || wants(cfg, Observable::VonNeumann);
  const bool spread = wants(cfg, Observable::Variance) || wants(cfg, Observable::StdDev);
  const bool wigner = wants(cfg, Observable::WignerDistance);

  for (const auto& member : cfg.members) {
    const BakerMap map(member);
    for (const auto& coin : cfg.coins) {
      MemberResult r;
      r.member = member;
      r.coin = coin.name;
      for (auto o : cfg.observables) r.series.push_back(ObservableSeries{o, {}, {}});
      auto series_for = [&](Observable o) -> ObservableSeries& {
        for (auto& s : r.series) {
          if (s.label == o) return s;
        }
        throw Error("internal: observable not requested");
      };

      SystemState state =
          init_state(cfg.ring_size, InitialCoinSpec::product(coin.qubit).vector(map.dim()));
      for (long t : times) {
        evolve_in_place(state, t - state.time, map, threads);
        const SectorMatrix amps = position_amplitudes(state);
        if (entropy) {
          const DenseMatrix rho_coin = coin_density(amps);
          if (wants(cfg, Observable::LinearEntropy)) {
            series_for(Observable::LinearEntropy).append(t, linear_entropy(rho_coin));
          }
          if (wants(cfg, Observable::VonNeumann)) {
            series_for(Observable::VonNeumann).append(t, von_neumann_entropy(rho_coin));
          }
        }
        if (spread) {
          const auto dist = position_distribution(amps);
          const double var = position_variance(dist);
          if (wants(cfg, Observable::Variance)) series_for(Observable::Variance).append(t, var);
          if (wants(cfg, Observable::StdDev)) {
            series_for(Observable::StdDev).append(t, std::sqrt(std::max(var, 0.0)));
          }
        }
        if (wigner) {
          ReducedDensity rho{amps * amps.adjoint(), Basis::Position};
          WignerGrid w = wigner_from_density(rho);
          w.time = t;
          w.label = r.label();
          const WignerGrid classical =
              classical_phase_grid(classical_walk_distribution(cfg.ring_size, t));
          series_for(Observable::WignerDistance).append(t, distance(w, classical));
          if (grid_times.count(t)) r.grids.push_back(std::move(w));
        }
      }
      finalize_summaries(cfg, r);
      result.members.push_back(std::move(r));
    }
  }
  return result;
}

void require_kind(const ExperimentConfig& cfg, ExperimentKind kind) {
  if (cfg.kind != kind) {
    throw ConfigError("run '" + cfg.name + "' is a " + std::string(experiment_name(cfg.kind)) +
                      " experiment, not " + std::string(experiment_name(kind)));
  }
}

// Presets, written in the config format itself.
constexpr std::string_view kPresetText = R"(
[fig3]
experiment = entropy
ring_size = 1024
coins = plus_i
members = 7/1..7, even/130
angles = 0.5, 0.5
t_max = 400
stride = 1

[fig4]
experiment = entropy
ring_size = 1024
coins = zero, plus_3pi4, plus_i
members = 3..8/N
angles = 0, 0
t_max = 400
stride = 1

[fig5]
experiment = variance
ring_size = 1024
coins = plus_i
members = 7/1..7
angles = 0.5, 0.5
t_max = 400

[fig6]
experiment = variance
ring_size = 1024
coins = plus_i
members = 4..8/1, 4..8/N
angles = 0, 0
t_max = 400

[fig7]
experiment = wigner
ring_size = 64
coins = plus_i
members = 7/1..7
angles = 0.5, 0.5
t_max = 31
stride = 1
grid_times = 0, 31
)";

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Entropy: return "entropy";
    case ExperimentKind::Variance: return "variance";
    case ExperimentKind::Wigner: return "wigner";
  }
  return "unknown";
}

CoinChoice parse_coin(std::string_view token) {
  const std::string t = trim(token);
  if (t == "zero") return {t, QubitState::zero()};
  if (t == "plus_i") return {t, QubitState::plus_i()};
  if (t == "plus_3pi4") return {t, QubitState::plus_3pi4()};
  if (t.rfind("custom:", 0) == 0) {
    const auto parts = split(std::string_view(t).substr(7), ':');
    if (parts.size() != 4) throw ConfigError("coin: custom needs custom:a_re:a_im:b_re:b_im");
    QubitState q{cplx{parse_double(parts[0], "coin"), parse_double(parts[1], "coin")},
                 cplx{parse_double(parts[2], "coin"), parse_double(parts[3], "coin")}};
    if (std::abs(std::norm(q.a) + std::norm(q.b) - 1.0) > 1e-12) {
      throw ConfigError("coin: custom qubit state '" + t + "' is not normalized");
    }
    return {t, q};
  }
  throw ConfigError("coin: unknown initial coin '" + t + "'");
}

void ExperimentConfig::validate() const {
  const std::string where = "run '" + name + "': ";
  if (ring_size < 2) throw ConfigError(where + "ring_size must be >= 2");
  if (t_max < 0) throw ConfigError(where + "t_max must be nonnegative");
  if (stride && *stride < 1) throw ConfigError(where + "stride must be >= 1");
  if (members.empty()) throw ConfigError(where + "no baker members listed");
  if (coins.empty()) throw ConfigError(where + "no initial coin listed");
  if (observables.empty()) throw ConfigError(where + "no observables requested");
  for (const auto& m : members) {
    try {
      m.validate();
    } catch (const InvalidArgument& e) {
      throw ConfigError(where + e.what());
    }
  }
  const bool spread = std::any_of(observables.begin(), observables.end(), [](Observable o) {
    return o == Observable::Variance || o == Observable::StdDev;
  });
  if (spread && ring_size < static_cast<std::size_t>(2 * t_max + 2)) {
    throw ConfigError(where + "variance needs ring_size >= 2*t_max + 2 (ring_size = " +
                      std::to_string(ring_size) + ", t_max = " + std::to_string(t_max) + ")");
  }
  const bool wig = std::find(observables.begin(), observables.end(),
                             Observable::WignerDistance) != observables.end();
  if (wig && ring_size > kMaxWignerRing) {
    throw GuardViolation(where + "Wigner grids need ring_size <= " +
                         std::to_string(kMaxWignerRing) + "; use a smaller ring");
  }
  if (!grid_times.empty() && !wig) {
    throw ConfigError(where + "grid_times requires the wigner_distance observable");
  }
}

std::vector<long> ExperimentConfig::record_times() const {
  std::vector<long> out;
  for (long t = 0; t <= t_max; ++t) {
    const bool keep = stride ? (t % *stride == 0) : (t <= 200 || (t - 200) % 5 == 0);
    if (keep) out.push_back(t);
  }
  return out;
}

std::vector<ExperimentConfig> parse_config(std::istream& in) {
  std::vector<ExperimentConfig> out;
  std::vector<std::map<std::string, std::string>> raw;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string s = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']' || s.size() < 3) {
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      }
      out.emplace_back();
      out.back().name = trim(std::string_view(s).substr(1, s.size() - 2));
      raw.emplace_back();
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    if (out.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key outside of a [run] section");
    }
    const auto key = trim(std::string_view(s).substr(0, eq));
    if (raw.back().count(key)) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
    raw.back()[key] = trim(std::string_view(s).substr(eq + 1));
  }

  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& cfg = out[i];
    auto& kv = raw[i];
    auto take = [&](const std::string& key) -> std::optional<std::string> {
      auto it = kv.find(key);
      if (it == kv.end()) return std::nullopt;
      auto v = it->second;
      kv.erase(it);
      return v;
    };
    auto need = [&](const std::string& key) {
      auto v = take(key);
      if (!v) throw ConfigError("run '" + cfg.name + "': missing required key '" + key + "'");
      return *v;
    };
    cfg.kind = parse_kind(need("experiment"));
    const long ring = parse_long(need("ring_size"), "ring_size");
    if (ring < 2) throw ConfigError("run '" + cfg.name + "': ring_size must be >= 2");
    cfg.ring_size = static_cast<std::size_t>(ring);
    cfg.t_max = parse_long(need("t_max"), "t_max");
    if (auto v = take("angles")) {
      const auto parts = split(*v, ',');
      if (parts.size() != 2) throw ConfigError("angles: expected 'eta, kappa'");
      cfg.angles = {parse_double(parts[0], "angles"), parse_double(parts[1], "angles")};
    }
    cfg.members = parse_members(need("members"), cfg.angles);
    auto coins = take("coins");
    if (!coins) coins = take("coin");
    if (!coins) throw ConfigError("run '" + cfg.name + "': missing required key 'coins'");
    for (const auto& c : split(*coins, ',')) cfg.coins.push_back(parse_coin(c));
    if (auto v = take("stride")) cfg.stride = parse_long(*v, "stride");
    if (auto v = take("observables")) {
      for (const auto& o : split(*v, ',')) {
        try {
          cfg.observables.push_back(parse_observable(o));
        } catch (const InvalidArgument& e) {
          throw ConfigError(e.what());
        }
      }
    } else {
      cfg.observables = default_observables(cfg.kind);
    }
    if (auto v = take("saturation_window")) cfg.saturation_window = parse_window(*v, "saturation_window");
    if (auto v = take("slope_window")) cfg.slope_window = parse_window(*v, "slope_window");
    if (auto v = take("growth_window")) cfg.growth_window = parse_window(*v, "growth_window");
    if (auto v = take("late_window")) cfg.late_window = parse_window(*v, "late_window");
    if (auto v = take("grid_times")) {
      for (const auto& t : split(*v, ',')) cfg.grid_times.push_back(parse_long(t, "grid_times"));
    }
    if (!kv.empty()) {
      throw ConfigError("run '" + cfg.name + "': unknown key '" + kv.begin()->first + "'");
    }
  }
  return out;
}

std::vector<ExperimentConfig> parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

std::vector<ExperimentConfig> parse_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_config(in);
}

std::string to_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  auto window = [&](const char* key, const std::optional<TimeWindow>& w) {
    if (w) out << key << " = " << w->begin << ", " << w->end << '\n';
  };
  out << '[' << c.name << "]\n";
  out << "experiment = " << experiment_name(c.kind) << '\n';
  out << "ring_size = " << c.ring_size << '\n';
  out << "coins = ";
  for (std::size_t i = 0; i < c.coins.size(); ++i) out << (i ? ", " : "") << c.coins[i].name;
  out << "\nmembers = ";
  for (std::size_t i = 0; i < c.members.size(); ++i) out << (i ? ", " : "") << member_token(c.members[i]);
  out << "\nangles = " << format_double(c.angles.eta) << ", " << format_double(c.angles.kappa) << '\n';
  out << "t_max = " << c.t_max << '\n';
  if (c.stride) out << "stride = " << *c.stride << '\n';
  out << "observables = ";
  for (std::size_t i = 0; i < c.observables.size(); ++i) {
    out << (i ? ", " : "") << observable_name(c.observables[i]);
  }
  out << '\n';
  window("saturation_window", c.saturation_window);
  window("slope_window", c.slope_window);
  window("growth_window", c.growth_window);
  window("late_window", c.late_window);
  if (!c.grid_times.empty()) {
    out << "grid_times = ";
    for (std::size_t i = 0; i < c.grid_times.size(); ++i) out << (i ? ", " : "") << c.grid_times[i];
    out << '\n';
  }
  return out.str();
}

std::vector<ExperimentConfig> preset(std::string_view name) {
  for (auto& cfg : parse_config_text(kPresetText)) {
    if (cfg.name == name) return {cfg};
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& cfg : parse_config_text(kPresetText)) names.push_back(cfg.name);
  return names;
}

const ObservableSeries& MemberResult::find(Observable o) const {
  for (const auto& s : series) {
    if (s.label == o) return s;
  }
  throw InvalidArgument("observable '" + std::string(observable_name(o)) + "' was not recorded");
}

RunResult run_entropy_experiment(const ExperimentConfig& config, int threads) {
  require_kind(config, ExperimentKind::Entropy);
  return run_impl(config, threads);
}

RunResult run_variance_experiment(const ExperimentConfig& config, int threads) {
  require_kind(config, ExperimentKind::Variance);
  return run_impl(config, threads);
}

RunResult run_wigner_experiment(const ExperimentConfig& config, int threads) {
  require_kind(config, ExperimentKind::Wigner);
  return run_impl(config, threads);
}

RunResult run_experiment(const ExperimentConfig& config, int threads) {
  switch (config.kind) {
    case ExperimentKind::Entropy: return run_entropy_experiment(config, threads);
    case ExperimentKind::Variance: return run_variance_experiment(config, threads);
    case ExperimentKind::Wigner: return run_wigner_experiment(config, threads);
  }
  throw ConfigError("unknown experiment kind");
}

// ---------------------------------------------------------------------------

void ensure_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw ConfigError("output directory '" + dir.string() + "' cannot be created");
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f || !(f << "ok") || !f.flush()) {
      throw ConfigError("output directory '" + dir.string() + "' is not writable");
    }
  }
  fs::remove(probe, ec);
}

void write_series_csv(std::ostream& out, const ObservableSeries& series) {
  out << "t,value\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << series.times[i] << ',' << format_value(series.values[i]) << '\n';
  }
}

RunManifest emit_csv(const std::vector<RunResult>& runs, const fs::path& dir, double wall_seconds) {
  ensure_output_dir(dir);
  RunManifest manifest;
  manifest.wall_seconds = wall_seconds;
  auto open = [&](const fs::path& rel) {
    std::ofstream f(dir / rel);
    if (!f) throw ConfigError("cannot write '" + (dir / rel).string() + "'");
    manifest.files.push_back(rel);
    return f;
  };
  for (const auto& run : runs) {
    const fs::path sub = run.config.name;
    ensure_output_dir(dir / sub);
    manifest.config_text.push_back(to_config_text(run.config));
    for (const auto& m : run.members) {
      for (const auto& s : m.series) {
        auto f = open(sub / (m.label() + "_" + std::string(observable_name(s.label)) + ".csv"));
        write_series_csv(f, s);
      }
      for (const auto& g : m.grids) {
        auto f = open(sub / (m.label() + "_wigner_t" + std::to_string(g.time) + ".txt"));
        write_grid(f, g);
      }
    }
    auto f = open(sub / "summary.csv");
    f << "member,coin,saturation,period,slope,growth_exponent,late_distance\n";
    auto opt = [](const std::optional<double>& v) { return v ? format_value(*v) : std::string(); };
    for (const auto& m : run.members) {
      f << m.member.label() << ',' << m.coin << ','
        << (m.saturation ? format_value(m.saturation->level) : "") << ','
        << (m.saturation ? opt(m.saturation->period) : "") << ',' << opt(m.slope) << ','
        << opt(m.growth) << ',' << opt(m.late_distance) << '\n';
    }
  }

  nlohmann::json j;
  j["tool"] = "simulate";
  j["version"] = manifest.tool_version;
  j["wall_seconds"] = manifest.wall_seconds;
  j["configs"] = manifest.config_text;
  auto& files = j["files"] = nlohmann::json::array();
  for (const auto& p : manifest.files) files.push_back(p.generic_string());
  std::ofstream mf(dir / "manifest.json");
  if (!mf) throw ConfigError("cannot write manifest in '" + dir.string() + "'");
  mf << j.dump(2) << '\n';
  return manifest;
}

}  // namespace coinwalk
