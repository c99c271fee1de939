#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace proxygame {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CensorKind { Aggressive, Conservative, Optimal };
enum class CensorGeography { Omnipresent, Circumscribed };
enum class DistributorKind { GameTheoretic, UniformRandomBaseline };
enum class Ecosystem { Static, Slow, Alive, Popular };

struct CensorStrategy {
  CensorKind kind = CensorKind::Optimal;
  /// Conservative only: stages a learned proxy is kept alive, then the
  /// per-stage blocking probability once that wait has elapsed.
  std::uint32_t wait = 30;
  double p = 0.5;
};

struct SimConfig {
  std::uint64_t seed = 1;

  double world_size = 20000.0;
  double censored_region = 1000.0;
  double circumscribed_region = 100.0;
  double d_min = 1e-3;

  std::uint32_t birth_interval = 365;
  std::uint32_t total_stages = 2000;

  double mu_b = 25.0;
  double mu_s = 5.0;
  double lambda_b = 5.0;
  double lambda_s = 0.2;

  double rho_birth = 0.1;
  double rho_stable = 0.1;

  std::uint32_t k = 3;
  std::uint32_t capacity = 40;

  std::array<double, 5> alphas{1.0, 1.0, 100.0, 5.0, 10.0};
  std::array<double, 3> betas{1.0, 5.0, 5.0};
  std::array<double, 2> omegas{1.0, 100.0};
  double eta = 0.0;
  double nu = 500.0;
  double t_bar = 100.0;

  CensorStrategy censor;
  CensorGeography geography = CensorGeography::Omnipresent;
  DistributorKind distributor = DistributorKind::GameTheoretic;
};

/// Reference parameterization: Slow-world rates, optimal omnipresent censor.
inline SimConfig default_config() { return SimConfig{}; }

inline SimConfig ecosystem(Ecosystem name, std::optional<double> lambda_s_override = std::nullopt) {
  SimConfig cfg = default_config();
  cfg.mu_b = 25.0;
  cfg.lambda_b = 5.0;
  auto ranged = [&](double lo, double hi, double fallback, const char* world) {
    if (!lambda_s_override) return fallback;
    double v = *lambda_s_override;
    if (!(v >= lo && v <= hi)) {
      std::ostringstream os;
      os << "rates.lambda_s: " << v << " outside [" << lo << ", " << hi << "] for the " << world
         << " ecosystem";
      throw ConfigError(os.str());
    }
    return v;
  };
  switch (name) {
    case Ecosystem::Static:
      if (lambda_s_override) throw ConfigError("rates.lambda_s: the Static ecosystem has no override");
      cfg.mu_s = 0.1;
      cfg.lambda_s = 0.0;
      break;
    case Ecosystem::Slow:
      if (lambda_s_override) throw ConfigError("rates.lambda_s: the Slow ecosystem has no override");
      cfg.mu_s = 5.0;
      cfg.lambda_s = 0.2;
      break;
    case Ecosystem::Alive:
      cfg.mu_s = 10.0;
      cfg.lambda_s = ranged(0.5, 7.5, 5.0, "Alive");
      break;
    case Ecosystem::Popular:
      cfg.mu_s = 20.0;
      cfg.lambda_s = ranged(0.5, 10.0, 5.0, "Popular");
      break;
  }
  return cfg;
}

inline std::optional<Ecosystem> parse_ecosystem(std::string_view s) {
  if (s == "static") return Ecosystem::Static;
  if (s == "slow") return Ecosystem::Slow;
  if (s == "alive") return Ecosystem::Alive;
  if (s == "popular") return Ecosystem::Popular;
  return std::nullopt;
}

/// Throws ConfigError naming the offending dotted path.
inline void validate(const SimConfig& c) {
  auto fail = [](const std::string& path, const std::string& why) {
    throw ConfigError(path + ": " + why);
  };
  auto finite = [&](double v, const char* path) {
    if (!std::isfinite(v)) fail(path, "must be finite");
  };
  finite(c.world_size, "world.size");
  finite(c.censored_region, "world.censored_region");
  finite(c.circumscribed_region, "world.circumscribed_region");
  if (!(c.world_size > 0)) fail("world.size", "must be positive");
  if (!(c.censored_region > 0)) fail("world.censored_region", "must be positive");
  if (!(c.circumscribed_region > 0)) fail("world.circumscribed_region", "must be positive");
  if (!(c.circumscribed_region < c.censored_region))
    fail("world.circumscribed_region", "must be smaller than world.censored_region");
  if (!(c.censored_region < c.world_size / 2))
    fail("world.censored_region", "must be smaller than half of world.size");
  if (!(c.d_min > 0 && c.d_min <= 1)) fail("world.d_min", "must lie in (0, 1]");
  if (c.birth_interval == 0) fail("schedule.birth_interval", "must be positive");

  const std::pair<double, const char*> rates[] = {
      {c.mu_b, "rates.mu_b"}, {c.mu_s, "rates.mu_s"}, {c.lambda_b, "rates.lambda_b"}, {c.lambda_s, "rates.lambda_s"}};
  for (auto [v, path] : rates) {
    finite(v, path);
    if (v < 0) fail(path, "must be non-negative");
  }
  const std::pair<double, const char*> probs[] = {
      {c.rho_birth, "adversary.rho_birth"}, {c.rho_stable, "adversary.rho_stable"}, {c.censor.p, "censor.p"}};
  for (auto [v, path] : probs)
    if (!(v >= 0 && v <= 1)) fail(path, "must lie in [0, 1]");

  if (c.k == 0) fail("distributor.k", "must be positive");
  if (c.capacity == 0) fail("distributor.capacity", "must be positive");
  if (!(c.t_bar > 0)) fail("utility.t_bar", "must be positive");
  for (std::size_t i = 0; i < c.alphas.size(); ++i) finite(c.alphas[i], "utility.alpha");
  for (std::size_t i = 0; i < c.betas.size(); ++i) {
    finite(c.betas[i], "utility.beta");
    if (c.betas[i] < 0) fail("utility.beta" + std::to_string(i + 1), "must be non-negative");
  }
  finite(c.omegas[0], "utility.omega1");
  finite(c.omegas[1], "utility.omega2");
  finite(c.eta, "utility.eta");
  finite(c.nu, "utility.nu");
  if (!(c.eta < c.alphas[4]))
    fail("utility.eta", "acceptance threshold must be below the initial utility utility.alpha5");
}

// ---------------------------------------------------------------------------
// Dotted-path field registry. Every SimConfig field is addressable by exactly
// one path; the JSON config file is the nested form of these paths.

namespace detail {

struct Field {
  std::string path;
  bool numeric;
  std::function<nlohmann::json(const SimConfig&)> get;
  std::function<void(SimConfig&, const nlohmann::json&)> set;
};

inline double as_real(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path + ": expected a number");
  return v.get<double>();
}

template <class UInt>
UInt as_uint(const nlohmann::json& v, const std::string& path) {
  if (v.is_number_unsigned()) return static_cast<UInt>(v.get<std::uint64_t>());
  if (v.is_number_integer()) {
    if (v.get<std::int64_t>() < 0) throw ConfigError(path + ": must be non-negative");
    return static_cast<UInt>(v.get<std::int64_t>());
  }
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d < 0 || std::floor(d) != d) throw ConfigError(path + ": expected a non-negative integer");
    return static_cast<UInt>(d);
  }
  throw ConfigError(path + ": expected a non-negative integer");
}

template <class Enum, std::size_t N>
Field enum_field(std::string path, Enum SimConfig::*member,
                 std::array<std::pair<Enum, const char*>, N> names) {
  return Field{
      path, false,
      [member, names](const SimConfig& c) {
        for (auto& [e, n] : names)
          if (c.*member == e) return nlohmann::json(n);
        return nlohmann::json(nullptr);
      },
      [member, names, path](SimConfig& c, const nlohmann::json& v) {
        if (v.is_string()) {
          for (auto& [e, n] : names)
            if (v.get<std::string>() == n) {
              c.*member = e;
              return;
            }
        }
        std::string valid;
        for (auto& [e, n] : names) valid += std::string(valid.empty() ? "" : ", ") + n;
        throw ConfigError(path + ": expected one of " + valid);
      }};
}

inline Field real_field(std::string path, std::function<double&(SimConfig&)> ref) {
  return Field{path, true, [ref](const SimConfig& c) { return nlohmann::json(ref(const_cast<SimConfig&>(c))); },
               [ref, path](SimConfig& c, const nlohmann::json& v) { ref(c) = as_real(v, path); }};
}

template <class UInt>
Field uint_field(std::string path, std::function<UInt&(SimConfig&)> ref) {
  return Field{path, true, [ref](const SimConfig& c) { return nlohmann::json(ref(const_cast<SimConfig&>(c))); },
               [ref, path](SimConfig& c, const nlohmann::json& v) { ref(c) = as_uint<UInt>(v, path); }};
}

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(uint_field<std::uint64_t>("seed", [](SimConfig& c) -> auto& { return c.seed; }));
    f.push_back(real_field("world.size", [](SimConfig& c) -> auto& { return c.world_size; }));
    f.push_back(real_field("world.censored_region", [](SimConfig& c) -> auto& { return c.censored_region; }));
    f.push_back(real_field("world.circumscribed_region",
                           [](SimConfig& c) -> auto& { return c.circumscribed_region; }));
    f.push_back(real_field("world.d_min", [](SimConfig& c) -> auto& { return c.d_min; }));
    f.push_back(uint_field<std::uint32_t>("schedule.birth_interval",
                                          [](SimConfig& c) -> auto& { return c.birth_interval; }));
    f.push_back(uint_field<std::uint32_t>("schedule.total_stages",
                                          [](SimConfig& c) -> auto& { return c.total_stages; }));
    f.push_back(real_field("rates.mu_b", [](SimConfig& c) -> auto& { return c.mu_b; }));
    f.push_back(real_field("rates.mu_s", [](SimConfig& c) -> auto& { return c.mu_s; }));
    f.push_back(real_field("rates.lambda_b", [](SimConfig& c) -> auto& { return c.lambda_b; }));
    f.push_back(real_field("rates.lambda_s", [](SimConfig& c) -> auto& { return c.lambda_s; }));
    f.push_back(real_field("adversary.rho_birth", [](SimConfig& c) -> auto& { return c.rho_birth; }));
    f.push_back(real_field("adversary.rho_stable", [](SimConfig& c) -> auto& { return c.rho_stable; }));
    f.push_back(enum_field<CensorGeography, 2>(
        "adversary.geography", &SimConfig::geography,
        {{{CensorGeography::Omnipresent, "omnipresent"}, {CensorGeography::Circumscribed, "circumscribed"}}}));
    f.push_back(Field{
        "censor.strategy", false,
        [](const SimConfig& c) {
          switch (c.censor.kind) {
            case CensorKind::Aggressive: return nlohmann::json("aggressive");
            case CensorKind::Conservative: return nlohmann::json("conservative");
            case CensorKind::Optimal: break;
          }
          return nlohmann::json("optimal");
        },
        [](SimConfig& c, const nlohmann::json& v) {
          std::string s = v.is_string() ? v.get<std::string>() : "";
          if (s == "aggressive") c.censor.kind = CensorKind::Aggressive;
          else if (s == "conservative") c.censor.kind = CensorKind::Conservative;
          else if (s == "optimal") c.censor.kind = CensorKind::Optimal;
          else throw ConfigError("censor.strategy: expected one of aggressive, conservative, optimal");
        }});
    f.push_back(uint_field<std::uint32_t>("censor.wait", [](SimConfig& c) -> auto& { return c.censor.wait; }));
    f.push_back(real_field("censor.p", [](SimConfig& c) -> auto& { return c.censor.p; }));
    f.push_back(enum_field<DistributorKind, 2>(
        "distributor.strategy", &SimConfig::distributor,
        {{{DistributorKind::GameTheoretic, "game_theoretic"},
          {DistributorKind::UniformRandomBaseline, "uniform_random"}}}));
    f.push_back(uint_field<std::uint32_t>("distributor.k", [](SimConfig& c) -> auto& { return c.k; }));
    f.push_back(uint_field<std::uint32_t>("distributor.capacity", [](SimConfig& c) -> auto& { return c.capacity; }));
    for (std::size_t i = 0; i < 5; ++i)
      f.push_back(real_field("utility.alpha" + std::to_string(i + 1),
                             [i](SimConfig& c) -> auto& { return c.alphas[i]; }));
    for (std::size_t i = 0; i < 3; ++i)
      f.push_back(real_field("utility.beta" + std::to_string(i + 1),
                             [i](SimConfig& c) -> auto& { return c.betas[i]; }));
    f.push_back(real_field("utility.omega1", [](SimConfig& c) -> auto& { return c.omegas[0]; }));
    f.push_back(real_field("utility.omega2", [](SimConfig& c) -> auto& { return c.omegas[1]; }));
    f.push_back(real_field("utility.eta", [](SimConfig& c) -> auto& { return c.eta; }));
    f.push_back(real_field("utility.nu", [](SimConfig& c) -> auto& { return c.nu; }));
    f.push_back(real_field("utility.t_bar", [](SimConfig& c) -> auto& { return c.t_bar; }));
    return f;
  }();
  return table;
}

inline const Field* find_field(std::string_view path) {
  for (const auto& f : fields())
    if (f.path == path) return &f;
  return nullptr;
}

inline void flatten(const nlohmann::json& node, const std::string& prefix,
                    std::vector<std::pair<std::string, nlohmann::json>>& out) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
  } else {
    out.emplace_back(prefix, node);
  }
}

}  // namespace detail

inline std::vector<std::string> field_paths() {
  std::vector<std::string> out;
  for (const auto& f : detail::fields()) out.push_back(f.path);
  return out;
}

inline bool is_numeric_field(std::string_view path) {
  const auto* f = detail::find_field(path);
  return f != nullptr && f->numeric;
}

/// Assigns one field by dotted path. Unknown paths are an error.
inline void set_field(SimConfig& cfg, std::string_view path, const nlohmann::json& value) {
  const auto* f = detail::find_field(path);
  if (f == nullptr) throw ConfigError("unknown configuration key: " + std::string(path));
  f->set(cfg, value);
}

inline nlohmann::json get_field(const SimConfig& cfg, std::string_view path) {
  const auto* f = detail::find_field(path);
  if (f == nullptr) throw ConfigError("unknown configuration key: " + std::string(path));
  return f->get(cfg);
}

/// Parses the right-hand side of a `path=value` override: JSON literal if it
/// parses as one, bare string otherwise.
inline void set_field_from_text(SimConfig& cfg, std::string_view path, const std::string& text) {
  nlohmann::json v = nlohmann::json::parse(text, nullptr, false);
  if (v.is_discarded()) v = text;
  set_field(cfg, path, v);
}

inline nlohmann::json to_json(const SimConfig& cfg) {
  nlohmann::json root = nlohmann::json::object();
  for (const auto& f : detail::fields()) {
    std::string pointer = "/" + f.path;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    root[nlohmann::json::json_pointer(pointer)] = f.get(cfg);
  }
  return root;
}

/// Missing keys keep the values of `base`.
inline SimConfig from_json(const nlohmann::json& doc, SimConfig base = default_config()) {
  if (!doc.is_object()) throw ConfigError("configuration root must be an object");
  std::vector<std::pair<std::string, nlohmann::json>> leaves;
  detail::flatten(doc, "", leaves);
  for (auto& [path, value] : leaves) set_field(base, path, value);
  return base;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path);
  nlohmann::json doc = nlohmann::json::parse(in, nullptr, false, true);
  if (doc.is_discarded()) throw ConfigError("configuration file " + path + " is not valid JSON");
  return from_json(doc);
}

inline std::string dump_config(const SimConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

}  // namespace proxygame
