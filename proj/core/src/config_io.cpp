#include "qtwist/config_io.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "qtwist/error.hpp"

namespace qtwist {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream is{std::string(s)};
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

template <class T>
T parse_int(std::string_view s, const std::string& where) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ConfigError(where + ": expected an integer, got '" + std::string(s) + "'");
  return v;
}

double parse_real(std::string_view s, const std::string& where) {
  std::string str(trim(s));
  try {
    std::size_t used = 0;
    double v = std::stod(str, &used);
    if (used != str.size()) throw std::invalid_argument(str);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a real number, got '" + str + "'");
  }
}

Kodaira parse_kodaira(std::string_view s, const std::string& where) {
  if (s == "split" || s == "s") return Kodaira::split;
  if (s == "nonsplit" || s == "ns") return Kodaira::nonsplit;
  if (s == "additive" || s == "add" || s == "a") return Kodaira::additive;
  throw ConfigError(where + ": unknown reduction type '" + std::string(s) + "' (split|nonsplit|additive)");
}

LocalData parse_local(const std::vector<std::string>& tok, std::size_t first, const std::string& where) {
  if (tok.size() != first + 4) throw ConfigError(where + ": local data needs 'p kodaira c ordDelta'");
  LocalData l;
  l.p = parse_int<std::uint64_t>(tok[first], where);
  l.kind = parse_kodaira(tok[first + 1], where);
  l.tamagawa = parse_int<int>(tok[first + 2], where);
  l.ord_delta = parse_int<int>(tok[first + 3], where);
  return l;
}

}  // namespace

EtaQuotientSpec parse_eta_spec(std::string_view text) {
  EtaQuotientSpec spec;
  std::string s(trim(text));
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string_view item = trim(std::string_view(s).substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (item.empty()) throw ConfigError("eta spec: empty factor in '" + s + "'");
    std::size_t colon = item.find(':');
    EtaFactor f;
    if (colon == std::string_view::npos) {
      f.scale = parse_int<int>(item, "eta spec");
      f.exponent = 1;
    } else {
      f.scale = parse_int<int>(item.substr(0, colon), "eta spec");
      f.exponent = parse_int<int>(item.substr(colon + 1), "eta spec");
    }
    if (f.scale < 1) throw ConfigError("eta spec: scale must be positive");
    if (f.exponent == 0) throw ConfigError("eta spec: exponent must be nonzero");
    spec.factors.push_back(f);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return spec;
}

std::string format_eta_spec(const EtaQuotientSpec& spec) {
  std::string out;
  for (const auto& f : spec.factors) {
    if (!out.empty()) out += ',';
    out += std::to_string(f.scale) + ":" + std::to_string(f.exponent);
  }
  return out;
}

CurveConfig parse_curve_config(std::string_view text, std::string_view source) {
  CurveConfig cfg;
  bool have[5] = {false, false, false, false, false};
  bool have_n = false;
  bool have_sign = false;
  std::istringstream is{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    const std::string where = std::string(source) + ":" + std::to_string(lineno);
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    std::size_t key_len = 0;
    while (key_len < line.size() && (std::isalnum(static_cast<unsigned char>(line[key_len])) || line[key_len] == '_'))
      ++key_len;
    std::string_view rest = trim(line.substr(key_len));
    if (!rest.empty() && (rest.front() == '=' || rest.front() == ':')) rest = trim(rest.substr(1));
    std::vector<std::string> tok{std::string(line.substr(0, key_len))};
    for (auto& t : split_ws(rest)) tok.push_back(std::move(t));
    if (tok[0].empty()) throw ConfigError(where + ": cannot parse '" + std::string(line) + "'");
    const std::string& key = tok[0];

    if (!key.empty() && std::isdigit(static_cast<unsigned char>(key[0]))) {
      cfg.local.push_back(parse_local(tok, 0, where));
      continue;
    }
    if (key == "local") {
      cfg.local.push_back(parse_local(tok, 1, where));
      continue;
    }
    if (tok.size() < 2) throw ConfigError(where + ": key '" + key + "' has no value");
    std::string value = tok[1];
    for (std::size_t i = 2; i < tok.size(); ++i) value += " " + tok[i];

    if (key == "label") {
      cfg.label = value;
    } else if (key.size() == 2 && key[0] == 'a' && (key[1] == '1' || key[1] == '2' || key[1] == '3' ||
                                                     key[1] == '4' || key[1] == '6')) {
      int idx = key[1] == '6' ? 4 : key[1] - '1';
      cfg.a[idx] = parse_int<std::int64_t>(value, where);
      have[idx] = true;
    } else if (key == "a" || key == "ainvs") {
      std::string v = value;
      for (char& c : v) {
        if (c == '[' || c == ']' || c == ',') c = ' ';
      }
      auto parts = split_ws(v);
      if (parts.size() != 5) throw ConfigError(where + ": expected five a-invariants");
      for (int i = 0; i < 5; ++i) {
        cfg.a[i] = parse_int<std::int64_t>(parts[i], where);
        have[i] = true;
      }
    } else if (key == "N" || key == "conductor") {
      cfg.conductor = parse_int<std::uint64_t>(value, where);
      have_n = true;
    } else if (key == "sign" || key == "epsilon") {
      cfg.sign = parse_int<int>(value, where);
      have_sign = true;
    } else if (key == "torsion") {
      cfg.torsion = parse_int<int>(value, where);
    } else if (key == "omega") {
      cfg.omega = parse_real(value, where);
    } else if (key == "omega_vol") {
      cfg.omega_vol = parse_real(value, where);
    } else if (key == "eta") {
      try {
        cfg.eta = parse_eta_spec(value);
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  for (int i = 0; i < 5; ++i) {
    if (!have[i]) {
      static const char* names[] = {"a1", "a2", "a3", "a4", "a6"};
      throw ConfigError(std::string(source) + ": missing " + names[i]);
    }
  }
  if (!have_n) throw ConfigError(std::string(source) + ": missing conductor N");
  if (!have_sign) throw ConfigError(std::string(source) + ": missing sign");
  validate(cfg);
  return cfg;
}

CurveConfig load_curve_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open curve configuration '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_curve_config(buf.str(), path.string());
}

std::string format_curve_config(const CurveConfig& cfg) {
  std::ostringstream os;
  os << "label " << cfg.label << "\n";
  static const char* names[] = {"a1", "a2", "a3", "a4", "a6"};
  for (int i = 0; i < 5; ++i) os << names[i] << " " << cfg.a[i] << "\n";
  os << "N " << cfg.conductor << "\n";
  os << "sign " << (cfg.sign > 0 ? "+1" : "-1") << "\n";
  os << "torsion " << cfg.torsion << "\n";
  char buf[64];
  if (cfg.omega) {
    std::snprintf(buf, sizeof buf, "%.17g", *cfg.omega);
    os << "omega " << buf << "\n";
  }
  if (cfg.omega_vol) {
    std::snprintf(buf, sizeof buf, "%.17g", *cfg.omega_vol);
    os << "omega_vol " << buf << "\n";
  }
  for (const auto& l : cfg.local)
    os << l.p << " " << to_string(l.kind) << " " << l.tamagawa << " " << l.ord_delta << "\n";
  if (cfg.eta) os << "eta " << format_eta_spec(*cfg.eta) << "\n";
  return os.str();
}

std::string digest_hex(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qtwist
