#include "equizero/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "equizero/errors.hpp"

namespace equizero {

std::int64_t ConfigValue::as_int(const std::string& context) const {
  if (type != Type::Integer) throw ValidationError(context + ": expected an integer");
  return int_v;
}

double ConfigValue::as_real(const std::string& context) const {
  if (type == Type::Integer) return double(int_v);
  if (type != Type::Real) throw ValidationError(context + ": expected a number");
  return real_v;
}

bool ConfigValue::as_bool(const std::string& context) const {
  if (type != Type::Boolean) throw ValidationError(context + ": expected true/false");
  return bool_v;
}

const std::string& ConfigValue::as_string(const std::string& context) const {
  if (type != Type::String) throw ValidationError(context + ": expected a string");
  return str_v;
}

bool ConfigValue::has(const std::string& key) const { return table_v.count(key) > 0; }

const ConfigValue& ConfigValue::at(const std::string& key) const {
  const auto it = table_v.find(key);
  if (it == table_v.end()) throw ValidationError("missing required key '" + key + "'");
  return it->second;
}

const ConfigValue* ConfigValue::find(const std::string& key) const {
  const auto it = table_v.find(key);
  return it == table_v.end() ? nullptr : &it->second;
}

nlohmann::json ConfigValue::to_json() const {
  switch (type) {
    case Type::Integer: return int_v;
    case Type::Real: return real_v;
    case Type::Boolean: return bool_v;
    case Type::String: return str_v;
    case Type::Array: {
      nlohmann::json a = nlohmann::json::array();
      for (const auto& v : array_v) a.push_back(v.to_json());
      return a;
    }
    case Type::Table: {
      nlohmann::json t = nlohmann::json::object();
      for (const auto& [k, v] : table_v) t[k] = v.to_json();
      return t;
    }
  }
  return nullptr;
}

// ---- parser -----------------------------------------------------------------

namespace {

struct Lexer {
  const std::string& text;
  std::size_t pos = 0;
  int line = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  void skip_space() {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (c == '\n') {
        ++line;
        ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_space();
    return pos >= text.size();
  }

  char peek() {
    skip_space();
    return pos < text.size() ? text[pos] : '\0';
  }

  void expect(char c) {
    if (peek() != c)
      throw ValidationError("config parse error at line " + std::to_string(line) +
                            ": expected '" + std::string(1, c) + "'");
    ++pos;
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  std::string ident() {
    skip_space();
    std::size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
            text[pos] == '-'))
      ++pos;
    if (start == pos)
      throw ValidationError("config parse error at line " + std::to_string(line) +
                            ": expected an identifier");
    return text.substr(start, pos - start);
  }
};

ConfigValue parse_value(Lexer& lex);

ConfigValue parse_table_body(Lexer& lex, bool braced) {
  ConfigValue table;
  table.type = ConfigValue::Type::Table;
  for (;;) {
    if (braced && lex.accept('}')) return table;
    if (!braced && lex.eof()) return table;
    const std::string key = lex.ident();
    lex.expect('=');
    table.table_v[key] = parse_value(lex);
    if (braced) {
      if (lex.accept(',')) continue;
      lex.expect('}');
      return table;
    }
  }
}

ConfigValue parse_value(Lexer& lex) {
  const char c = lex.peek();
  ConfigValue v;
  if (c == '{') {
    lex.expect('{');
    return parse_table_body(lex, true);
  }
  if (c == '[') {
    lex.expect('[');
    v.type = ConfigValue::Type::Array;
    if (lex.accept(']')) return v;
    for (;;) {
      v.array_v.push_back(parse_value(lex));
      if (lex.accept(',')) {
        if (lex.accept(']')) return v;  // trailing comma
        continue;
      }
      lex.expect(']');
      return v;
    }
  }
  if (c == '"') {
    ++lex.pos;
    std::string s;
    while (lex.pos < lex.text.size() && lex.text[lex.pos] != '"') {
      if (lex.text[lex.pos] == '\\' && lex.pos + 1 < lex.text.size()) ++lex.pos;
      s += lex.text[lex.pos++];
    }
    if (lex.pos >= lex.text.size())
      throw ValidationError("config parse error: unterminated string");
    ++lex.pos;
    v.type = ConfigValue::Type::String;
    v.str_v = std::move(s);
    return v;
  }
  if (std::isalpha(static_cast<unsigned char>(c))) {
    const std::string word = lex.ident();
    if (word == "true" || word == "false") {
      v.type = ConfigValue::Type::Boolean;
      v.bool_v = (word == "true");
      return v;
    }
    throw ValidationError("config parse error at line " + std::to_string(lex.line) +
                          ": unexpected word '" + word + "'");
  }
  // number
  std::size_t start = lex.pos;
  bool real = false;
  while (lex.pos < lex.text.size()) {
    const char d = lex.text[lex.pos];
    if (std::isdigit(static_cast<unsigned char>(d)) || d == '+' || d == '-') {
      ++lex.pos;
    } else if (d == '.' || d == 'e' || d == 'E') {
      real = true;
      ++lex.pos;
    } else {
      break;
    }
  }
  const std::string num = lex.text.substr(start, lex.pos - start);
  if (num.empty())
    throw ValidationError("config parse error at line " + std::to_string(lex.line) +
                          ": expected a value");
  try {
    std::size_t consumed = 0;
    if (real) {
      v.type = ConfigValue::Type::Real;
      v.real_v = std::stod(num, &consumed);
    } else {
      v.type = ConfigValue::Type::Integer;
      v.int_v = std::stoll(num, &consumed);
    }
    if (consumed != num.size()) throw std::invalid_argument(num);
  } catch (const std::exception&) {
    throw ValidationError("config parse error at line " + std::to_string(lex.line) +
                          ": malformed number '" + num + "'");
  }
  return v;
}

}  // namespace

ConfigValue parse_config(const std::string& text) {
  Lexer lex(text);
  return parse_table_body(lex, false);
}

ConfigValue parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

DomainModel domain_from_config(const ConfigValue& block) {
  const std::string kind = block.at("kind").as_string("domain.kind");
  const int m = block.has("m") ? int(block.at("m").as_int("domain.m")) : 1;
  if (kind == "polydisk") return DomainModel::polydisk(m);
  if (kind == "ball") return DomainModel::ball(m);
  // keep a declared m != 1 so validate() can report the mismatch
  if (kind == "circle") {
    DomainModel d = DomainModel::unit_circle();
    d.m = m;
    return d;
  }
  if (kind == "interval") {
    DomainModel d = DomainModel::interval();
    d.m = m;
    return d;
  }
  throw ValidationError("domain.kind: unknown kind '" + kind + "'");
}

RegionSpec region_from_config(const ConfigValue& block) {
  const std::string kind = block.at("kind").as_string("region.kind");
  if (kind == "annulus")
    return RegionSpec::annulus(block.at("r_lo").as_real("region.r_lo"),
                               block.at("r_hi").as_real("region.r_hi"));
  if (kind == "sector") {
    const int coord =
        block.has("coordinate") ? int(block.at("coordinate").as_int("region.coordinate")) - 1 : 0;
    return RegionSpec::sector(block.at("theta_lo").as_real("region.theta_lo"),
                              block.at("theta_hi").as_real("region.theta_hi"), coord);
  }
  if (kind == "hemisphere") {
    const int coord =
        block.has("coordinate") ? int(block.at("coordinate").as_int("region.coordinate")) - 1 : 0;
    const std::string part =
        block.has("part") ? block.at("part").as_string("region.part") : "re";
    const int sign = block.has("sign") ? int(block.at("sign").as_int("region.sign")) : 1;
    return RegionSpec::hemisphere(coord, part == "im", sign);
  }
  if (kind == "subinterval_angle")
    return RegionSpec::subinterval_angle(block.at("theta_lo").as_real("region.theta_lo"),
                                         block.at("theta_hi").as_real("region.theta_hi"));
  if (kind == "everything") return RegionSpec::everything();
  throw ValidationError("region.kind: unknown kind '" + kind + "'");
}

namespace {

ConfigValue make_string(const std::string& s) {
  ConfigValue v;
  v.type = ConfigValue::Type::String;
  v.str_v = s;
  return v;
}

ConfigValue make_int(std::int64_t i) {
  ConfigValue v;
  v.type = ConfigValue::Type::Integer;
  v.int_v = i;
  return v;
}

ConfigValue make_real(double x) {
  ConfigValue v;
  v.type = ConfigValue::Type::Real;
  v.real_v = x;
  return v;
}

}  // namespace

ConfigValue domain_to_config(const DomainModel& model) {
  ConfigValue block;
  block.table_v["kind"] = make_string(domain_kind_name(model.kind));
  block.table_v["m"] = make_int(model.m);
  return block;
}

ConfigValue region_to_config(const RegionSpec& region) {
  ConfigValue block;
  block.table_v["kind"] = make_string(region.name());
  switch (region.kind) {
    case RegionSpec::Kind::Annulus:
      block.table_v["r_lo"] = make_real(region.lo);
      block.table_v["r_hi"] = make_real(region.hi);
      break;
    case RegionSpec::Kind::Sector:
      block.table_v["theta_lo"] = make_real(region.lo);
      block.table_v["theta_hi"] = make_real(region.hi);
      block.table_v["coordinate"] = make_int(region.coordinate + 1);
      break;
    case RegionSpec::Kind::Hemisphere:
      block.table_v["coordinate"] = make_int(region.coordinate + 1);
      block.table_v["part"] = make_string(region.imaginary_part ? "im" : "re");
      block.table_v["sign"] = make_int(region.sign);
      break;
    case RegionSpec::Kind::SubintervalAngle:
      block.table_v["theta_lo"] = make_real(region.lo);
      block.table_v["theta_hi"] = make_real(region.hi);
      break;
  }
  return block;
}

std::string experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::Converge: return "converge";
    case ExperimentKind::Sandwich: return "sandwich";
    case ExperimentKind::Zeros: return "zeros";
    case ExperimentKind::Density: return "density";
    case ExperimentKind::Scaling: return "scaling";
    case ExperimentKind::Bm: return "bm";
    case ExperimentKind::SuFlat: return "su-flat";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from_value(const ConfigValue& root) {
  ExperimentConfig cfg;
  cfg.raw = root;
  const std::string name = root.at("experiment").as_string("experiment");
  if (name == "converge") cfg.experiment = ExperimentKind::Converge;
  else if (name == "sandwich") cfg.experiment = ExperimentKind::Sandwich;
  else if (name == "zeros") cfg.experiment = ExperimentKind::Zeros;
  else if (name == "density") cfg.experiment = ExperimentKind::Density;
  else if (name == "scaling") cfg.experiment = ExperimentKind::Scaling;
  else if (name == "bm") cfg.experiment = ExperimentKind::Bm;
  else if (name == "su-flat") cfg.experiment = ExperimentKind::SuFlat;
  else throw ValidationError("experiment: unknown experiment '" + name + "'");

  if (root.has("domain")) cfg.domain = domain_from_config(root.at("domain"));
  if (root.has("region")) cfg.region = region_from_config(root.at("region"));

  if (const ConfigValue* n = root.find("N")) {
    if (n->type == ConfigValue::Type::Array) {
      for (const auto& v : n->array_v) cfg.N_list.push_back(int(v.as_int("N[]")));
    } else {
      cfg.N_list.push_back(int(n->as_int("N")));
    }
  }
  cfg.m = cfg.domain ? cfg.domain->m
                     : (root.has("m") ? int(root.at("m").as_int("m")) : 1);
  if (root.has("m") && cfg.domain && int(root.at("m").as_int("m")) != cfg.domain->m)
    throw ValidationError("m: disagrees with domain.m");

  if (root.has("seed")) {
    cfg.seed = std::uint64_t(root.at("seed").as_int("seed"));
    cfg.seed_present = true;
  }
  if (root.has("trials")) cfg.trials = int(root.at("trials").as_int("trials"));
  if (root.has("points")) cfg.points = int(root.at("points").as_int("points"));
  if (root.has("radius")) cfg.radius = root.at("radius").as_real("radius");
  if (root.has("epsilon")) cfg.epsilon = root.at("epsilon").as_real("epsilon");
  if (root.has("sup_resolution"))
    cfg.sup_resolution = int(root.at("sup_resolution").as_int("sup_resolution"));
  if (root.has("k")) cfg.k = int(root.at("k").as_int("k"));
  if (root.has("step")) cfg.step = root.at("step").as_real("step");
  if (root.has("u_max")) cfg.u_max = root.at("u_max").as_real("u_max");
  if (root.has("u_points")) cfg.u_points = int(root.at("u_points").as_int("u_points"));
  if (root.has("threads")) cfg.threads = int(root.at("threads").as_int("threads"));
  if (root.has("output")) cfg.output_dir = root.at("output").as_string("output");

  if (const ConfigValue* grid = root.find("grid")) {
    if (const ConfigValue* radii = grid->find("radii"))
      for (const auto& v : radii->array_v) cfg.radii.push_back(v.as_real("grid.radii[]"));
    if (grid->has("angles")) cfg.angles = int(grid->at("angles").as_int("grid.angles"));
    if (grid->has("r_lo")) cfg.r_lo = grid->at("r_lo").as_real("grid.r_lo");
    if (grid->has("r_hi")) cfg.r_hi = grid->at("r_hi").as_real("grid.r_hi");
    if (grid->has("r_points")) cfg.r_points = int(grid->at("r_points").as_int("grid.r_points"));
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::filesystem::path& path) {
  return from_value(parse_config_file(path));
}

namespace {

int kernel_degree_cap(int m) { return m <= 1 ? 500 : (m == 2 ? 200 : 60); }
int gram_degree_cap(int m) { return m <= 1 ? 60 : (m == 2 ? 25 : 15); }

}  // namespace

std::vector<Violation> validate(const ExperimentConfig& cfg) {
  std::vector<Violation> out;
  const auto need = [&](bool ok, const std::string& field, const std::string& msg) {
    if (!ok) out.push_back({field, msg});
  };

  need(cfg.seed_present, "seed", "seed is required; runs never draw entropy defaults");
  need(!cfg.N_list.empty(), "N", "at least one degree N is required");
  for (int N : cfg.N_list) need(N >= 1, "N", "degrees must be >= 1");
  need(cfg.m >= 1 && cfg.m <= 3, "m", "dimension cap: 1 <= m <= 3");

  const bool needs_domain = cfg.experiment != ExperimentKind::Scaling &&
                            cfg.experiment != ExperimentKind::SuFlat;
  if (needs_domain) {
    need(cfg.domain.has_value(), "domain", "this experiment requires a domain block");
    if (cfg.domain) {
      const DomainKind k = cfg.domain->kind;
      if ((k == DomainKind::UnitCircle || k == DomainKind::Interval) && cfg.domain->m != 1)
        out.push_back({"domain", "kind/dimension mismatch: this kind requires m = 1"});
    }
  }

  const int cap = cfg.experiment == ExperimentKind::Bm ? gram_degree_cap(cfg.m)
                                                       : kernel_degree_cap(cfg.m);
  const char* cap_name = cfg.experiment == ExperimentKind::Bm
                             ? "Gram-factorization degree cap"
                             : "kernel-evaluation degree cap";
  for (int N : cfg.N_list)
    if (N > cap)
      out.push_back({"N", std::string(cap_name) + " at m = " + std::to_string(cfg.m) +
                              " is " + std::to_string(cap) + "; got N = " + std::to_string(N)});

  switch (cfg.experiment) {
    case ExperimentKind::Zeros:
      need(cfg.m == 1, "m", "zeros experiment extracts roots; m = 1 only");
      need(cfg.trials >= 1, "trials", "trials >= 1 required");
      need(cfg.region.has_value(), "region", "zeros experiment requires a region");
      break;
    case ExperimentKind::Bm:
      need(cfg.trials >= 1, "trials", "trials >= 1 required");
      need(cfg.epsilon > 0.0, "epsilon", "epsilon > 0 required");
      break;
    case ExperimentKind::SuFlat:
      need(cfg.m <= 2, "m", "su-flat identity check runs at m <= 2");
      need(cfg.points >= 1, "points", "points >= 1 required");
      break;
    case ExperimentKind::Sandwich:
      need(cfg.points >= 1, "points", "points >= 1 required");
      break;
    case ExperimentKind::Scaling:
      need(cfg.u_points >= 2, "u_points", "u_points >= 2 required");
      need(cfg.u_max > 0.0, "u_max", "u_max > 0 required");
      break;
    case ExperimentKind::Density:
      if (cfg.k != 0) need(cfg.k >= 1 && cfg.k <= cfg.m, "k", "codimension 1 <= k <= m");
      break;
    case ExperimentKind::Converge:
      break;
  }

  if (cfg.region && cfg.domain) {
    try {
      equilibrium_mass(*cfg.domain, *cfg.region);
    } catch (const Error& e) {
      out.push_back({"region", e.what()});
    }
  }
  need(!cfg.output_dir.empty(), "output", "output directory is required");
  need(cfg.threads >= 0, "threads", "threads must be >= 0 (0 = auto)");
  return out;
}

}  // namespace equizero
