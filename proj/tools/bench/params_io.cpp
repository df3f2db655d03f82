#include "params_io.hpp"

#include <fstream>
#include <sstream>

#include "svj/error.hpp"

namespace svj::bench {

namespace {

using nlohmann::json;

double number(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("params: missing key '") + key + "'");
  if (!it->is_number()) throw ParseError(std::string("params: key '") + key + "' is not a number");
  return it->get<double>();
}

std::optional<double> optional_number(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return number(obj, key);
}

JumpLaw parse_jump(const json& j) {
  if (!j.is_object()) throw ParseError("params: 'jump' must be an object");
  const auto type_it = j.find("type");
  if (type_it == j.end() || !type_it->is_string()) {
    throw ParseError("params: jump.type must be a string");
  }
  const std::string type = type_it->get<std::string>();
  if (type == "none") return JumpLaw::none();
  JumpLaw law;
  law.intensity = number(j, "lambda");
  if (type == "lognormal") {
    law.shape = LogNormalJumps{number(j, "mu_j"), number(j, "sigma_j")};
  } else if (type == "kou") {
    law.shape = KouJumps{number(j, "p"), number(j, "eta1"), number(j, "eta2")};
  } else if (type == "loguniform") {
    law.shape = LogUniformJumps{number(j, "a"), number(j, "b")};
  } else {
    throw ParseError("params: unknown jump.type '" + type + "'");
  }
  return law;
}

json jump_json(const JumpLaw& law) {
  if (law.intensity == 0.0 && std::holds_alternative<LogNormalJumps>(law.shape)) {
    const auto& ln = std::get<LogNormalJumps>(law.shape);
    if (ln.mu_j == 0.0 && ln.sigma_j == 0.0) return {{"type", "none"}};
  }
  json out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LogNormalJumps>) {
          out = {{"type", "lognormal"}, {"mu_j", s.mu_j}, {"sigma_j", s.sigma_j}};
        } else if constexpr (std::is_same_v<T, KouJumps>) {
          out = {{"type", "kou"}, {"p", s.p}, {"eta1", s.eta1}, {"eta2", s.eta2}};
        } else {
          out = {{"type", "loguniform"}, {"a", s.a}, {"b", s.b}};
        }
      },
      law.shape);
  out["lambda"] = law.intensity;
  return out;
}

}  // namespace

ParamsFile parse_params(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("params: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("params: top level must be an object");

  ParamsFile p;
  p.s0 = optional_number(j, "s0").value_or(100.0);
  p.model.r = number(j, "r");
  auto& h = p.model.heston;
  h.sigma0_sq = number(j, "sigma0_sq");
  h.kappa = number(j, "kappa");
  h.theta = number(j, "theta");
  if (auto nu = optional_number(j, "nu")) {
    h.nu = *nu;
    p.has_nu = true;
  }
  if (auto rho = optional_number(j, "rho")) {
    h.rho = *rho;
    p.has_rho = true;
  }
  p.model.jumps = j.contains("jump") ? parse_jump(j.at("jump")) : JumpLaw::none();

  if (!(p.s0 > 0.0)) throw ParseError("params: s0 must be positive");
  try {
    validate(p.model);
  } catch (const DomainError& e) {
    throw ParseError(std::string("params: ") + e.what());
  }
  return p;
}

ParamsFile load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("params: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_params(ss.str());
}

void apply_overrides(ParamsFile& p, std::optional<double> rho, std::optional<double> nu) {
  if (rho) {
    p.model.heston.rho = *rho;
    p.has_rho = true;
  }
  if (nu) {
    p.model.heston.nu = *nu;
    p.has_nu = true;
  }
  if (!p.has_rho) throw ParseError("params: 'rho' missing; pass --rho");
  if (!p.has_nu) throw ParseError("params: 'nu' missing; pass --nu");
  try {
    validate(p.model);
  } catch (const DomainError& e) {
    throw ParseError(std::string("params: ") + e.what());
  }
}

nlohmann::json to_json(const ParamsFile& p) {
  const auto& h = p.model.heston;
  json out = {{"s0", p.s0},          {"r", p.model.r},       {"sigma0_sq", h.sigma0_sq},
              {"kappa", h.kappa},    {"theta", h.theta}};
  if (p.has_nu) out["nu"] = h.nu;
  if (p.has_rho) out["rho"] = h.rho;
  out["jump"] = jump_json(p.model.jumps);
  return out;
}

}  // namespace svj::bench
