#include "config.hpp"

#include <cstdio>
#include <set>

#include <json.hpp>

namespace regext::cli {

namespace {

using nlohmann::json;

double number(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing \"" + key + "\"");
  if (!it->is_number()) throw ConfigError(where + ": \"" + key + "\" must be a number");
  return it->get<double>();
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
  }
}

}  // namespace

ParamBundle parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the 1-based index of the offending character; convert to a 0-based offset.
    const std::size_t off = e.byte > 0 ? e.byte - 1 : 0;
    throw ConfigError("config is not valid JSON (byte offset " + std::to_string(off) + "): " + e.what(),
                      off);
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, {"rho", "sigma1", "sigma2", "lambda1", "lambda2", "c", "cost"}, "config");

  ParamBundle b;
  b.rho = number(doc, "rho", "config");
  b.sigma1 = number(doc, "sigma1", "config");
  b.sigma2 = number(doc, "sigma2", "config");
  b.lambda1 = number(doc, "lambda1", "config");
  b.lambda2 = number(doc, "lambda2", "config");
  b.c = number(doc, "c", "config");

  auto cit = doc.find("cost");
  if (cit == doc.end() || !cit->is_object()) throw ConfigError("config: \"cost\" must be an object");
  const json& cost = *cit;
  auto tit = cost.find("type");
  if (tit == cost.end() || !tit->is_string()) throw ConfigError("cost: missing string \"type\"");
  const std::string type = tit->get<std::string>();
  if (type == "exp") {
    reject_unknown(cost, {"type", "gamma"}, "cost");
    b.cost = CostFunction::exponential(number(cost, "gamma", "cost"));
  } else if (type == "quad") {
    reject_unknown(cost, {"type", "alpha", "beta"}, "cost");
    b.cost = CostFunction::quadratic(number(cost, "alpha", "cost"), number(cost, "beta", "cost"));
  } else {
    throw ConfigError("cost: type must be \"exp\" or \"quad\", got \"" + type + "\"");
  }
  return b;
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace regext::cli
