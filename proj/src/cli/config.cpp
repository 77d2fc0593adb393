#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corrsim/cli.hpp"
#include "corrsim/error.hpp"

namespace corrsim::cli {

using nlohmann::json;

namespace {

double number(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ParseError(std::string("marginal is missing \"") + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ParseError(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string("\"") + what + "\" must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) {
    if (!e.is_number()) throw ParseError(std::string("\"") + what + "\" must be an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

std::uint64_t count_field(const json& v, const char* key) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ParseError(std::string("\"") + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

MarginalSpec parse_marginal(const json& m) {
  if (!m.is_object() || !m.contains("family") || !m.at("family").is_string())
    throw ParseError("each marginal needs a \"family\" string");
  const std::string f = m.at("family").get<std::string>();
  if (f == "uniform") return MarginalSpec::uniform(number(m, "a"), number(m, "b"));
  if (f == "exponential") return MarginalSpec::exponential(number(m, "rate"));
  if (f == "normal") return MarginalSpec::normal(number(m, "mean"), number(m, "sd"));
  if (f == "bernoulli") return MarginalSpec::bernoulli(number(m, "p"));
  if (f == "empirical") {
    if (!m.contains("values") || !m.contains("weights")) throw ParseError("empirical needs values and weights");
    return MarginalSpec::empirical(numbers(m.at("values"), "values"), numbers(m.at("weights"), "weights"));
  }
  throw ParseError("unknown marginal family \"" + f + "\"");
}

json marginal_json(const MarginalSpec& m) {
  json j;
  j["family"] = to_string(m.family());
  const auto p = m.params();
  switch (m.family()) {
    case Family::uniform: j["a"] = p[0]; j["b"] = p[1]; break;
    case Family::exponential: j["rate"] = p[0]; break;
    case Family::normal: j["mean"] = p[0]; j["sd"] = p[1]; break;
    case Family::bernoulli: j["p"] = p[0]; break;
    case Family::empirical:
      j["values"] = std::vector<double>(m.values().begin(), m.values().end());
      j["weights"] = std::vector<double>(m.weights().begin(), m.weights().end());
      break;
  }
  return j;
}

}  // namespace

JobConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config must be a JSON object");

  static const char* known[] = {"marginals", "correlation", "concurrence", "count", "seed", "streams", "alpha_policy"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known))
      throw ParseError("unknown config key \"" + key + "\"");
  }

  JobConfig cfg;
  if (!doc.contains("marginals") || !doc.at("marginals").is_array()) throw ParseError("\"marginals\" array required");
  for (const json& m : doc.at("marginals")) cfg.marginals.push_back(parse_marginal(m));
  if (cfg.marginals.size() < 2) throw ParseError("at least two marginals required");

  const bool has_corr = doc.contains("correlation");
  const bool has_conc = doc.contains("concurrence");
  if (has_corr == has_conc) throw ParseError("exactly one of \"correlation\" and \"concurrence\" is required");
  const std::size_t n = cfg.marginals.size();
  const std::size_t expected = n * (n - 1) / 2;
  auto tri = [&](const char* key) {
    std::vector<double> v = numbers(doc.at(key), key);
    if (v.size() != expected) {
      std::ostringstream os;
      os << "\"" << key << "\" has " << v.size() << " entries; " << n << " marginals need " << expected
         << " (strict lower triangle, row-major)";
      throw ParseError(os.str());
    }
    return v;
  };
  if (has_corr) cfg.correlation = tri("correlation");
  else cfg.concurrence = tri("concurrence");

  if (doc.contains("count")) cfg.count = count_field(doc.at("count"), "count");
  if (doc.contains("seed")) cfg.seed = count_field(doc.at("seed"), "seed");
  if (doc.contains("streams")) cfg.streams = count_field(doc.at("streams"), "streams");
  if (cfg.streams == 0) throw ParseError("\"streams\" must be at least 1");

  if (doc.contains("alpha_policy")) {
    const json& a = doc.at("alpha_policy");
    if (a.is_string() && a.get<std::string>() == "midpoint") {
      cfg.alpha_policy = AlphaPolicy::midpoint();
    } else if (a.is_object() && a.size() == 1 && a.contains("explicit") && a.at("explicit").is_number()) {
      cfg.alpha_policy = AlphaPolicy::explicit_value(a.at("explicit").get<double>());
    } else {
      throw ParseError("\"alpha_policy\" must be \"midpoint\" or {\"explicit\": value}");
    }
  }
  return cfg;
}

JobConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const JobConfig& cfg) {
  json doc;
  json ms = json::array();
  for (const MarginalSpec& m : cfg.marginals) ms.push_back(marginal_json(m));
  doc["marginals"] = ms;
  if (cfg.correlation) doc["correlation"] = *cfg.correlation;
  if (cfg.concurrence) doc["concurrence"] = *cfg.concurrence;
  doc["count"] = cfg.count;
  doc["seed"] = cfg.seed;
  doc["streams"] = cfg.streams;
  if (cfg.alpha_policy.kind == AlphaPolicy::Kind::midpoint) doc["alpha_policy"] = "midpoint";
  else doc["alpha_policy"] = json{{"explicit", cfg.alpha_policy.value}};
  return doc.dump(2) + "\n";
}

SamplingPlan plan_for(const JobConfig& cfg, const PlanOptions& base) {
  PlanOptions opts = base;
  opts.alpha = cfg.alpha_policy;
  const std::size_t n = cfg.marginals.size();
  if (cfg.correlation) {
    return build_plan(cfg.marginals, CorrelationMatrix::from_lower(n, *cfg.correlation), opts);
  }
  return build_plan_from_convexity(cfg.marginals, ConvexityMatrix::from_lower(n, *cfg.concurrence), opts);
}

}  // namespace corrsim::cli
