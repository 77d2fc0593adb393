#include <charconv>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "corrsim/cli.hpp"
#include "corrsim/error.hpp"
#include "corrsim/stats.hpp"

namespace corrsim::cli {

using nlohmann::json;

namespace {

constexpr double kZLimit = 4.0;

// Runs `body`, mapping library exceptions to the exit-code contract.
template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const UnachievableCorrelationError& e) {
    err << "infeasible: " << e.what() << "\n";
    return exit_fail;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return exit_fail;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_fail;
  }
}

std::string fixed6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string to_csv(const std::vector<SampleBatch>& batches, std::size_t n) {
  std::string s;
  for (std::size_t j = 0; j < n; ++j) {
    if (j) s += ',';
    s += 'x';
    s += std::to_string(j + 1);
  }
  s += '\n';
  char buf[64];
  for (const SampleBatch& b : batches) {
    for (std::size_t r = 0; r < b.count; ++r) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j) s += ',';
        auto res = std::to_chars(buf, buf + sizeof buf, b.at(r, j));
        s.append(buf, res.ptr);
      }
      s += '\n';
    }
  }
  return s;
}

std::vector<std::vector<double>> read_csv(std::istream& in, std::size_t n) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("CSV is empty");
  std::string header;
  for (std::size_t j = 0; j < n; ++j) header += (j ? ",x" : "x") + std::to_string(j + 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw ParseError("CSV header \"" + line + "\" does not match \"" + header + "\"");

  std::vector<std::vector<double>> cols(n);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    for (std::size_t j = 0; j < n; ++j) {
      double v;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc{}) throw ParseError("CSV line " + std::to_string(lineno) + ": bad number");
      p = res.ptr;
      if (j + 1 < n) {
        if (p == end || *p != ',') throw ParseError("CSV line " + std::to_string(lineno) + ": expected ','");
        ++p;
      }
      cols[j].push_back(v);
    }
    if (p != end) throw ParseError("CSV line " + std::to_string(lineno) + ": too many fields");
  }
  if (cols[0].size() < 2) throw ParseError("CSV needs at least two data rows");
  return cols;
}

int cmd_bounds(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::size_t n = cfg.marginals.size();
    if (n < 2) throw ParseError("bounds needs at least two marginals");
    ExtremesCache cache;
    std::ostringstream os;
    os << "i,j,rho_minus,rho_plus,method\n";
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const CorrelationExtremes e = cache.get(cfg.marginals[i], cfg.marginals[j]);
        os << i + 1 << ',' << j + 1 << ',' << fixed6(e.rho_minus) << ',' << fixed6(e.rho_plus) << ','
           << to_string(e.method) << '\n';
      }
    out << os.str();
    return int{exit_ok};
  });
}

int cmd_plan(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SamplingPlan plan = plan_for(cfg);
    const std::size_t n = plan.dim();
    json doc;
    doc["n"] = n;
    json lam = json::array(), rm = json::array(), rp = json::array(), implied = json::array();
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        lam.push_back(plan.lambda(i, j));
        rm.push_back(plan.extremes(i, j).rho_minus);
        rp.push_back(plan.extremes(i, j).rho_plus);
        implied.push_back(plan.implied_correlation(i, j));
      }
    doc["lambda"] = lam;
    doc["rho_minus"] = rm;
    doc["rho_plus"] = rp;
    doc["correlation"] = implied;
    doc["feasible"] = plan.feasible;
    if (plan.recipe) {
      doc["recipe"] = to_string(plan.recipe->kind);
      if (plan.recipe->alpha_interval)
        doc["alpha_interval"] = {plan.recipe->alpha_interval->lo, plan.recipe->alpha_interval->hi};
      if (plan.recipe->alpha) doc["alpha"] = *plan.recipe->alpha;
    } else {
      doc["recipe"] = nullptr;
    }
    doc["diagnostics"] = plan.diagnostics;
    out << doc.dump(2) << '\n';
    if (!plan.feasible) {
      err << plan.diagnostics << '\n';
      return int{exit_fail};
    }
    return int{exit_ok};
  });
}

int cmd_sample(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (cfg.count == 0) throw ParseError("\"count\" must be at least 1");
    const SamplingPlan plan = plan_for(cfg);
    if (!plan.feasible) {
      err << "infeasible: " << plan.diagnostics << '\n';
      return int{exit_fail};
    }
    const auto batches = sample_parallel(plan, cfg.count, cfg.seed, cfg.streams);
    const std::string text = to_csv(batches, plan.dim());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw Error("failed writing CSV output");
    return int{exit_ok};
  });
}

int cmd_verify(const JobConfig& cfg, std::istream& csv, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SamplingPlan plan = plan_for(cfg);
    const std::size_t n = plan.dim();
    const auto cols = read_csv(csv, n);
    const std::size_t rows = cols[0].size();

    std::ostringstream os;
    os << "check,target,estimate,std_error,z\n";
    double worst = 0.0;
    auto row = [&](const std::string& name, const ZCheck& c) {
      os << name << ',' << format_double(c.target) << ',' << format_double(c.estimate) << ','
         << format_double(c.std_error) << ',' << format_double(c.z) << '\n';
      worst = std::max(worst, std::isnan(c.z) ? INFINITY : std::fabs(c.z));
    };
    for (std::size_t j = 0; j < n; ++j) {
      const std::string tag = "x" + std::to_string(j + 1);
      row("mean(" + tag + ")", mean_check(cols[j], plan.marginals[j]));
      row("sd(" + tag + ")", sd_check(cols[j], plan.marginals[j]));
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::string tag = "x" + std::to_string(i + 1) + ",x" + std::to_string(j + 1);
        const ZCheck c = correlation_check(cols[i], cols[j], plan.marginals[i].moments(),
                                           plan.marginals[j].moments(), plan.implied_correlation(i, j));
        row("corr(" + tag + ")", c);
        const MarginalSpec& a = plan.marginals[i];
        const MarginalSpec& b = plan.marginals[j];
        if (a.family() == Family::bernoulli && b.family() == Family::bernoulli && a.params()[0] == 0.5 &&
            b.params()[0] == 0.5) {
          const double target = plan.lambda(i, j);
          if (target > 0.0 && target < 1.0) row("concurrence(" + tag + ")", concurrence_check(cols[i], cols[j], target));
        }
      }
    os << "rows," << rows << "\nmax_abs_z," << format_double(worst) << '\n';
    const bool pass = worst <= kZLimit;
    os << (pass ? "PASS" : "FAIL") << '\n';
    out << os.str();
    return int{pass ? exit_ok : exit_fail};
  });
}

}  // namespace corrsim::cli
