#include "entcheck/commands.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <sstream>

namespace entcheck {

namespace {

using json = nlohmann::ordered_json;

json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

json optional_number(const std::optional<double>& v) {
  return v ? number(*v) : json(nullptr);
}

json equality_json(const EqualityReport& r) {
  return {{"lhs", number(r.lhs)},
          {"rhs", number(r.rhs)},
          {"residual", number(r.residual)},
          {"ratio", optional_number(r.ratio)},
          {"violated", r.violated}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string{};
}

std::string choice_str(const SettingChoice& c) {
  std::string s;
  for (int v : c) s += std::to_string(v);
  return s;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// --- reproduce-all ---------------------------------------------------------

std::string to_json(const ClaimBundle& bundle) {
  json claims = json::array();
  for (const auto& c : bundle.claims) {
    claims.push_back({{"id", c.id},
                      {"paper_anchor", c.paper_anchor},
                      {"expected", number(c.expected)},
                      {"computed", number(c.computed)},
                      {"abs_diff", number(c.abs_diff)},
                      {"tolerance", number(c.tolerance)},
                      {"pass", c.pass}});
  }
  return dump({{"command", "reproduce-all"},
               {"cutoff", bundle.cutoff},
               {"all_pass", bundle.all_pass},
               {"claims", claims}});
}

std::string to_csv(const ClaimBundle& bundle) {
  std::ostringstream os;
  os << "id,paper_anchor,expected,computed,abs_diff,tolerance,pass\n";
  for (const auto& c : bundle.claims) {
    os << csv_field(c.id) << ',' << csv_field(c.paper_anchor) << ',' << format_double(c.expected)
       << ',' << format_double(c.computed) << ',' << format_double(c.abs_diff) << ','
       << format_double(c.tolerance) << ',' << (c.pass ? "true" : "false") << '\n';
  }
  return os.str();
}

// --- equality --------------------------------------------------------------

std::string to_json(const EqualityReport& report) {
  json j = equality_json(report);
  j["command"] = "equality";
  return dump(j);
}

std::string to_csv(const EqualityReport& r) {
  std::ostringstream os;
  os << "lhs,rhs,residual,ratio,violated\n"
     << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.residual)
     << ',' << csv_optional(r.ratio) << ',' << (r.violated ? "true" : "false") << '\n';
  return os.str();
}

// --- sweep -----------------------------------------------------------------

std::string to_json(const SweepTable& table) {
  json rows = json::array();
  for (const auto& row : table.rows) {
    json j = equality_json(row.report);
    j["value"] = number(row.value);
    rows.push_back(std::move(j));
  }
  return dump({{"command", "sweep"},
               {"param", table.param},
               {"system", table.system},
               {"rows", rows}});
}

std::string to_csv(const SweepTable& table) {
  std::ostringstream os;
  os << table.param << ",lhs,rhs,residual,ratio,violated\n";
  for (const auto& row : table.rows) {
    const auto& r = row.report;
    os << format_double(row.value) << ',' << format_double(r.lhs) << ','
       << format_double(r.rhs) << ',' << format_double(r.residual) << ','
       << csv_optional(r.ratio) << ',' << (r.violated ? "true" : "false") << '\n';
  }
  return os.str();
}

// --- sampled-run -----------------------------------------------------------

std::string to_json(const SampledRun& run) {
  const auto& s = run.sampled;
  json sampled = equality_json(s.report);
  sampled["lhs_sigma"] = number(s.lhs_sigma);
  sampled["rhs_sigma"] = number(s.rhs_sigma);
  sampled["residual_sigma"] = number(s.residual_sigma);
  sampled["residual_ci"] = {number(s.residual_ci_low), number(s.residual_ci_high)};
  sampled["ratio_sigma"] = optional_number(s.ratio_sigma);

  json corr = json::array();
  for (std::size_t i = 0; i < s.estimates.size(); ++i) {
    const auto& [choice, est] = s.estimates[i];
    corr.push_back({{"choice", choice},
                    {"estimate", number(est.estimate)},
                    {"stderr", number(est.stderr_)},
                    {"exact", number(run.exact_correlations[i].second)}});
  }
  return dump({{"command", "sampled-run"},
               {"system", run.system},
               {"shots", run.shots},
               {"seed", run.seed},
               {"k", number(s.k)},
               {"exact", equality_json(run.exact)},
               {"sampled", sampled},
               {"correlations", corr}});
}

std::string to_csv(const SampledRun& run) {
  const auto& s = run.sampled;
  std::ostringstream os;
  os << "quantity,sampled,sigma,exact\n";
  os << "lhs," << format_double(s.report.lhs) << ',' << format_double(s.lhs_sigma) << ','
     << format_double(run.exact.lhs) << '\n';
  os << "rhs," << format_double(s.report.rhs) << ',' << format_double(s.rhs_sigma) << ','
     << format_double(run.exact.rhs) << '\n';
  os << "residual," << format_double(s.report.residual) << ','
     << format_double(s.residual_sigma) << ',' << format_double(run.exact.residual) << '\n';
  os << "ratio," << csv_optional(s.report.ratio) << ',' << csv_optional(s.ratio_sigma) << ','
     << csv_optional(run.exact.ratio) << '\n';
  for (std::size_t i = 0; i < s.estimates.size(); ++i) {
    const auto& [choice, est] = s.estimates[i];
    os << "E" << choice_str(choice) << ',' << format_double(est.estimate) << ','
       << format_double(est.stderr_) << ',' << format_double(run.exact_correlations[i].second)
       << '\n';
  }
  os << "violated," << (s.report.violated ? "true" : "false") << ",,"
     << (run.exact.violated ? "true" : "false") << '\n';
  return os.str();
}

// --- cfrd ------------------------------------------------------------------

std::string to_json(const CfrdRun& run) {
  const auto& d = run.decomposition;
  json pairs = json::array();
  for (const auto& m : d.matched_pairs) {
    pairs.push_back({{"positive", {m.positive_a, m.positive_b}},
                     {"negative", {m.negative_a, m.negative_b}},
                     {"swap", m.swap.subset},
                     {"lhs", number(m.equality.lhs)},
                     {"rhs", number(m.equality.rhs)},
                     {"contribution", number(m.contribution)},
                     {"violated", m.equality.violated}});
  }
  json decomposition = {{"moment_re", number(d.moment.real())},
                        {"moment_im", number(d.moment.imag())},
                        {"re_squared", number(d.re_squared)},
                        {"im_squared", number(d.im_squared)},
                        {"m_prime", number(d.m_prime)},
                        {"cross_total", number(d.cross_total)},
                        {"reconstruction_residual", number(d.reconstruction_residual)},
                        {"matched_pairs", pairs}};
  return dump({{"command", "cfrd"},
               {"n", run.n},
               {"split_r", run.split_r},
               {"cutoff", run.cutoff},
               {"report", equality_json(run.report)},
               {"decomposition", decomposition}});
}

std::string to_csv(const CfrdRun& run) {
  const auto& d = run.decomposition;
  std::ostringstream os;
  os << "quantity,value\n";
  os << "lhs," << format_double(run.report.lhs) << '\n';
  os << "rhs," << format_double(run.report.rhs) << '\n';
  os << "violated," << (run.report.violated ? "true" : "false") << '\n';
  os << "re_squared," << format_double(d.re_squared) << '\n';
  os << "im_squared," << format_double(d.im_squared) << '\n';
  os << "m_prime," << format_double(d.m_prime) << '\n';
  os << "cross_total," << format_double(d.cross_total) << '\n';
  os << "reconstruction_residual," << format_double(d.reconstruction_residual) << '\n';
  std::size_t failing = 0;
  for (const auto& m : d.matched_pairs) failing += m.equality.violated ? 1 : 0;
  os << "matched_pairs," << d.matched_pairs.size() << '\n';
  os << "violated_pairs," << failing << '\n';
  return os.str();
}

}  // namespace entcheck
