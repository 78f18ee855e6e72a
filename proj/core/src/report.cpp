#include "ips/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "ips/error.hpp"
#include "ips/text.hpp"

namespace ips {

namespace {

std::string significant(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string mean_std(double mean, double std) {
  return text::format_fixed(mean, 2) + " (" + text::format_fixed(std, 2) + ")";
}

// Digit runs compare numerically so akm_4 sorts before akm_15.
bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  const auto digit = [](char c) { return c >= '0' && c <= '9'; };
  while (i < a.size() && j < b.size()) {
    if (digit(a[i]) && digit(b[j])) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && digit(a[ie])) ++ie;
      while (je < b.size() && digit(b[je])) ++je;
      const auto na = a.substr(i, ie - i);
      const auto nb = b.substr(j, je - j);
      const auto ta = na.substr(std::min(na.find_first_not_of('0'), na.size()));
      const auto tb = nb.substr(std::min(nb.find_first_not_of('0'), nb.size()));
      if (ta.size() != tb.size()) return ta.size() < tb.size();
      if (ta != tb) return ta < tb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

}  // namespace

AggregateReport build_report(const MetricTable& table, const std::string& baseline, std::optional<WeightedScore> score) {
  AggregateReport report;
  report.baseline = baseline;
  report.score = std::move(score);

  std::set<std::string> methods;
  std::set<std::string> scenarios;
  bool baseline_seen = false;
  for (const auto& [name, matrix] : table) {
    for (const auto& m : matrix.methods()) methods.insert(m);
    for (const auto& s : matrix.scenarios()) scenarios.insert(s);
    baseline_seen = baseline_seen || matrix.has_method(baseline);
  }
  if (!baseline_seen) throw ConfigError("unknown baseline '" + baseline + "'");

  report.methods.push_back(baseline);
  for (const auto& m : methods) {
    if (m != baseline) report.methods.push_back(m);
  }
  std::sort(report.methods.begin() + 1, report.methods.end(), natural_less);
  report.scenarios.assign(scenarios.begin(), scenarios.end());
  std::sort(report.scenarios.begin(), report.scenarios.end(), natural_less);

  for (const auto& [name, matrix] : table) {
    if (!matrix.has_method(baseline)) {
      report.warnings.push_back("metric '" + name + "' skipped: baseline '" + baseline + "' has no values");
      continue;
    }
    try {
      auto agg = aggregate_metric(matrix, baseline);
      report.warnings.insert(report.warnings.end(), agg.warnings.begin(), agg.warnings.end());
      report.metrics.emplace(name, std::move(agg));
    } catch (const NormalizationError& e) {
      report.warnings.push_back("metric '" + name + "' skipped: " + e.what());
    }
  }

  if (report.score) {
    validate(*report.score);
    for (const auto& method : report.methods) {
      std::map<std::string, double> aggregates;
      for (const auto& [name, agg] : report.metrics) {
        const auto it = agg.by_method.find(method);
        if (it != agg.by_method.end()) aggregates[name] = it->second.cross_scenario_mean;
      }
      try {
        report.weighted[method] = weighted_combine(aggregates, *report.score);
      } catch (const ConfigError& e) {
        report.warnings.push_back("no weighted score for '" + method + "': " + e.what());
      }
    }
  }
  return report;
}

std::string format_aggregate_csv(const AggregateReport& report) {
  std::string out = "metric,method,scenario,mean,normalized,std\n";
  for (const auto& [name, agg] : report.metrics) {
    for (const auto& method : report.methods) {
      const auto it = agg.by_method.find(method);
      if (it == agg.by_method.end()) continue;
      const auto& a = it->second;
      for (const auto& sc : report.scenarios) {
        const auto mean = a.per_scenario_mean.find(sc);
        if (mean == a.per_scenario_mean.end()) continue;
        const auto norm = a.per_scenario_normalized.find(sc);
        out += name + ',' + method + ',' + sc + ',' + text::format_shortest(mean->second) + ',' +
               (norm == a.per_scenario_normalized.end() ? std::string() : text::format_shortest(norm->second)) +
               ",\n";
      }
      out += name + ',' + method + ",,," + text::format_shortest(a.cross_scenario_mean) + ',' +
             text::format_shortest(a.cross_scenario_std) + '\n';
    }
  }
  for (const auto& method : report.methods) {
    const auto it = report.weighted.find(method);
    if (it != report.weighted.end()) out += "score," + method + ",,," + text::format_shortest(it->second) + ",\n";
  }
  return out;
}

std::string format_aggregate_markdown(const AggregateReport& report) {
  std::string out = "# Aggregated results\n\nBaseline: `" + report.baseline + "`\n";
  for (const auto& [name, agg] : report.metrics) {
    out += "\n## " + name + " (" +
           (agg.orientation == Orientation::LowerIsBetter ? "lower is better" : "higher is better") + ")\n\n";
    out += "| Scenario |";
    std::string rule = "|---|";
    std::vector<std::string> present;
    for (const auto& m : report.methods) {
      if (!agg.by_method.contains(m)) continue;
      present.push_back(m);
      out += " " + m + " | " + m + " (norm.) |";
      rule += "---:|---:|";
    }
    out += "\n" + rule + "\n";
    for (const auto& sc : report.scenarios) {
      out += "| " + sc + " |";
      for (const auto& m : present) {
        const auto& a = agg.by_method.at(m);
        const auto mean = a.per_scenario_mean.find(sc);
        const auto norm = a.per_scenario_normalized.find(sc);
        out += " " + (mean == a.per_scenario_mean.end() ? std::string("-") : significant(mean->second)) + " | " +
               (norm == a.per_scenario_normalized.end() ? std::string("-") : text::format_fixed(norm->second, 2)) +
               " |";
      }
      out += "\n";
    }
    out += "| **mean (std)** |";
    for (const auto& m : present) {
      const auto& a = agg.by_method.at(m);
      out += " | " + mean_std(a.cross_scenario_mean, a.cross_scenario_std) + " |";
    }
    out += "\n";
  }

  out += "\n## Summary\n\n| Method |";
  std::string rule = "|---|";
  for (const auto& [name, agg] : report.metrics) {
    out += " " + name + " |";
    rule += "---:|";
  }
  if (!report.weighted.empty()) {
    out += " score |";
    rule += "---:|";
  }
  out += "\n" + rule + "\n";
  for (const auto& m : report.methods) {
    out += "| " + m + " |";
    for (const auto& [name, agg] : report.metrics) {
      const auto it = agg.by_method.find(m);
      out += " " + (it == agg.by_method.end() ? std::string("-")
                                               : mean_std(it->second.cross_scenario_mean, it->second.cross_scenario_std)) +
             " |";
    }
    if (!report.weighted.empty()) {
      const auto it = report.weighted.find(m);
      out += " " + (it == report.weighted.end() ? std::string("-") : text::format_fixed(it->second, 2)) + " |";
    }
    out += "\n";
  }
  if (!report.warnings.empty()) {
    out += "\n## Warnings\n\n";
    for (const auto& w : report.warnings) out += "- " + w + "\n";
  }
  return out;
}

std::vector<AggregateRow> parse_aggregate_csv(std::string_view content, const std::string& source) {
  const auto rows = text::lines(content);
  if (rows.empty()) throw ParseError(source, 1, 0, "empty file");
  if (text::trim(rows.front()) != "metric,method,scenario,mean,normalized,std") {
    throw ParseError(source, 1, 0, "expected header metric,method,scenario,mean,normalized,std");
  }
  std::vector<AggregateRow> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (text::trim(rows[r]).empty()) continue;
    const auto cells = text::split(rows[r], ',');
    if (cells.size() != 6) throw ParseError(source, r + 1, 0, "expected 6 columns");
    AggregateRow row;
    row.metric = std::string(text::trim(cells[0]));
    row.method = std::string(text::trim(cells[1]));
    row.scenario = std::string(text::trim(cells[2]));
    std::optional<double>* slots[3] = {&row.mean, &row.normalized, &row.std};
    for (std::size_t c = 0; c < 3; ++c) {
      const auto cell = text::trim(cells[3 + c]);
      if (cell.empty()) continue;
      const auto v = text::parse_double(cell);
      if (!v) throw ParseError(source, r + 1, 4 + c, "non-numeric value '" + std::string(cell) + "'");
      *slots[c] = *v;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace ips
