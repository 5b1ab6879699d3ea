// Copyright 2026 The gcdc Authors
// SPDX-License-Identifier: Apache-2.0

#include "gcdc/summary.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace gcdc {

std::string Improvement::key() const {
  return std::string(scheme_name(better)) + "_vs_" + std::string(scheme_name(baseline));
}

double Summary::improvement(Scheme better, Scheme baseline) const {
  for (const auto& imp : improvements) {
    if (imp.better == better && imp.baseline == baseline) return imp.fraction;
  }
  throw ConfigError("summary has no " + std::string(scheme_name(better)) + " vs " +
                    std::string(scheme_name(baseline)) + " comparison");
}

Summary summarize(const std::vector<IterationRecord>& records) {
  std::map<Scheme, std::vector<double>> times;
  for (const auto& rec : records) times[rec.scheme].push_back(rec.completion_time);

  Summary out;
  for (auto& [scheme, values] : times) {
    SchemeStats st;
    st.n_records = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    st.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    st.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    const std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    st.p95 = values[std::max<std::size_t>(rank, 1) - 1];
    out.stats[scheme] = st;
  }

  for (std::size_t i = 0; i < std::size(kAllSchemes); ++i) {
    for (std::size_t j = i + 1; j < std::size(kAllSchemes); ++j) {
      const Scheme a = kAllSchemes[i];
      const Scheme b = kAllSchemes[j];
      if (!out.stats.count(a) || !out.stats.count(b)) continue;
      out.improvements.push_back({a, b, 1.0 - out.stats[a].mean / out.stats[b].mean});
    }
  }
  return out;
}

std::string summary_json(const Summary& summary) {
  nlohmann::ordered_json schemes = nlohmann::ordered_json::object();
  for (Scheme s : kAllSchemes) {
    auto it = summary.stats.find(s);
    if (it == summary.stats.end()) continue;
    schemes[std::string(scheme_name(s))] = {{"mean", it->second.mean},
                                            {"median", it->second.median},
                                            {"p95", it->second.p95},
                                            {"n_records", it->second.n_records}};
  }
  nlohmann::ordered_json improvements = nlohmann::ordered_json::object();
  for (const auto& imp : summary.improvements) improvements[imp.key()] = imp.fraction;
  nlohmann::ordered_json doc = {{"schemes", std::move(schemes)}, {"improvements", std::move(improvements)}};
  return doc.dump(2) + "\n";
}

}  // namespace gcdc
