#include "gio/report.hpp"

#include "gio/error.hpp"

namespace gio {

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::Increase: return "increase";
    case StopReason::MinDifference: return "min_difference";
    case StopReason::MinKl: return "min_kl";
    case StopReason::DataSize: return "data_size";
    case StopReason::SequentialIncrease: return "seq_increase";
    case StopReason::MaxResets: return "max_resets";
    case StopReason::Exhausted: return "exhausted";
    case StopReason::MaxIter: return "max_iter";
  }
  return "max_iter";
}

StopReason parse_stop_reason(std::string_view name) {
  for (auto r : {StopReason::Increase, StopReason::MinDifference, StopReason::MinKl, StopReason::DataSize,
                 StopReason::SequentialIncrease, StopReason::MaxResets, StopReason::Exhausted, StopReason::MaxIter}) {
    if (to_string(r) == name) return r;
  }
  throw DataError("unknown termination reason '" + std::string(name) + "'");
}

std::vector<std::size_t> SelectionReport::selected() const {
  std::vector<std::size_t> out(initial);
  out.insert(out.end(), acquired.begin(), acquired.end());
  return out;
}

void to_json(nlohmann::json& j, const SelectionReport& r) {
  j = nlohmann::json{
      {"method", r.method},
      {"termination_reason", to_string(r.reason)},
      {"iterations", r.iterations},
      {"resets_used", r.resets_used},
      {"initial_centroids", r.initial},
      {"acquired_centroids", r.acquired},
      {"kl_history", r.kl_history},
      {"baseline_kl", r.baseline_kl ? nlohmann::json(*r.baseline_kl) : nlohmann::json(nullptr)},
      {"rejected_kl", r.rejected_kl ? nlohmann::json(*r.rejected_kl) : nlohmann::json(nullptr)},
      {"timings", r.timings},
  };
}

void from_json(const nlohmann::json& j, SelectionReport& r) {
  r = SelectionReport{};
  r.method = j.at("method").get<std::string>();
  r.reason = parse_stop_reason(j.at("termination_reason").get<std::string>());
  r.iterations = j.at("iterations").get<std::size_t>();
  r.resets_used = j.at("resets_used").get<std::size_t>();
  r.initial = j.at("initial_centroids").get<std::vector<std::size_t>>();
  r.acquired = j.at("acquired_centroids").get<std::vector<std::size_t>>();
  r.kl_history = j.at("kl_history").get<std::vector<double>>();
  if (!j.at("baseline_kl").is_null()) r.baseline_kl = j.at("baseline_kl").get<double>();
  if (j.contains("rejected_kl") && !j.at("rejected_kl").is_null()) r.rejected_kl = j.at("rejected_kl").get<double>();
  r.timings = j.at("timings").get<std::map<std::string, double>>();
}

}  // namespace gio
