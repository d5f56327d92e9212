#pragma once

// Scenario files and the deterministic scenario engine.

#include <string>
#include <vector>

#include "spot/world.hpp"

namespace spot {

struct ProximityEvent {
  std::int64_t epoch = 0;
  std::size_t a = 0, b = 0;  // user indices
  std::int64_t duration = 0;
  std::int64_t offset = 0;  // seconds into the epoch
};

// `day` is the day index; the event happens at the start of that day, after
// every contact at or before that instant.
struct HealthEvent {
  std::int64_t day = 0;
  std::size_t user = 0;
};

struct Scenario {
  std::string seed = "spot";
  SecurityLevel level = SecurityLevel::k112;
  std::size_t users = 2;
  std::vector<std::string> primary = {"P1"};
  std::vector<std::string> secondary = {"P2"};
  std::int64_t epoch_seconds = 900;
  std::int64_t epochs = 1;
  std::vector<ProximityEvent> contacts;
  std::vector<HealthEvent> infections;
  // Users that submit a list without being infected.
  std::vector<HealthEvent> healthy_submissions;
  ProtocolConfig config;
  bool parallel = false;
  bool preprocess = false;

  static Scenario from_json(const Json& j);
  Json to_json() const;
  // Throws MalformedInput.
  void validate() const;
  static std::string user_name(std::size_t i) { return "u" + std::to_string(i); }
};

struct SimulationResult {
  World world;
  Transcript transcript;
  std::vector<ContactRecord> contacts;
  std::vector<SubmissionRecord> submissions;
  VerifiedSet published;
  std::map<std::string, RiskResult> risk;
  std::int64_t end_time = 0;

  // Everything except the world state, as one document.
  Json report() const;
};

SimulationResult run_scenario(const Scenario& sc);

}  // namespace spot
