#pragma once

// All parties of one deployment in one place, with the message flow between
// them. The scenario engine and the command line tool both drive this.

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "spot/entities.hpp"

namespace spot {

// State that a command needs but the working directory lacks.
class MissingState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One message between parties. `bytes` is the length of the concatenated
// canonical encodings of the elements counted in `elements`.
struct Message {
  std::int64_t time = 0;
  std::string phase, kind, from, to;
  ElementCount elements;
  std::size_t bytes = 0;
  std::string digest;  // 16-byte SHAKE256 of the body, hex
};

class Transcript {
 public:
  // Concatenates canonical encodings and counts elements per group.
  class Body {
   public:
    Body& add(const Scalar& s);
    Body& add(const G1Point& p);
    Body& add(const G2Point& q);
    Body& add(const GroupSignature& pi);
    Body& add(const XsigSignature& s);
    Body& add(const ProxyPublicKey& pk);
    Body& add(const GroupVerifKey& vk);
    Body& add(const VerifiedSet& vs);
    template <class T>
    Body& add_all(const std::vector<T>& v) {
      for (const auto& x : v) add(x);
      return *this;
    }
    const Bytes& bytes() const { return w_.bytes(); }
    const ElementCount& elements() const { return n_; }

   private:
    Writer w_;
    ElementCount n_;
  };

  void record(std::int64_t time, std::string phase, std::string kind, std::string from, std::string to,
              const Body& body);
  const std::vector<Message>& messages() const { return messages_; }
  Json to_json() const;

 private:
  std::vector<Message> messages_;
};

struct ContactRecord {
  std::int64_t epoch = 0, time = 0, duration = 0;
  std::string a, b;
  std::string proxy_a, proxy_b;
  // stored | tie | duplicate | unmatched
  std::string status;
  std::optional<Scalar> ccm;
};

struct SubmissionRecord {
  std::int64_t time = 0;
  std::string user;
  bool infected = false;
  std::size_t submitted = 0;
  ContactListVerdict verdict;
};

class World {
 public:
  World(SecurityLevel level, Bytes seed, ProtocolConfig cfg = {});
  World(World&&) noexcept;
  World& operator=(World&&) noexcept;
  ~World();

  const PairingContext& ctx() const { return *ctx_; }
  const ProtocolConfig& config() const { return cfg_; }

  // Setup of each authority; "gm", "server", "ha".
  void keygen(const std::string& role, Rng& rng, Transcript* t = nullptr);
  // Join: GM certifies a fresh proxy key; `primary` picks the subset.
  void join_proxy(const std::string& name, bool primary, Rng& rng, Transcript* t = nullptr);
  void register_user(const std::string& name, Rng& rng, Transcript* t = nullptr);

  // Each user of the pair broadcasts its epoch EBID, both derive the CCM and
  // upload through their proxy; on a match both proxies sign and the users
  // store their entries.
  ContactRecord contact(const std::string& a, const std::string& b, std::int64_t epoch, std::int64_t time,
                        std::int64_t duration, Rng& rng, Transcript* t = nullptr);
  void rotate_all(std::int64_t epoch, Rng& rng);

  void declare_infected(const std::string& user);
  SubmissionRecord submit(const std::string& user, std::int64_t time, Transcript* t = nullptr);
  VerifiedSet publish(std::int64_t time, Transcript* t = nullptr);
  // Against the latest publication; throws MissingState if nothing was published.
  RiskResult risk(const std::string& user) const;

  void set_execution(Execution mode) { mode_ = mode; }
  // Precomputes pairing lines for the group key used by verification.
  void set_preprocessing(bool on);

  const GroupManagerKey& gm() const;
  const GroupVerifKey& vk() const;
  HealthAuthority& ha();
  const HealthAuthority& ha() const;
  Server& server();
  const Server& server() const;
  User& user(const std::string& name);
  const User& user(const std::string& name) const;
  const std::map<std::string, User>& users() const { return users_; }
  const std::map<std::string, Proxy>& proxies() const { return proxies_; }
  const ProxyRoster& roster() const { return roster_; }
  std::int64_t clock() const { return clock_; }
  void advance(std::int64_t now);

  // One JSON file per party under `dir`.
  void save(const std::filesystem::path& dir) const;
  static World load(const std::filesystem::path& dir);

 private:
  std::unique_ptr<PairingContext> ctx_;
  ProtocolConfig cfg_;
  std::optional<GroupManagerKey> gm_;
  std::optional<GroupVerifKey> vk_;
  std::map<std::string, Proxy> proxies_;
  ProxyRoster roster_;
  std::optional<HealthAuthority> ha_;
  std::optional<Server> server_;
  std::map<std::string, User> users_;
  std::int64_t clock_ = 0;
  Execution mode_ = Execution::kSequential;
  std::unique_ptr<PreparedGroupKey> prepared_;
};

}  // namespace spot
