// Copyright 2026 The STS2 Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "sts2/harness/checkpoint.h"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sts2::harness {
namespace {

using Kind = CheckpointError::Kind;

class Writer {
 public:
  void U8(std::uint8_t v) { out_.push_back(static_cast<char>(v)); }
  void U16(std::uint16_t v) { Int(v, 2); }
  void U32(std::uint32_t v) { Int(v, 4); }
  void U64(std::uint64_t v) { Int(v, 8); }
  void F32(double v) { U32(std::bit_cast<std::uint32_t>(static_cast<float>(v))); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void Bytes(const char* p, std::size_t n) { out_.append(p, n); }
  std::string Take() { return std::move(out_); }

 private:
  void Int(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  std::uint8_t U8() { return static_cast<std::uint8_t>(Take(1)[0]); }
  std::uint16_t U16() { return static_cast<std::uint16_t>(Int(2)); }
  std::uint32_t U32() { return static_cast<std::uint32_t>(Int(4)); }
  std::uint64_t U64() { return Int(8); }
  double F32() { return std::bit_cast<float>(U32()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::string_view Take(std::size_t n) {
    if (in_.size() - pos_ < n) {
      throw CheckpointError(Kind::kTruncated,
                            "checkpoint truncated at byte " +
                                std::to_string(in_.size()));
    }
    std::string_view s = in_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  // Guards counts read from the file before allocating for them.
  void Need(std::uint64_t count, std::size_t width) {
    if (count > (in_.size() - pos_) / width) Take(in_.size() - pos_ + 1);
  }
  std::size_t remaining() const { return in_.size() - pos_; }

 private:
  std::uint64_t Int(int bytes) {
    const std::string_view s = Take(static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(s[i])) << (8 * i);
    }
    return v;
  }
  std::string_view in_;
  std::size_t pos_ = 0;
};

void Mismatch(const std::string& what) {
  throw CheckpointError(Kind::kSizeMismatch, "checkpoint size mismatch: " + what);
}

}  // namespace

std::string_view AlgoName(Algo algo) {
  return algo == Algo::kDqn ? "dqn" : "ppo";
}

Checkpoint CheckpointFromDqn(const rl::DqnAgent& agent, int joint_agents,
                             std::uint64_t config_hash) {
  Checkpoint c;
  c.algo = Algo::kDqn;
  c.obs_size = agent.obs_size;
  c.action_count = agent.action_count;
  c.joint_agents = joint_agents;
  c.env_steps = agent.env_steps;
  c.config_hash = config_hash;
  c.networks = {agent.online, agent.target};
  c.optimizers = {agent.adam};
  return c;
}

Checkpoint CheckpointFromPpo(const rl::PpoAgent& agent, int joint_agents,
                             std::uint64_t config_hash) {
  Checkpoint c;
  c.algo = Algo::kPpo;
  c.obs_size = agent.obs_size;
  c.action_count = agent.action_count;
  c.joint_agents = joint_agents;
  c.env_steps = agent.env_steps;
  c.config_hash = config_hash;
  c.networks = {agent.policy, agent.value};
  c.optimizers = {agent.policy_adam, agent.value_adam};
  return c;
}

std::string EncodeCheckpoint(const Checkpoint& ckpt) {
  Writer w;
  w.Bytes(kCheckpointMagic, sizeof(kCheckpointMagic));
  w.U16(kCheckpointVersion);
  w.U8(static_cast<std::uint8_t>(ckpt.algo));
  w.U8(0);
  w.U32(static_cast<std::uint32_t>(ckpt.obs_size));
  w.U32(static_cast<std::uint32_t>(ckpt.action_count));
  w.U32(static_cast<std::uint32_t>(ckpt.joint_agents));
  w.U64(ckpt.env_steps);
  w.U64(ckpt.config_hash);
  w.U32(static_cast<std::uint32_t>(ckpt.networks.size()));
  for (const nn::Mlp& net : ckpt.networks) {
    w.U32(static_cast<std::uint32_t>(net.layer_sizes().size()));
    for (int s : net.layer_sizes()) w.U32(static_cast<std::uint32_t>(s));
    for (double p : net.parameters()) w.F32(p);
  }
  w.U32(static_cast<std::uint32_t>(ckpt.optimizers.size()));
  for (const nn::AdamState& a : ckpt.optimizers) {
    w.U64(a.step_count);
    w.F64(a.learning_rate);
    w.F64(a.beta1);
    w.F64(a.beta2);
    w.F64(a.epsilon);
    w.U32(static_cast<std::uint32_t>(a.first_moment.size()));
    for (double m : a.first_moment) w.F32(m);
    for (double v : a.second_moment) w.F32(v);
  }
  return w.Take();
}

Checkpoint DecodeCheckpoint(std::string_view bytes) {
  Reader r(bytes);
  const std::size_t head = std::min(bytes.size(), sizeof(kCheckpointMagic));
  if (std::memcmp(bytes.data(), kCheckpointMagic, head) != 0) {
    throw CheckpointError(Kind::kBadMagic,
                          "not a checkpoint: expected magic \"STS2CKPT\"");
  }
  r.Take(sizeof(kCheckpointMagic));
  const std::uint16_t version = r.U16();
  if (version != kCheckpointVersion) {
    throw CheckpointError(Kind::kVersion,
                          "checkpoint version " + std::to_string(version) +
                              " unsupported (expected " +
                              std::to_string(kCheckpointVersion) + ")");
  }
  Checkpoint c;
  const std::uint8_t algo = r.U8();
  if (algo != 1 && algo != 2) Mismatch("unknown algo tag " + std::to_string(algo));
  c.algo = static_cast<Algo>(algo);
  r.U8();
  c.obs_size = static_cast<int>(r.U32());
  c.action_count = static_cast<int>(r.U32());
  c.joint_agents = static_cast<int>(r.U32());
  c.env_steps = r.U64();
  c.config_hash = r.U64();

  const std::uint32_t nets = r.U32();
  r.Need(nets, 4);
  for (std::uint32_t n = 0; n < nets; ++n) {
    const std::uint32_t layers = r.U32();
    r.Need(layers, 4);
    std::vector<int> sizes(layers);
    for (auto& s : sizes) {
      s = static_cast<int>(r.U32());
      if (s < 1) Mismatch("layer size 0");
    }
    if (layers < 2) Mismatch("network with fewer than two layers");
    const std::size_t count = nn::ParameterCount(sizes);
    r.Need(count, 4);
    std::vector<double> params(count);
    for (double& p : params) p = r.F32();
    nn::Mlp net = nn::Mlp::Init(sizes, 0);
    net.SetParameters(params);
    c.networks.push_back(std::move(net));
  }
  if (c.networks.empty()) Mismatch("no networks");
  const nn::Mlp& acting = c.networks.front();
  if (acting.input_size() != c.obs_size) {
    Mismatch("header observation size " + std::to_string(c.obs_size) +
             " vs network input " + std::to_string(acting.input_size()));
  }
  if (acting.output_size() != c.action_count) {
    Mismatch("header action count " + std::to_string(c.action_count) +
             " vs network output " + std::to_string(acting.output_size()));
  }

  const std::uint32_t opts = r.U32();
  r.Need(opts, 44);
  for (std::uint32_t o = 0; o < opts; ++o) {
    nn::AdamState a;
    a.step_count = r.U64();
    a.learning_rate = r.F64();
    a.beta1 = r.F64();
    a.beta2 = r.F64();
    a.epsilon = r.F64();
    const std::uint32_t n = r.U32();
    r.Need(n, 8);
    if (o < c.networks.size() && n != c.networks[o].parameter_count()) {
      Mismatch("optimizer " + std::to_string(o) + " has " + std::to_string(n) +
               " moments for " +
               std::to_string(c.networks[o].parameter_count()) + " parameters");
    }
    a.first_moment.resize(n);
    a.second_moment.resize(n);
    for (double& m : a.first_moment) m = r.F32();
    for (double& v : a.second_moment) v = r.F32();
    c.optimizers.push_back(std::move(a));
  }
  if (r.remaining() != 0) {
    Mismatch(std::to_string(r.remaining()) + " trailing bytes");
  }
  return c;
}

void SaveCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  const std::string bytes = EncodeCheckpoint(ckpt);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError(Kind::kIo, "cannot write " + path);
}

Checkpoint LoadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError(Kind::kIo, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return DecodeCheckpoint(buf.str());
}

int GreedyAction(const Checkpoint& ckpt, std::span<const float> obs) {
  return rl::DqnGreedy(ckpt.acting_network(), obs);
}

}  // namespace sts2::harness
