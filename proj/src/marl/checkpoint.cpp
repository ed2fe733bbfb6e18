#include "mahc/marl/checkpoint.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mahc/errors.hpp"

namespace mahc::marl {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "mahc-maddpg-checkpoint";

json net_to_json(const Mlp& net) {
  json layers = json::array();
  for (const auto& layer : net.layers()) {
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(layer.weight.size()));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) w.push_back(layer.weight(r, c));
    }
    layers.push_back({{"in", layer.weight.cols()},
                      {"out", layer.weight.rows()},
                      {"activation", to_string(layer.activation)},
                      {"weight", w},
                      {"bias", std::vector<double>(layer.bias.data(), layer.bias.data() + layer.bias.size())}});
  }
  return {{"layers", layers}};
}

Mlp net_from_json(const json& j) {
  std::vector<DenseLayer> layers;
  for (const auto& lj : j.at("layers")) {
    const auto in = lj.at("in").get<Eigen::Index>();
    const auto out = lj.at("out").get<Eigen::Index>();
    const auto w = lj.at("weight").get<std::vector<double>>();
    const auto b = lj.at("bias").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != in * out || static_cast<Eigen::Index>(b.size()) != out) {
      throw InvalidInput("checkpoint: layer tensor sizes do not match declared dimensions");
    }
    DenseLayer layer;
    layer.weight.resize(out, in);
    for (Eigen::Index r = 0; r < out; ++r) {
      for (Eigen::Index c = 0; c < in; ++c) layer.weight(r, c) = w[static_cast<std::size_t>(r * in + c)];
    }
    layer.bias = Eigen::Map<const Eigen::VectorXd>(b.data(), out);
    layer.activation = activation_from_string(lj.at("activation").get<std::string>());
    layers.push_back(std::move(layer));
  }
  return Mlp(std::move(layers));
}

}  // namespace

std::string checkpoint_to_json(const Checkpoint& ckpt) {
  json agents = json::array();
  for (std::size_t i = 0; i < ckpt.actors.size(); ++i) {
    json a = {{"actor", net_to_json(ckpt.actors[i])}};
    if (i < ckpt.critics.size()) a["critic"] = net_to_json(ckpt.critics[i]);
    agents.push_back(std::move(a));
  }
  json j = {{"format", kFormat},
            {"version", kCheckpointVersion},
            {"n_workers", ckpt.n_workers},
            {"state_scales", {{"distance", ckpt.scales.distance}, {"velocity", ckpt.scales.velocity}}},
            {"agents", agents}};
  return j.dump();
}

Checkpoint checkpoint_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != kFormat) throw InvalidInput("checkpoint: unrecognized format");
    if (j.at("version").get<int>() != kCheckpointVersion) throw InvalidInput("checkpoint: unsupported version");
    Checkpoint ckpt;
    ckpt.n_workers = j.at("n_workers").get<std::size_t>();
    ckpt.scales.distance = j.at("state_scales").at("distance").get<double>();
    ckpt.scales.velocity = j.at("state_scales").at("velocity").get<double>();
    for (const auto& a : j.at("agents")) {
      ckpt.actors.push_back(net_from_json(a.at("actor")));
      if (a.contains("critic")) ckpt.critics.push_back(net_from_json(a.at("critic")));
    }
    if (ckpt.actors.size() != ckpt.n_workers) throw InvalidInput("checkpoint: actor count differs from n_workers");
    for (const auto& actor : ckpt.actors) {
      if (actor.input_dim() != state_dim(ckpt.n_workers) || actor.output_dim() != 1) {
        throw InvalidInput("checkpoint: actor shape does not match n_workers");
      }
    }
    return ckpt;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("checkpoint: malformed JSON: ") + e.what());
  }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write checkpoint " + path.string());
  out << checkpoint_to_json(ckpt) << '\n';
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("checkpoint: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return checkpoint_from_json(ss.str());
}

}  // namespace mahc::marl
