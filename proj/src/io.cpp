#include "graphalign/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace graphalign {

namespace {

std::string fmt_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void append_real_array(std::string& out, const double* data, int count) {
  out += '[';
  for (int i = 0; i < count; ++i) {
    if (i) out += ',';
    out += fmt_real(data[i]);
  }
  out += ']';
}

void append_int_array(std::string& out, const std::vector<int>& data) {
  out += '[';
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(data[i]);
  }
  out += ']';
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  const int N = inst.params.num_edges();
  std::string out;
  out += "{\"n\":" + std::to_string(inst.params.n);
  out += ",\"p\":" + std::to_string(inst.params.p);
  out += ",\"rho\":" + fmt_real(inst.params.rho);
  out += ",\"seed\":" + std::to_string(inst.seed);
  out += ",\"pi_star\":[";
  for (int j = 0; j < inst.params.p; ++j) {
    if (j) out += ',';
    append_int_array(out, inst.pi_star.perms[j]);
  }
  out += "],\"signal\":";
  append_real_array(out, inst.signal.data(), N);
  out += ",\"observed\":[";
  for (int j = 0; j < inst.params.p; ++j) {
    if (j) out += ',';
    append_real_array(out, &inst.observed.weights[static_cast<std::size_t>(j) * N], N);
  }
  out += "]}";
  return out;
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json doc = nlohmann::json::parse(text);

  Instance inst;
  inst.params.n = doc.at("n").get<int>();
  inst.params.p = doc.at("p").get<int>();
  inst.params.rho = doc.at("rho").get<double>();
  inst.params.validate();
  inst.seed = doc.at("seed").get<std::uint64_t>();

  const int n = inst.params.n;
  const int p = inst.params.p;
  const int N = inst.params.num_edges();

  const auto& perms = doc.at("pi_star");
  if (static_cast<int>(perms.size()) != p)
    throw std::invalid_argument("instance JSON: pi_star must hold p permutations");
  for (const auto& perm_json : perms) {
    Permutation perm = perm_json.get<Permutation>();
    if (static_cast<int>(perm.size()) != n || !is_permutation(perm))
      throw std::invalid_argument("instance JSON: pi_star entries must be bijections of [0,n)");
    inst.pi_star.perms.push_back(std::move(perm));
  }

  inst.signal = doc.at("signal").get<std::vector<double>>();
  if (static_cast<int>(inst.signal.size()) != N)
    throw std::invalid_argument("instance JSON: signal must have n(n-1)/2 entries");

  const auto& observed = doc.at("observed");
  if (static_cast<int>(observed.size()) != p)
    throw std::invalid_argument("instance JSON: observed must hold p graphs");
  inst.observed = GraphStack(p, N);
  for (int j = 0; j < p; ++j) {
    const std::vector<double> row = observed[j].get<std::vector<double>>();
    if (static_cast<int>(row.size()) != N)
      throw std::invalid_argument("instance JSON: observed rows must have n(n-1)/2 entries");
    for (int e = 0; e < N; ++e) inst.observed.at(j, e) = row[e];
  }
  for (const double w : inst.observed.weights)
    if (!std::isfinite(w)) throw std::invalid_argument("instance JSON: weights must be finite");

  // noise from the model identity (underdetermined at rho = 1, set to zero)
  inst.noise.assign(static_cast<std::size_t>(p) * N, 0.0);
  if (inst.params.rho < 1.0) {
    const double s = std::sqrt(inst.params.rho);
    const double t = std::sqrt(1.0 - inst.params.rho);
    for (int j = 0; j < p; ++j) {
      const std::vector<int> edge_perm = edge_permutation_table(inst.pi_star.perms[j], n);
      for (int e = 0; e < N; ++e)
        inst.noise[static_cast<std::size_t>(j) * N + e] =
            (inst.observed.at(j, e) - s * inst.signal[edge_perm[e]]) / t;
    }
  }
  return inst;
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open for writing: " + path);
  out << instance_to_json(inst) << '\n';
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace graphalign
